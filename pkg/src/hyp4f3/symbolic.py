"""Exact polynomials and rational functions in the parameters a, b, c, d, e.

Polynomials are sparse integer polynomials from a fixed sympy ring
``ZZ[a,b,c,d,e]`` with graded-lexicographic order (a > b > c > d > e).  A
polynomial is a dict from exponent 5-tuples to nonzero integers, so the
``Poly`` type below is that ring's element type used directly.  Large gcds
and exact divisions are delegated to FLINT, whose multivariate gcd is far
faster than the pure-Python heuristic one on composed coefficients.

:class:`RationalFunction` keeps ``num/den`` in lowest terms with the leading
coefficient of ``den`` positive, which makes structural equality coincide
with equality of functions.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import flint
from sympy.polys.domains import ZZ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, ring

from .errors import DivisionByZeroFunction, MalformedMatrix, ZeroDenominator

VARIABLES = ("a", "b", "c", "d", "e")

RING, A, B, C, D, E = ring(",".join(VARIABLES), ZZ, grlex)
GENS = (A, B, C, D, E)

Poly = PolyElement

_FLINT_CTX = flint.fmpz_mpoly_ctx.get(VARIABLES, "deglex")
# below this many terms the conversion costs more than it saves
_FLINT_MIN_TERMS = 12


# sympy picks FLINT integers as its ground type when python-flint is present
_SHARED_INTS = ZZ.dtype is flint.fmpz


def _to_flint(p: Poly):
    # results of FLINT calls remember their FLINT form; the length check
    # guards against a ring element mutated in place after caching
    cached = getattr(p, "_flint", None)
    if cached is not None and cached[0] == len(p):
        return cached[1]
    if _SHARED_INTS:
        f = _FLINT_CTX.from_dict(p)
    else:
        f = _FLINT_CTX.from_dict({k: int(v) for k, v in p.items()})
    p._flint = (len(p), f)
    return f


def _from_flint(f) -> Poly:
    # exponent vectors come back as fmpz tuples; the ring wants plain ints
    if _SHARED_INTS:
        p = RING.dtype(zip(map(tuple, (map(int, m) for m in f.monoms())), f.coeffs()))
    else:
        p = RING.dtype({tuple(map(int, k)): ZZ.dtype(int(v)) for k, v in f.to_dict().items()})
    p._flint = (len(p), f)
    return p


def _big(*ps: Poly) -> bool:
    return max(len(p) for p in ps) >= _FLINT_MIN_TERMS


def poly(value) -> Poly:
    """Coerce an int or ring element into the parameter ring."""
    if isinstance(value, PolyElement) and value.ring is RING:
        return value
    return RING(value)


def poly_from_terms(terms: Iterable[tuple[Sequence[int], int]]) -> Poly:
    acc = {}
    for exps, coeff in terms:
        exps = tuple(int(x) for x in exps)
        if len(exps) != 5:
            raise ValueError(f"exponent vector must have 5 entries, got {exps}")
        acc[exps] = acc.get(exps, 0) + int(coeff)
    return RING.from_dict({k: v for k, v in acc.items() if v})


def poly_terms(p: Poly) -> list[tuple[tuple[int, ...], int]]:
    """Terms in descending grlex order as ``(exponents, coefficient)``."""
    return [(tuple(m), int(c)) for m, c in p.terms()]


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Greatest common divisor with positive leading coefficient."""
    p, q = poly(p), poly(q)
    if not q:
        g = p
    elif not p:
        g = q
    elif _big(p, q):
        g = _from_flint(_to_flint(p).gcd(_to_flint(q)))
    else:
        g = p.gcd(q)
    if g and g.LC < 0:
        g = -g
    return g


def poly_cofactors(p: Poly, q: Poly) -> tuple[Poly, Poly, Poly]:
    """``(g, p/g, q/g)`` with ``g = gcd(p, q)``; both arguments nonzero."""
    if not _big(p, q):
        return p.cofactors(q)
    fp, fq = _to_flint(p), _to_flint(q)
    g = fp.gcd(fq)
    return _from_flint(g), _from_flint(fp / g), _from_flint(fq / g)


def poly_mul(p: Poly, q: Poly) -> Poly:
    if len(p) * len(q) < 4 * _FLINT_MIN_TERMS**2:
        return p * q
    return _from_flint(_to_flint(p) * _to_flint(q))


def poly_exquo(p: Poly, q: Poly) -> Poly:
    """Exact quotient; ``q`` must divide ``p``."""
    if q == 1:
        return p
    if not _big(p, q):
        return p.exquo(q)
    return _from_flint(_to_flint(p) / _to_flint(q))


def linear_poly(coeffs: Sequence[int], shift: int = 0) -> Poly:
    p = RING(int(shift))
    for c, g in zip(coeffs, GENS):
        if c:
            p += int(c) * g
    return p


class RationalFunction:
    """Canonical quotient ``num/den`` of two parameter polynomials.

    Instances are immutable; arithmetic returns new canonical instances.
    Plain integers and :class:`fractions.Fraction` are accepted as operands.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=1, _canonical=False):
        num, den = poly(num), poly(den)
        if not den:
            raise ZeroDenominator("denominator is the zero polynomial")
        if not _canonical:
            if not num:
                den = RING.one
            elif den != 1:
                _, num, den = poly_cofactors(num, den)
            if den.LC < 0:
                num, den = -num, -den
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    @classmethod
    def coerce(cls, value) -> "RationalFunction":
        if isinstance(value, RationalFunction):
            return value
        if isinstance(value, Fraction):
            return cls(value.numerator, value.denominator)
        return cls(value)

    @staticmethod
    def _foreign(value) -> bool:
        # richer types (gamma products) handle mixed arithmetic themselves
        return not isinstance(value, (RationalFunction, Fraction, int, PolyElement))

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num

    def is_one(self) -> bool:
        return self.num == 1 and self.den == 1

    def is_polynomial(self) -> bool:
        return self.den == 1

    def is_constant(self) -> bool:
        return self.num.is_ground and self.den.is_ground

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if self._foreign(other):
            return NotImplemented
        o = RationalFunction.coerce(other)
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(
            poly_mul(self.num, o.den) + poly_mul(o.num, self.den), poly_mul(self.den, o.den)
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _canonical=True)

    def __sub__(self, other):
        if self._foreign(other):
            return NotImplemented
        return self + (-RationalFunction.coerce(other))

    def __rsub__(self, other):
        return RationalFunction.coerce(other) - self

    def __mul__(self, other):
        if self._foreign(other):
            return NotImplemented
        o = RationalFunction.coerce(other)
        if self.is_zero() or o.is_zero():
            return ZERO
        # cross-cancel first to keep intermediate sizes down
        g1 = RING.one if o.den == 1 else poly_gcd(self.num, o.den)
        g2 = RING.one if self.den == 1 else poly_gcd(o.num, self.den)
        n1, d2 = poly_exquo(self.num, g1), poly_exquo(o.den, g1)
        n2, d1 = poly_exquo(o.num, g2), poly_exquo(self.den, g2)
        num, den = poly_mul(n1, n2), poly_mul(d1, d2)
        if den.LC < 0:
            num, den = -num, -den
        return RationalFunction(num, den, _canonical=True)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise DivisionByZeroFunction("inverse of the zero function")
        num, den = self.den, self.num
        if den.LC < 0:
            num, den = -num, -den
        return RationalFunction(num, den, _canonical=True)

    def __truediv__(self, other):
        if self._foreign(other):
            return NotImplemented
        o = RationalFunction.coerce(other)
        if o.is_zero():
            raise DivisionByZeroFunction("division by the zero function")
        return self * o.inverse()

    def __rtruediv__(self, other):
        return RationalFunction.coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RationalFunction(self.num**k, self.den**k, _canonical=True)

    # -- comparison -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalFunction.coerce(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            h = hash((tuple(sorted(self.num.items())), tuple(sorted(self.den.items()))))
            object.__setattr__(self, "_hash", h)
        return self._hash

    # -- substitution and evaluation -------------------------------------
    def substitute(self, m: "AffineMap") -> "RationalFunction":
        if m.is_identity():
            return self
        num, den = substitute_poly(self.num, m), substitute_poly(self.den, m)
        if not isinstance(m, AffineMap):
            return RationalFunction(num, den)
        # an integer-unimodular affine change of variables is a ring
        # automorphism, so coprimality survives; only the sign may flip
        if den.LC < 0:
            num, den = -num, -den
        return RationalFunction(num, den, _canonical=True)

    def evaluate(self, point: Sequence) -> Fraction:
        """Exact value at a point ``(a, b, c, d, e)`` of rationals."""
        den = eval_poly(self.den, point)
        if den == 0:
            raise ZeroDenominator(f"denominator vanishes at {tuple(point)}")
        return eval_poly(self.num, point) / den

    def __call__(self, point: Sequence) -> Fraction:
        return self.evaluate(point)

    # -- rendering ----------------------------------------------------
    def __repr__(self):
        return f"RationalFunction({self.to_text()!r})"

    def __str__(self):
        return self.to_text()

    def to_text(self) -> str:
        from .render import rf_text

        return rf_text(self)

    def to_latex(self) -> str:
        from .render import rf_latex

        return rf_latex(self)


ZERO = RationalFunction(0, _canonical=True)
ONE = RationalFunction(1, _canonical=True)


def rf_normalize(num, den) -> RationalFunction:
    return RationalFunction(num, den)


def rf_arith(x, y, op: str) -> RationalFunction:
    x, y = RationalFunction.coerce(x), RationalFunction.coerce(y)
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown operation {op!r}")


def rf_is_zero(x: RationalFunction) -> bool:
    return RationalFunction.coerce(x).is_zero()


def rf_substitute(x: RationalFunction, m: "AffineMap") -> RationalFunction:
    return RationalFunction.coerce(x).substitute(m)


def eval_poly(p: Poly, point: Sequence) -> Fraction:
    vals = [Fraction(v) for v in point]
    if len(vals) < 5:
        raise ValueError("a point needs values for a, b, c, d, e")
    total = Fraction(0)
    powers = [dict() for _ in range(5)]
    for exps, coeff in p.items():
        term = Fraction(int(coeff))
        for i, k in enumerate(exps):
            if k:
                cache = powers[i]
                if k not in cache:
                    cache[k] = vals[i] ** k
                term *= cache[k]
        total += term
    return total


def substitute_poly(p: Poly, m: "AffineMap") -> Poly:
    forms = m.linear_polys()
    if _big(p):
        return _from_flint(_to_flint(p).compose(*(_to_flint(f) for f in forms)))
    powers: list[dict[int, Poly]] = [{0: RING.one, 1: f} for f in forms]

    def power(i: int, k: int) -> Poly:
        cache = powers[i]
        if k not in cache:
            cache[k] = power(i, k - 1) * forms[i]
        return cache[k]

    result = RING.zero
    for exps, coeff in p.items():
        term = RING(coeff)
        for i, k in enumerate(exps):
            if k:
                term = term * power(i, k)
        result += term
    return result


def _det(rows: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant."""
    m = [list(r) for r in rows]
    n = len(m)
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


class AffineMap:
    """A 6x6 integer matrix with last row (0,0,0,0,0,1) and |det| = 1.

    Row ``i < 5`` is the integer affine form giving the new value of the
    i-th parameter in terms of ``(a, b, c, d, e, 1)``.
    """

    __slots__ = ("rows", "det", "_polys")

    def __init__(self, rows: Sequence[Sequence[int]]):
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if len(rows) != 6 or any(len(r) != 6 for r in rows):
            raise MalformedMatrix("affine map must be a 6x6 matrix")
        if rows[5] != (0, 0, 0, 0, 0, 1):
            raise MalformedMatrix(f"last row must be (0,0,0,0,0,1), got {rows[5]}")
        det = _det([r[:5] for r in rows[:5]])
        if abs(det) != 1:
            raise MalformedMatrix(f"determinant must be +-1, got {det}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "det", det)
        object.__setattr__(self, "_polys", None)

    def __setattr__(self, name, value):
        raise AttributeError("AffineMap is immutable")

    @classmethod
    def identity(cls) -> "AffineMap":
        return IDENTITY_MAP

    @classmethod
    def from_block(cls, block: Sequence[Sequence[int]], shift: Sequence[int] = (0,) * 5) -> "AffineMap":
        rows = [list(block[i]) + [shift[i]] for i in range(5)]
        rows.append([0, 0, 0, 0, 0, 1])
        return cls(rows)

    @classmethod
    def shift(cls, k: Sequence[int]) -> "AffineMap":
        block = [[int(i == j) for j in range(5)] for i in range(5)]
        return cls.from_block(block, k)

    @classmethod
    def permutation(cls, images: Sequence[int]) -> "AffineMap":
        """Map whose i-th output parameter is input parameter ``images[i]``."""
        block = [[int(j == images[i]) for j in range(5)] for i in range(5)]
        return cls.from_block(block)

    @classmethod
    def from_flat(cls, flat: Sequence[int]) -> "AffineMap":
        if len(flat) != 36:
            raise MalformedMatrix("flat matrix must have 36 entries")
        return cls([flat[6 * i : 6 * i + 6] for i in range(6)])

    def flat(self) -> list[int]:
        return [x for r in self.rows for x in r]

    def block(self) -> tuple[tuple[int, ...], ...]:
        return tuple(r[:5] for r in self.rows[:5])

    def shift_column(self) -> tuple[int, ...]:
        return tuple(r[5] for r in self.rows[:5])

    def is_identity(self) -> bool:
        return self is IDENTITY_MAP or self.rows == IDENTITY_MAP.rows

    def __matmul__(self, other: "AffineMap") -> "AffineMap":
        a, b = self.rows, other.rows
        return AffineMap(
            [[sum(a[i][k] * b[k][j] for k in range(6)) for j in range(6)] for i in range(6)]
        )

    def inverse(self) -> "AffineMap":
        n = 6
        m = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(self.rows)]
        for col in range(n):
            piv = next(r for r in range(col, n) if m[r][col] != 0)
            m[col], m[piv] = m[piv], m[col]
            pv = m[col][col]
            m[col] = [x / pv for x in m[col]]
            for r in range(n):
                if r != col and m[r][col] != 0:
                    f = m[r][col]
                    m[r] = [x - f * y for x, y in zip(m[r], m[col])]
        return AffineMap([[int(x) for x in r[n:]] for r in m])

    def apply(self, point: Sequence) -> tuple:
        """Image of a numeric point ``(a, b, c, d, e)``."""
        v = list(point[:5]) + [1]
        return tuple(sum(r[j] * v[j] for j in range(6)) for r in self.rows[:5])

    def linear_polys(self) -> tuple[Poly, ...]:
        if self._polys is None:
            object.__setattr__(
                self, "_polys", tuple(linear_poly(r[:5], r[5]) for r in self.rows[:5])
            )
        return self._polys

    def __eq__(self, other):
        if not isinstance(other, AffineMap):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"AffineMap({[list(r) for r in self.rows]})"

    def parameter_text(self) -> list[str]:
        from .render import poly_text

        return [poly_text(p) for p in self.linear_polys()]


class Specialization:
    """Integer affine substitution with no invertibility requirement, used to
    impose a linear constraint by eliminating one variable."""

    __slots__ = ("rows", "_polys")

    def __init__(self, rows: Sequence[Sequence[int]]):
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if len(rows) != 5 or any(len(r) != 6 for r in rows):
            raise MalformedMatrix("a specialization needs five rows of six integers")
        object.__setattr__(self, "rows", rows + ((0, 0, 0, 0, 0, 1),))
        object.__setattr__(self, "_polys", tuple(linear_poly(r[:5], r[5]) for r in rows))

    def __setattr__(self, name, value):
        raise AttributeError("Specialization is immutable")

    def is_identity(self) -> bool:
        return self.rows == IDENTITY_MAP.rows

    def linear_polys(self) -> tuple[Poly, ...]:
        return self._polys

    def apply(self, point: Sequence) -> tuple:
        return AffineMap.apply(self, point)

    def __eq__(self, other):
        if not isinstance(other, Specialization):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"Specialization({[list(r) for r in self.rows[:5]]})"


IDENTITY_MAP = AffineMap([[int(i == j) for j in range(6)] for i in range(6)])


def rf(expr) -> RationalFunction:
    """Build a :class:`RationalFunction` from an int/poly, or a ``(num, den)`` pair."""
    if isinstance(expr, tuple):
        return RationalFunction(*expr)
    return RationalFunction.coerce(expr)


def point_values(point) -> tuple:
    """Extract ``(a, b, c, d, e)`` from a mapping, a HypPoint or a sequence."""
    if isinstance(point, Mapping):
        return tuple(point[v] for v in VARIABLES)
    if hasattr(point, "params"):
        return point.params
    return tuple(point[:5])


def parse_rational(text: str) -> RationalFunction:
    """Parse an expression such as ``"(a + 1)/(d - 2)"`` in the five parameters."""
    import sympy

    syms = sympy.symbols(VARIABLES)
    try:
        expr = sympy.sympify(text, locals=dict(zip(VARIABLES, syms)))
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise ValueError(f"cannot parse {text!r}: {exc}") from None
    if expr.free_symbols - set(syms):
        raise ValueError(f"{text!r} uses symbols other than {', '.join(VARIABLES)}")
    num, den = sympy.fraction(sympy.together(expr))
    try:
        n, d = sympy.Poly(num, *syms), sympy.Poly(den, *syms)
    except sympy.PolynomialError:
        raise ValueError(f"{text!r} is not a rational function") from None
    if any(not c.is_Rational for c in n.coeffs() + d.coeffs()):
        raise ValueError(f"{text!r} has non-rational coefficients")
    q = sympy.ilcm(*[c.q for c in n.coeffs() + d.coeffs()])
    return RationalFunction(RING.from_expr(sympy.expand(num * q)), RING.from_expr(sympy.expand(den * q)))

"""Gamma-type coefficients: ``R(r) * prod Gamma(l_i . r + s_i) ** k_i``.

Each gamma argument is an integer linear form in (a, b, c, d, e) plus an
integer shift.  Arguments with the same non-constant part form a *class*;
within a class the recurrence ``Gamma(x + 1) = x Gamma(x)`` moves every
factor down to the smallest shift present, and the linear factors picked up
on the way are multiplied into the rational prefactor.  The reflection
formula is not used, so ``l`` and ``-l`` are different classes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import PoleHit
from sympy.polys.rings import PolyElement

from .symbolic import ONE, RING, AffineMap, Poly, RationalFunction, linear_poly

Factor = tuple[tuple[int, ...], int, int]  # (coeffs, shift, exponent)

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class LinearForm:
    coeffs: tuple[int, ...]
    shift: int = 0

    @classmethod
    def from_poly(cls, p: Poly) -> "LinearForm":
        if any(sum(m) > 1 for m in p.itermonoms()):
            raise ValueError(f"not a linear form: {p}")
        coeffs = [0] * 5
        shift = 0
        for exps, c in p.items():
            if not any(exps):
                shift = int(c)
            else:
                coeffs[exps.index(1)] = int(c)
        return cls(tuple(coeffs), shift)

    def class_key(self) -> tuple[tuple[int, ...], int]:
        """Orientation-normalized coefficients and the orientation flag."""
        for c in self.coeffs:
            if c:
                sign = 1 if c > 0 else -1
                return tuple(sign * x for x in self.coeffs), sign
        return self.coeffs, 1

    def poly(self) -> Poly:
        return linear_poly(self.coeffs, self.shift)

    def evaluate(self, point: Sequence) -> Fraction:
        return sum((Fraction(c) * Fraction(v) for c, v in zip(self.coeffs, point)), Fraction(self.shift))

    def substitute(self, m: AffineMap) -> "LinearForm":
        rows = m.rows
        coeffs = tuple(sum(self.coeffs[i] * rows[i][j] for i in range(5)) for j in range(5))
        shift = self.shift + sum(self.coeffs[i] * rows[i][5] for i in range(5))
        return LinearForm(coeffs, shift)


def _rising(form: Poly, start: int, stop: int) -> Poly:
    """prod_{j=start}^{stop-1} (form + j)."""
    p = RING.one
    for j in range(start, stop):
        p *= form + j
    return p


class GammaType:
    """Immutable gamma-type product, always held in canonical form."""

    __slots__ = ("factors", "prefactor")

    def __init__(self, factors: Iterable[Factor] = (), prefactor=ONE):
        factors, prefactor = _canonicalize(factors, RationalFunction.coerce(prefactor))
        object.__setattr__(self, "factors", factors)
        object.__setattr__(self, "prefactor", prefactor)

    def __setattr__(self, name, value):
        raise AttributeError("GammaType is immutable")

    @classmethod
    def gamma(cls, arg, exp: int = 1) -> "GammaType":
        """``Gamma(arg) ** exp`` for a linear polynomial or :class:`LinearForm`."""
        form = arg if isinstance(arg, LinearForm) else LinearForm.from_poly(RING(arg))
        return cls([(form.coeffs, form.shift, exp)])

    @classmethod
    def rational(cls, x) -> "GammaType":
        return cls((), x)

    # -- predicates -------------------------------------------------------
    def is_rational(self) -> bool:
        return not self.factors

    def is_unit(self) -> bool:
        return not self.factors and self.prefactor.is_one()

    def is_zero(self) -> bool:
        return self.prefactor.is_zero()

    def classes(self) -> dict[tuple[int, ...], int]:
        return {coeffs: exp for coeffs, _, exp in self.factors}

    # -- algebra ----------------------------------------------------------
    def __mul__(self, other):
        if isinstance(other, GammaType):
            return GammaType(self.factors + other.factors, self.prefactor * other.prefactor)
        return GammaType(self.factors, self.prefactor * RationalFunction.coerce(other))

    __rmul__ = __mul__

    def inverse(self) -> "GammaType":
        return GammaType(((c, s, -k) for c, s, k in self.factors), self.prefactor.inverse())

    def __truediv__(self, other):
        if isinstance(other, GammaType):
            return self * other.inverse()
        return GammaType(self.factors, self.prefactor / RationalFunction.coerce(other))

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __neg__(self):
        return GammaType(self.factors, -self.prefactor)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return GammaType(((c, s, e * k) for c, s, e in self.factors), self.prefactor**k)

    def substitute(self, m: AffineMap) -> "GammaType":
        if m.is_identity():
            return self
        new = []
        for coeffs, shift, exp in self.factors:
            form = LinearForm(coeffs, shift).substitute(m)
            new.append((form.coeffs, form.shift, exp))
        return GammaType(new, self.prefactor.substitute(m))

    # -- comparison -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction, RationalFunction, PolyElement)):
            other = GammaType.rational(other)
        if not isinstance(other, GammaType):
            return NotImplemented
        return gt_equal(self, other)

    def __hash__(self):
        # total exponent per class is invariant under shift rewriting
        return hash(tuple((c, k) for c, _, k in self.factors))

    def reflection_ambiguous(self) -> bool:
        """True if this product has classes l and -l, so that a reflection
        identity could make it rational even though shifts cannot."""
        keys = set(self.classes())
        return any(tuple(-x for x in k) in keys for k in keys)

    # -- numerics ---------------------------------------------------------
    def evaluate(self, point: Sequence) -> float:
        pre = self.prefactor.evaluate(point)
        if pre == 0:
            return 0.0
        mant, expo = math.frexp(float(pre))
        for coeffs, shift, k in self.factors:
            x = LinearForm(coeffs, shift).evaluate(point)
            if x <= 0 and x.denominator == 1:
                raise PoleHit(f"gamma argument {LinearForm(coeffs, shift).poly()} = {x} is a pole")
            xf = float(x)
            if abs(xf) < 170:
                g = math.gamma(xf)
                m2, e2 = math.frexp(g)
                for _ in range(abs(k)):
                    if k > 0:
                        mant *= m2
                        expo += e2
                    else:
                        mant /= m2
                        expo -= e2
                    mant, de = math.frexp(mant)
                    expo += de
            else:
                lg = math.lgamma(xf) * k / _LN2
                ip = math.floor(lg)
                mant *= 2.0 ** (lg - ip)
                expo += int(ip)
                if xf < 0 and math.floor(xf) % 2 and k % 2:
                    mant = -mant
                mant, de = math.frexp(mant)
                expo += de
        try:
            return math.ldexp(mant, expo)
        except OverflowError:
            raise OverflowError(f"gamma-type value overflows at {tuple(point)}") from None

    # -- rendering --------------------------------------------------------
    def __repr__(self):
        return f"GammaType({self.to_text()!r})"

    def __str__(self):
        return self.to_text()

    def to_text(self) -> str:
        from .render import gamma_text

        return gamma_text(self)

    def to_latex(self) -> str:
        from .render import gamma_latex

        return gamma_latex(self)


def _canonicalize(factors: Iterable[Factor], prefactor: RationalFunction):
    classes: dict[tuple[int, ...], dict[int, int]] = {}
    for coeffs, shift, exp in factors:
        if exp:
            coeffs = tuple(int(x) for x in coeffs)
            bucket = classes.setdefault(coeffs, {})
            bucket[int(shift)] = bucket.get(int(shift), 0) + int(exp)
    out: list[Factor] = []
    num, den = RING.one, RING.one
    for coeffs in sorted(classes, reverse=True):
        entries = {s: k for s, k in classes[coeffs].items() if k}
        if not entries:
            continue
        if not any(coeffs):
            # Gamma at an integer constant
            for s, k in entries.items():
                if s <= 0:
                    raise PoleHit(f"Gamma({s}) is a pole")
                val = RING(math.factorial(s - 1))
                if k > 0:
                    num *= val**k
                else:
                    den *= val ** (-k)
            continue
        base = min(entries)
        form = linear_poly(coeffs)
        total = 0
        for s, k in entries.items():
            total += k
            if s > base:
                r = _rising(form, base, s)
                if k > 0:
                    num *= r**k
                else:
                    den *= r ** (-k)
        if total:
            out.append((coeffs, base, total))
    if num != 1 or den != 1:
        prefactor = prefactor * RationalFunction(num, den)
    if prefactor.is_zero():
        return (), prefactor
    return tuple(out), prefactor


def gt_canonicalize(g: GammaType) -> GammaType:
    return GammaType(g.factors, g.prefactor)


def gt_mul(g1: GammaType, g2: GammaType) -> GammaType:
    return g1 * g2


def gt_inverse(g: GammaType) -> GammaType:
    return g.inverse()


def gt_substitute(g: GammaType, m: AffineMap) -> GammaType:
    return g.substitute(m)


def gt_equal(g1: GammaType, g2: GammaType) -> bool:
    """Equality decided by shift recurrences: the quotient must reduce to 1."""
    g1, g2 = (g if isinstance(g, GammaType) else GammaType.rational(g) for g in (g1, g2))
    if g1.is_zero() or g2.is_zero():
        return g1.is_zero() and g2.is_zero()
    if g1.classes() != g2.classes():
        return False
    return (g1 / g2).is_unit()


Gamma = GammaType.gamma
UNIT = GammaType()

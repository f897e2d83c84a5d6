"""Symbolic objects that mention the auxiliary parameter ``f``.

:class:`Mobius` is a ratio ``(p1 f + p0) / (q1 f + q0)`` with polynomial
coefficients in (a, b, c, d, e).  :class:`Relation` is a linear identity
between ``3F2`` / unit-shift ``4F3`` values, ``sum(lhs) == sum(rhs)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Sequence

from .errors import DegenerateEta
from .gammatype import UNIT, GammaType
from .symbolic import (
    IDENTITY_MAP,
    ONE,
    RING,
    ZERO,
    AffineMap,
    Poly,
    RationalFunction,
    eval_poly,
    poly_exquo,
    poly_gcd,
    substitute_poly,
)


def _lcm(p: Poly, q: Poly) -> Poly:
    return poly_exquo(p, poly_gcd(p, q)) * q


class Mobius:
    """Canonical Möbius expression in ``f`` over the parameter polynomials."""

    __slots__ = ("p1", "p0", "q1", "q0")

    def __init__(self, p1: Poly, p0: Poly, q1: Poly, q0: Poly):
        if not q1 and not q0:
            raise DegenerateEta("denominator of eta vanishes identically")
        if not (p1 * q0 - p0 * q1):
            # proportional rows: the expression does not depend on f
            x = RationalFunction(p1, q1) if q1 else RationalFunction(p0, q0)
            p1, p0, q1, q0 = RING.zero, x.num, RING.zero, x.den
        g = poly_gcd(poly_gcd(p1, p0), poly_gcd(q1, q0))
        p1, p0, q1, q0 = (poly_exquo(x, g) for x in (p1, p0, q1, q0))
        lead = q1 if q1 else q0
        if lead.LC < 0:
            p1, p0, q1, q0 = -p1, -p0, -q1, -q0
        object.__setattr__(self, "p1", p1)
        object.__setattr__(self, "p0", p0)
        object.__setattr__(self, "q1", q1)
        object.__setattr__(self, "q0", q0)

    def __setattr__(self, name, value):
        raise AttributeError("Mobius is immutable")

    @classmethod
    def from_coefficients(cls, eps, lam, alpha, beta) -> "Mobius":
        """``(eps f + lam) / (alpha f + beta)`` from rational coefficients."""
        xs = [RationalFunction.coerce(x) for x in (eps, lam, alpha, beta)]
        den = RING.one
        for x in xs:
            den = _lcm(den, x.den)
        p1, p0, q1, q0 = (x.num * poly_exquo(den, x.den) for x in xs)
        return cls(p1, p0, q1, q0)

    @classmethod
    def identity(cls) -> "Mobius":
        return cls(RING.one, RING.zero, RING.zero, RING.one)

    @classmethod
    def constant(cls, x) -> "Mobius":
        x = RationalFunction.coerce(x)
        return cls(RING.zero, x.num, RING.zero, x.den)

    def is_constant(self) -> bool:
        return not self.p1 and not self.q1

    def as_rational(self) -> RationalFunction:
        if not self.is_constant():
            raise ValueError("Möbius expression depends on f")
        return RationalFunction(self.p0, self.q0)

    def coefficients(self) -> tuple[RationalFunction, RationalFunction, RationalFunction, RationalFunction]:
        return tuple(RationalFunction(x) for x in (self.p1, self.p0, self.q1, self.q0))

    def evaluate(self, point: Sequence, f) -> Fraction:
        f = Fraction(f)
        num = eval_poly(self.p1, point) * f + eval_poly(self.p0, point)
        den = eval_poly(self.q1, point) * f + eval_poly(self.q0, point)
        if den == 0:
            raise DegenerateEta(f"eta has a vanishing denominator at {tuple(point)}, f={f}")
        return num / den

    def substitute(self, m: AffineMap) -> "Mobius":
        return Mobius(*(substitute_poly(x, m) for x in (self.p1, self.p0, self.q1, self.q0)))

    def __eq__(self, other):
        if not isinstance(other, Mobius):
            return NotImplemented
        return (self.p1, self.p0, self.q1, self.q0) == (other.p1, other.p0, other.q1, other.q0)

    def __hash__(self):
        return hash(tuple(tuple(sorted(x.items())) for x in (self.p1, self.p0, self.q1, self.q0)))

    @staticmethod
    def _side(hi: Poly, lo: Poly, latex: bool) -> str:
        from .render import poly_latex, poly_text

        wrap = _paren_latex if latex else _paren_text
        parts = []
        if hi == 1:
            parts.append("f")
        elif hi == -1:
            parts.append("-f")
        elif hi:
            parts.append(f"{wrap(hi)} f" if latex else f"{wrap(hi)}*f")
        if lo:
            parts.append(poly_latex(lo) if latex else poly_text(lo))
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"

    def to_text(self) -> str:
        num, den = self._side(self.p1, self.p0, False), self._side(self.q1, self.q0, False)
        return num if den == "1" else f"({num})/({den})"

    def to_latex(self) -> str:
        num, den = self._side(self.p1, self.p0, True), self._side(self.q1, self.q0, True)
        return num if den == "1" else f"\\frac{{{num}}}{{{den}}}"

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"Mobius({self.to_text()!r})"


def _paren_text(p: Poly) -> str:
    from .render import poly_text

    s = poly_text(p)
    return s if len(p) == 1 else f"({s})"


def _paren_latex(p: Poly) -> str:
    from .render import poly_latex

    s = poly_latex(p)
    return s if len(p) == 1 else f"\\left({s}\\right)"


Kind = Literal["F1", "F2", "F4"]


@dataclass(frozen=True)
class Term:
    """``coefficient * (x + y/f) * kind(argument . r [, f_slot])``.

    ``F1(q) = 3F2(q1,q2,q3; q4,q5)``, ``F2(q) = q1 q2 q3/(q4 q5) 3F2(q+1)``
    and ``F4(q, g) = 4F3(q1,q2,q3,g+1; q4,q5,g)``.
    """

    coefficient: GammaType
    kind: Kind
    argument: AffineMap = IDENTITY_MAP
    f_slot: Mobius | None = None
    f_factor: tuple[RationalFunction, RationalFunction] = (ONE, ZERO)

    def __post_init__(self):
        if self.kind not in ("F1", "F2", "F4"):
            raise ValueError(f"unknown term kind {self.kind!r}")
        if (self.kind == "F4") != (self.f_slot is not None):
            raise ValueError("F4 terms need an f-slot and F1/F2 terms must not have one")

    def with_coefficient(self, coefficient: GammaType) -> "Term":
        return Term(coefficient, self.kind, self.argument, self.f_slot, self.f_factor)

    def coefficient_text(self) -> str:
        x, y = self.f_factor
        c = self.coefficient.to_text()
        if y.is_zero() and x.is_one():
            return c
        if y.is_zero():
            return f"({c})*({x.to_text()})"
        if x.is_zero():
            return f"({c})*({y.to_text()})/f"
        return f"({c})*({x.to_text()} + ({y.to_text()})/f)"

    def function_text(self) -> str:
        q = self.argument.parameter_text()
        if self.kind == "F4":
            g = self.f_slot.to_text()
            return f"4F3({q[0]}, {q[1]}, {q[2]}, ({g}) + 1; {q[3]}, {q[4]}, {g})"
        return f"{self.kind}({', '.join(q)})"


@dataclass(frozen=True)
class Relation:
    lhs: tuple[Term, ...]
    rhs: tuple[Term, ...]
    note: str = ""
    terms: tuple[Term, ...] = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.lhs) + tuple(self.rhs))
        if len(self.terms) < 2:
            raise ValueError("a relation needs at least two terms")
        if any(t.coefficient.is_zero() for t in self.terms):
            raise ValueError("relation coefficients must not vanish identically")

    def to_text(self) -> str:
        def side(ts):
            return " + ".join(f"[{t.coefficient_text()}] * {t.function_text()}" for t in ts)

        s = f"{side(self.lhs)} = {side(self.rhs)}"
        return s + (f"    ({self.note})" if self.note else "")

    def __str__(self):
        return self.to_text()


def f1_term(coefficient=UNIT, argument: AffineMap = IDENTITY_MAP, **kw) -> Term:
    return Term(_as_gamma(coefficient), "F1", argument, **kw)


def f2_term(coefficient=UNIT, argument: AffineMap = IDENTITY_MAP, **kw) -> Term:
    return Term(_as_gamma(coefficient), "F2", argument, **kw)


def f4_term(coefficient=UNIT, argument: AffineMap = IDENTITY_MAP, f_slot: Mobius | None = None, **kw) -> Term:
    return Term(_as_gamma(coefficient), "F4", argument, f_slot or Mobius.identity(), **kw)


def _as_gamma(x) -> GammaType:
    return x if isinstance(x, GammaType) else GammaType.rational(x)

"""Transformations of the unit-shift 4F3 and their group law.

A transformation ``{eps, M, lam, alpha, beta, D}`` is the identity

    F(r, f) = M(r) (eps f + lam(r)) / f * F(D r, eta),
    eta = (eps f + lam(r)) / (alpha(r) f + beta(r)),

where ``F(r, f) = 4F3(a, b, c, f + 1; d, e, f)`` and ``r = (a, b, c, d, e, 1)``.
Equivalently, with ``F1 = 3F2(a, b, c; d, e)`` and ``F2 = F(r, f) - F1``
times ``f``, the pair ``(F1, F2)(r)`` equals the 2x2 matrix
``M [[eps, alpha], [lam, beta]]`` applied to ``(F1, F2)(D r)``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    DegenerateComposition,
    IndeterminateEquality,
    NonInvertible,
    PreconditionViolated,
)
from .expressions import Mobius, Relation, f1_term, f2_term, f4_term
from .gammatype import UNIT, GammaType, gt_equal
from .symbolic import IDENTITY_MAP, ONE, ZERO, AffineMap, RationalFunction


@dataclass(frozen=True, eq=False)
class Transformation:
    epsilon: int
    M: GammaType
    lam: RationalFunction
    alpha: RationalFunction
    beta: RationalFunction
    D: AffineMap

    def __post_init__(self):
        if self.epsilon not in (0, 1):
            raise ValueError(f"epsilon must be 0 or 1, got {self.epsilon}")
        for name in ("lam", "alpha", "beta"):
            v = getattr(self, name)
            if not isinstance(v, RationalFunction):
                object.__setattr__(self, name, RationalFunction.coerce(v))
        if not isinstance(self.M, GammaType):
            object.__setattr__(self, "M", GammaType.rational(self.M))
        if self.epsilon == 0 and not self.lam.is_one():
            raise ValueError("lambda must be 1 when epsilon is 0")
        if self.alpha.is_zero() and self.beta.is_zero():
            raise DegenerateComposition("alpha and beta both vanish: eta is undefined")

    # the matrix determines the transformation (trivial kernel), so
    # == compares matrices; see strict_equal for slot-by-slot comparison
    def __eq__(self, other):
        if not isinstance(other, Transformation):
            return NotImplemented
        return self.D == other.D

    def __hash__(self):
        return hash(self.D)

    def __matmul__(self, other: "Transformation") -> "Transformation":
        return compose(self, other)

    def parameters(self) -> list[str]:
        return self.D.parameter_text()

    def eta(self) -> Mobius:
        return eta(self)

    def inverse(self) -> "Transformation":
        return invert(self)


def identity() -> Transformation:
    return IDENTITY


def compose(t2: Transformation, t1: Transformation) -> Transformation:
    """``t2 o t1``: apply ``t1`` first, then ``t2`` to the right-hand side."""
    d1 = t1.D
    lam2 = t2.lam.substitute(d1)
    al2 = t2.alpha.substitute(d1)
    be2 = t2.beta.substitute(d1)
    M = t1.M * t2.M.substitute(d1)
    e1, e2 = t1.epsilon, t2.epsilon
    top = t1.alpha * lam2 + e1 * e2
    low = t1.lam * e2 + lam2 * t1.beta
    alpha = t1.alpha * be2 + al2 * e1
    beta = t1.lam * al2 + t1.beta * be2
    if not top.is_zero():
        eps, M, lam = 1, M * top, low / top
        alpha, beta = alpha / top, beta / top
    elif not low.is_zero():
        eps, M, lam = 0, M * low, ONE
        alpha, beta = alpha / low, beta / low
    else:
        raise DegenerateComposition("composition has a vanishing first column")
    if alpha.is_zero() and beta.is_zero():
        raise DegenerateComposition("composed alpha and beta vanish identically")
    return Transformation(eps, M, lam, alpha, beta, t2.D @ d1)


def invert(t: Transformation) -> Transformation:
    if t.alpha.is_zero() and t.beta.is_zero():
        raise NonInvertible("alpha and beta vanish identically")
    dinv = t.D.inverse()
    M = t.M.substitute(dinv)
    lam = t.lam.substitute(dinv)
    alpha = t.alpha.substitute(dinv)
    beta = t.beta.substitute(dinv)
    det = beta * t.epsilon - alpha * lam
    if det.is_zero():
        raise NonInvertible("eps*beta - alpha*lambda vanishes identically")
    if not beta.is_zero():
        return Transformation(1, (M * det).inverse() * beta, -lam / beta, -alpha / beta, t.epsilon / beta, dinv)
    return Transformation(0, (M * alpha).inverse(), ONE, alpha / lam, -t.epsilon / lam, dinv)


def eta(t: Transformation) -> Mobius:
    return Mobius.from_coefficients(t.epsilon, t.lam, t.alpha, t.beta)


def matrix(t: Transformation) -> AffineMap:
    return t.D


def equal(t1: Transformation, t2: Transformation) -> bool:
    return t1.D == t2.D


def strict_equal(t1: Transformation, t2: Transformation) -> bool:
    """Compare every slot.  Raises :class:`IndeterminateEquality` when all
    slots but M agree and the M quotient could be rational by reflection."""
    same = (
        t1.epsilon == t2.epsilon
        and t1.D == t2.D
        and t1.lam == t2.lam
        and t1.alpha == t2.alpha
        and t1.beta == t2.beta
    )
    if not same:
        return False
    if gt_equal(t1.M, t2.M):
        return True
    if (t1.M / t2.M).reflection_ambiguous():
        raise IndeterminateEquality("M coefficients differ only by a possible reflection identity")
    return False


def coefficient_matrix(t: Transformation):
    """Rows ``[[M eps, M alpha], [M lam, M beta]]`` as gamma-type entries."""
    return [[t.M * t.epsilon, t.M * t.alpha], [t.M * t.lam, t.M * t.beta]]


def two_sided_reduction(t: Transformation) -> tuple[Relation, Relation]:
    """The pair ``F(Dr, 1/alpha) = F1(r)/M`` and ``F(Dr, lam/beta) = F2(r)/(M lam)``."""
    missing = [
        name
        for name, bad in (
            ("epsilon", t.epsilon != 1),
            ("alpha", t.alpha.is_zero()),
            ("beta", t.beta.is_zero()),
            ("lambda", t.lam.is_zero()),
        )
        if bad
    ]
    if missing:
        raise PreconditionViolated(f"reduction needs nonzero {', '.join(missing)}")
    first = Relation(
        (f4_term(UNIT, t.D, Mobius.constant(t.alpha.inverse())),),
        (f1_term(t.M.inverse()),),
        note="4F3 -> 3F2 reduction, f-slot 1/alpha",
    )
    second = Relation(
        (f4_term(UNIT, t.D, Mobius.constant(t.lam / t.beta)),),
        (f2_term((t.M * t.lam).inverse()),),
        note="4F3 -> 3F2 reduction, f-slot lambda/beta",
    )
    return first, second


IDENTITY = Transformation(1, UNIT, ZERO, ZERO, ONE, IDENTITY_MAP)

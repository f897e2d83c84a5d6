"""Identities derived from pairs of transformations and single transformations.

Every transformation ``T`` gives the linear system

    F1(r) = M (eps F1(Dr) + alpha F2(Dr)),
    F2(r) = M (lam F1(Dr) + beta F2(Dr)),

with ``F2(q) = q1 q2 q3 / (q4 q5) 3F2(q + 1)``.  Eliminating ``F2(Dr)``
leaves ``M (beta eps - alpha lam) F1(Dr) = beta F1(r) - alpha F2(r)``, and two
such equations can be solved for ``F1(r)`` and ``F2(r)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

from .errors import ConstraintUnsolvable, DegenerateGamma, DegeneratePair, InvalidShifts
from .expressions import Mobius, Relation, f1_term, f2_term, f4_term
from .gammatype import UNIT, Gamma, GammaType
from .generators import shift_transformation
from .group import Transformation
from .symbolic import (
    ONE,
    RING,
    VARIABLES,
    AffineMap,
    Poly,
    RationalFunction,
    Specialization,
)


def _det(t1: Transformation, t2: Transformation) -> RationalFunction:
    return t2.alpha * t1.beta - t1.alpha * t2.beta


def _pivot(t: Transformation) -> RationalFunction:
    """``beta eps - alpha lam``, the determinant of the 2x2 matrix over M."""
    return t.beta * t.epsilon - t.alpha * t.lam


def _relation(lhs, rhs, note: str) -> Relation:
    rhs = tuple(term for term in rhs if not term.coefficient.is_zero())
    return Relation(tuple(lhs), rhs, note=note)


def _two_term(t1: Transformation, t2: Transformation) -> Relation | None:
    # beta_i F1(r) - alpha_i F2(r) are proportional when the pair degenerates
    if not (t1.beta.is_zero() and t2.beta.is_zero()):
        w1, w2 = t2.beta, t1.beta
    else:
        w1, w2 = t2.alpha, t1.alpha
    c1 = t1.M * (_pivot(t1) * w1)
    c2 = t2.M * (_pivot(t2) * w2)
    if c1.is_zero() or c2.is_zero():
        return None
    return Relation((f1_term(c1, t1.D),), (f1_term(c2, t2.D),), note="two-term relation of a degenerate pair")


def _check_pair(t1: Transformation, t2: Transformation) -> RationalFunction:
    delta = _det(t1, t2)
    if delta.is_zero():
        raise DegeneratePair(
            "alpha2*beta1 - alpha1*beta2 vanishes identically", two_term=_two_term(t1, t2)
        )
    return delta


def three_term(t1: Transformation, t2: Transformation) -> tuple[Relation, Relation]:
    """The F1 and F2 relations induced by a pair of transformations."""
    delta = _check_pair(t1, t2)
    e1, e2 = t1.epsilon, t2.epsilon
    a1, b1, l1 = t1.alpha, t1.beta, t1.lam
    a2, b2, l2 = t2.alpha, t2.beta, t2.lam
    first = _relation(
        [f1_term(UNIT)],
        [
            f1_term(t1.M * ((a2 * b1 * e1 - a1 * a2 * l1) / delta), t1.D),
            f1_term(t2.M * ((a1 * a2 * l2 - a1 * b2 * e2) / delta), t2.D),
        ],
        note="3F2 three-term relation",
    )
    second = _relation(
        [f2_term(UNIT)],
        [
            f1_term(t1.M * ((b1 * b2 * e1 - a1 * b2 * l1) / delta), t1.D),
            f1_term(t2.M * ((a2 * b1 * l2 - b1 * b2 * e2) / delta), t2.D),
        ],
        note="three-term relation for F2",
    )
    return first, second


def decompose_unit_shift(t1: Transformation, t2: Transformation) -> Relation:
    """The unit-shift 4F3 as a combination of ``F1(D1 r)`` and ``F1(D2 r)``
    with coefficients linear in ``1/f``."""
    delta = _check_pair(t1, t2)
    k1 = t1.M * (_pivot(t1) / delta)
    k2 = t2.M * (-_pivot(t2) / delta)
    return _relation(
        [f4_term(UNIT)],
        [
            f1_term(k1, t1.D, f_factor=(t2.alpha, t2.beta)),
            f1_term(k2, t2.D, f_factor=(t1.alpha, t1.beta)),
        ],
        note="unit-shift 4F3 decomposition",
    )


def contiguous(k: Sequence[int], m: Sequence[int]) -> tuple[RationalFunction, RationalFunction]:
    """``u, v`` with ``F1(r) = u F1(r + k) + v F1(r + m)``."""
    k, m = tuple(int(x) for x in k), tuple(int(x) for x in m)
    if len(k) != 5 or len(m) != 5:
        raise InvalidShifts("shift vectors need five entries")
    if not any(k) or not any(m):
        raise InvalidShifts("shift vectors must be nonzero")
    if k == m:
        raise InvalidShifts("shift vectors must be distinct")
    t1, t2 = shift_transformation(k), shift_transformation(m)
    rel, _ = three_term(t1, t2)
    coeffs = {term.argument: term.coefficient for term in rel.rhs}
    u, v = (coeffs.get(t.D, GammaType.rational(0)) for t in (t1, t2))
    if not (u.is_rational() and v.is_rational()):
        raise AssertionError("pure shifts produced a non-rational coefficient")
    return u.prefactor, v.prefactor


# -- ratio transform ----------------------------------------------------------


@dataclass(frozen=True)
class PsiRelation:
    """``Psi(r) = (beta Psi(Dr) + lam) / (alpha Psi(Dr) + eps)`` with
    ``Psi = F2 / F1``."""

    beta: RationalFunction
    lam: RationalFunction
    alpha: RationalFunction
    epsilon: int
    D: AffineMap

    def apply(self, psi_image: float, point) -> float:
        r = point
        num = float(self.beta.evaluate(r)) * psi_image + float(self.lam.evaluate(r))
        den = float(self.alpha.evaluate(r)) * psi_image + self.epsilon
        return num / den

    def to_text(self) -> str:
        arg = f"Psi({', '.join(self.D.parameter_text())})"
        num = f"({self.beta.to_text()})*{arg} + ({self.lam.to_text()})"
        den = f"({self.alpha.to_text()})*{arg} + {self.epsilon}"
        return f"Psi(a, b, c, d, e) = ({num})/({den})"


def psi_relation(t: Transformation) -> PsiRelation:
    return PsiRelation(t.beta, t.lam, t.alpha, t.epsilon, t.D)


# -- two 3F2 into one unit-shift 4F3 --------------------------------------------

BreakKind = Literal["topShift", "topBottomShift", "allButOne"]
BREAK_KINDS = ("topShift", "topBottomShift", "allButOne")


def break_combination(kind: BreakKind, gamma) -> tuple[RationalFunction, Relation]:
    """``F1(r) + gamma F1(r')`` as a single unit-shift 4F3.

    ``topShift`` uses ``r' = r - e_a``; ``topBottomShift`` uses
    ``r' = r + e_a + e_d``; ``allButOne`` uses ``r' = r + e_b + e_c + e_d + e_e``.
    Returns the f-slot of the 4F3 and the relation.
    """
    g = RationalFunction.coerce(gamma)
    a, b, c, d, e = (RationalFunction(x) for x in RING.gens)
    if g.is_zero():
        raise DegenerateGamma("gamma must not vanish identically")
    if kind == "topShift":
        if (g + 1).is_zero():
            raise DegenerateGamma("gamma = -1 kills the right-hand side")
        slot = (g + 1) * (a - 1)
        other = AffineMap.shift((-1, 0, 0, 0, 0))
        target, scale = other, g + 1
    elif kind == "topBottomShift":
        den = g * d + a
        if (g + 1).is_zero() or den.is_zero():
            raise DegenerateGamma("gamma makes the f-slot undefined")
        slot = (g + 1) * a * d / den
        other = AffineMap.shift((1, 0, 0, 1, 0))
        target, scale = AffineMap.shift((0, 0, 0, 1, 0)), g + 1
    elif kind == "allButOne":
        den = b * c + g * d * e
        if den.is_zero():
            raise DegenerateGamma("gamma makes the f-slot undefined")
        slot = (a - 1) * b * c / den
        other = AffineMap.shift((0, 1, 1, 1, 1))
        target, scale = AffineMap.shift((-1, 0, 0, 0, 0)), ONE
    else:
        raise ValueError(f"unknown combination kind {kind!r}; expected one of {BREAK_KINDS}")
    rel = Relation(
        (f1_term(UNIT), f1_term(GammaType.rational(g), other)),
        (f4_term(GammaType.rational(scale), target, Mobius.constant(slot)),),
        note=f"{kind} combination",
    )
    return slot, rel


# -- summation formulas ---------------------------------------------------------


def _sym(*polys: Poly, k: int) -> Poly:
    from itertools import combinations

    acc = RING.zero
    for combo in combinations(polys, k):
        p = RING.one
        for x in combo:
            p *= x
        acc += p
    return acc


@dataclass(frozen=True)
class SummationFormula:
    """``F(r, f) = closed_form(r)`` whenever ``constraint(r) == 0`` and
    ``f = f_value(r)``.

    ``substitution`` eliminates one variable using the constraint; every
    stored function is already expressed through the remaining variables.
    In terms of a free ``f`` the value reads
    ``gamma_part * (epsilon f + lam) / f``.
    """

    variable: str
    constraint: Poly
    solution: Poly
    substitution: Specialization
    f_value: RationalFunction
    gamma_part: GammaType
    epsilon: int
    lam: RationalFunction
    closed_form: GammaType

    def f_factor_text(self) -> str:
        lam = self.lam.to_text()
        if self.epsilon == 0:
            return f"({lam})/f"
        return "1" if self.lam.is_zero() else f"(f + ({lam}))/f"

    def to_text(self) -> str:
        from .render import poly_text

        lines = [
            f"constraint: {poly_text(self.constraint)} = 0, i.e. {self.variable} = {poly_text(self.solution)}",
            f"f = {self.f_value.to_text()}",
            f"4F3 = ({self.gamma_part.to_text()})*({self.f_factor_text()})",
        ]
        return "\n".join(lines)


def summation_formula(t: Transformation, eliminate: str = "e") -> SummationFormula:
    """Closed-form evaluation obtained by pushing the known unit-shift
    summation through ``t``."""
    if eliminate not in VARIABLES:
        raise ConstraintUnsolvable(f"unknown variable {eliminate!r}")
    q1, q2, q3, q4, q5 = t.D.linear_polys()
    constraint = q4 + q5 - q1 - q2 - q3 - 2
    idx = VARIABLES.index(eliminate)
    coeff = int(constraint.coeff(RING.gens[idx]))
    if coeff not in (1, -1):
        raise ConstraintUnsolvable(
            f"constraint {constraint} has coefficient {coeff} on {eliminate}; need +-1 for an integral solution"
        )
    solution = -(constraint - coeff * RING.gens[idx]) * coeff
    rows = [[int(i == j) for j in range(6)] for i in range(5)]
    rows[idx] = [int(solution.coeff(RING.gens[j])) for j in range(5)] + [int(solution.coeff(1))]
    sub = Specialization(rows)

    def s(x):
        return x.substitute(sub)

    e2 = RationalFunction(_sym(q1, q2, q3, k=2) - (1 - q4) * (1 - q5))
    e3 = RationalFunction(q1 * q2 * q3)
    lam, alpha, beta = t.lam, t.alpha, t.beta
    num = lam * e2 - beta * e3
    den = alpha * e3 - e2 * t.epsilon
    if s(den).is_zero():
        raise ConstraintUnsolvable("the f-condition cannot be solved for f")
    f_value = s(num / den)
    gam = t.M * Gamma(q4) * Gamma(q5) / (Gamma(q1 + 1) * Gamma(q2 + 1) * Gamma(q3 + 1))
    gamma_part = gam.substitute(sub)
    lam_s = s(lam)
    if f_value.is_zero():
        raise ConstraintUnsolvable("the f-condition forces f = 0")
    closed = gamma_part * ((f_value * t.epsilon + lam_s) / f_value)
    return SummationFormula(
        eliminate, constraint, solution, sub, f_value, gamma_part, t.epsilon, lam_s, closed
    )


__all__ = [
    "three_term",
    "decompose_unit_shift",
    "contiguous",
    "psi_relation",
    "PsiRelation",
    "break_combination",
    "BREAK_KINDS",
    "summation_formula",
    "SummationFormula",
]

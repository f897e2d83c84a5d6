import random
from fractions import Fraction as Fr

import pytest

from hyp4f3.errors import ConstraintUnsolvable, Divergent, PoleHit, DegenerateGamma, DegeneratePair, InvalidShifts
from hyp4f3.gammatype import Gamma
from hyp4f3.generators import GENERATOR_NAMES, builtin, shift_transformation, thomae_catalog
from hyp4f3.group import IDENTITY, compose
from hyp4f3.numerics import (
    F1,
    F2,
    F4,
    REFERENCE_POINT,
    HypPoint,
    relation_constraints,
    sample_points,
    verify_relation,
)
from hyp4f3.relations import (
    BREAK_KINDS,
    break_combination,
    contiguous,
    decompose_unit_shift,
    psi_relation,
    summation_formula,
    three_term,
)
from hyp4f3.symbolic import A, B, C, D, E, RING, RationalFunction, parse_rational

from conftest import PSI

POINT = HypPoint(Fr(1, 3), Fr(1, 5), Fr(1, 7), Fr(8, 3), Fr(7, 2), Fr(3, 5))


def rf(num, den=1):
    return RationalFunction(num, den)


def weight(term):
    """Split a term's coefficient ``c (x + y/f)`` into the rationals ``(c x, c y)``."""
    x, y = term.f_factor
    cx, cy = term.coefficient * x, term.coefficient * y
    assert cx.is_rational() and cy.is_rational()
    return cx.prefactor, cy.prefactor


def rhs_term(rel, t):
    (term,) = [s for s in rel.rhs if s.argument == t.D]
    return term


# -- three-term relations ----------------------------------------------------------


def test_example1_coefficients():
    s = shift_transformation((1, 1, 1, 2, 1))
    rel, _ = three_term(builtin("T1"), s)
    gam = Gamma(D + 1) * Gamma(E) * Gamma(PSI + 1) / (Gamma(A + 1) * Gamma(D + E - A - B) * Gamma(D + E - A - C))
    assert [t.coefficient for t in rel.rhs if t.argument == builtin("T1").D] == [gam]
    assert rhs_term(rel, s).coefficient == rf((A - D) * (D - B) * (D - C), D * (1 + D) * E)
    assert verify_relation(rel, POINT) < 1e-9


def test_degenerate_pair():
    with pytest.raises(DegeneratePair):
        three_term(builtin("T2"), builtin("T2"))


def test_random_word_pairs_verify():
    rng = random.Random(5)
    done = 0
    while done < 4:
        w = [compose(builtin(rng.choice(GENERATOR_NAMES)), builtin(rng.choice(GENERATOR_NAMES))) for _ in range(2)]
        try:
            rels = three_term(*w)
        except DegeneratePair:
            continue
        for rel in rels:
            (p,) = sample_points(relation_constraints(rel), 1, seed=done)
            assert verify_relation(rel, p) < 1e-10
        done += 1


# -- contiguous relations ----------------------------------------------------------


def test_contiguous_example():
    u, v = contiguous((1, 1, 1, 1, 1), (1, 1, 1, 2, 1))
    assert u == rf(PSI, E)
    assert v == rf((A - D) * (D - B) * (D - C), D * (D + 1) * E)
    assert v == parse_rational("(a-d)*(d-b)*(d-c)/(d*(d+1)*e)")


def test_contiguous_numeric():
    k, m = (1, 0, 0, 0, 0), (0, 1, 0, 0, 0)
    u, v = contiguous(k, m)
    rel, _ = three_term(shift_transformation(k), shift_transformation(m))
    for p in sample_points(relation_constraints(rel), 20, seed=9):
        r = p.params
        lhs = F1(r)
        rhs = float(u.evaluate(r)) * F1([x + s for x, s in zip(r, k)]) + float(v.evaluate(r)) * F1(
            [x + s for x, s in zip(r, m)]
        )
        assert abs(lhs - rhs) / max(abs(lhs), abs(rhs)) < 1e-10


@pytest.mark.parametrize("k,m", [((1, 0, 0, 0, 0), (1, 0, 0, 0, 0)), ((0,) * 5, (1, 0, 0, 0, 0)), ((1, 2), (1, 0, 0, 0, 0))])
def test_contiguous_invalid(k, m):
    with pytest.raises(InvalidShifts):
        contiguous(k, m)


# -- ratio transform --------------------------------------------------------------


def test_psi_relation_examples():
    ident = psi_relation(IDENTITY)
    assert ident.beta == rf(1) and ident.lam.is_zero() and ident.alpha.is_zero() and ident.epsilon == 1
    t2 = psi_relation(builtin("T2"))
    assert t2.beta == rf(E - C - 1, PSI)
    assert t2.lam == rf(C * (A + B - D), PSI)
    assert t2.alpha.is_zero()


@pytest.mark.parametrize("name", ["T1", "T2", "T3", "Sup4"])
def test_psi_relation_numeric(name):
    t = builtin(name)
    rel = psi_relation(t)
    r = POINT.params
    q = t.D.apply(r)
    psi_r = F2(r) / F1(r)
    psi_q = F2(q) / F1(q)
    assert rel.apply(psi_q, r) == pytest.approx(psi_r, rel=1e-8)


# -- decompositions ---------------------------------------------------------------


def test_first_decomposition():
    s1, s2 = shift_transformation((1, 1, 1, 1, 1)), shift_transformation((1, 1, 1, 2, 1))
    rel = decompose_unit_shift(s1, s2)
    assert weight(rhs_term(rel, s1)) == (rf(PSI, E), rf(A * B * C, D * E))
    assert weight(rhs_term(rel, s2)) == (rf((A - D) * (D - B) * (D - C), E * D * (1 + D)), rf(0))
    assert verify_relation(rel, REFERENCE_POINT) < 1e-10


def test_second_decomposition():
    s1, s2 = shift_transformation((1, 0, 0, 0, 0)), shift_transformation((1, 1, 1, 2, 1))
    rel = decompose_unit_shift(s1, s2)
    k = B * (D - C) - D * (D + E - A - C - 1)
    assert weight(rhs_term(rel, s1)) == (1 + rf(B * C, k), rf(-A * B * C, k))
    big = rf(B * C * (A - D) * (B - D) * (C - D), D * E * (1 + D) * -k)
    assert weight(rhs_term(rel, s2)) == (big, -big * A)
    assert verify_relation(rel, REFERENCE_POINT) < 1e-10


def test_decomposition_degenerate():
    with pytest.raises(DegeneratePair):
        decompose_unit_shift(builtin("T1"), builtin("T1"))


# -- break combinations ------------------------------------------------------------


def test_top_shift_slot_arithmetic():
    slot, _ = break_combination("topShift", 1)
    assert slot.evaluate((2, 0, 0, 0, 0)) == 2


def test_all_but_one_slot():
    g = rf(A + 2, D + 1)
    slot, _ = break_combination("allButOne", g)
    assert slot == (A - 1) * rf(B * C) / (B * C + g * D * E)


@pytest.mark.parametrize("kind", BREAK_KINDS)
def test_break_numeric(kind):
    _, rel = break_combination(kind, rf(A + 2, D + 1))
    assert verify_relation(rel, POINT) < 1e-10


def test_break_errors():
    with pytest.raises(DegenerateGamma):
        break_combination("topShift", 0)
    with pytest.raises(DegenerateGamma):
        break_combination("topShift", -1)
    with pytest.raises(ValueError):
        break_combination("sideways", 1)


# -- summation formulas ------------------------------------------------------------


def test_summation_t2():
    sf = summation_formula(builtin("T2"), "e")
    assert sf.solution == C + 2
    assert sf.constraint == E - C - 2
    psi = D - A - B + 1
    want = (C + 1) * Gamma(D) * Gamma(D - A - B + 2) * rf(1) / (Gamma(D - A + 1) * Gamma(D - B + 1))
    assert sf.gamma_part == want
    assert sf.lam == rf(C * (A + B - D), psi)
    # closed form (c+1) G(d) G(d-a-b+2) (f psi + c(a+b-d)) / (G(d-a+1) G(d-b+1) f psi) at f = f_value
    f = sf.f_value
    assert sf.closed_form == want * ((f * psi + C * (A + B - D)) / (f * psi))


def test_summation_identity():
    sf = summation_formula(IDENTITY, "e")
    e2 = A * B + A * C + B * C
    # e = d' with d + e - a - b - c = 2, substituted
    e_val = A + B + C + 2 - D
    assert sf.solution == e_val
    want = rf(A * B * C, e2 - (1 - D) * (1 - e_val))
    assert sf.f_value == want
    assert sf.closed_form == Gamma(D) * Gamma(e_val) / (Gamma(A + 1) * Gamma(B + 1) * Gamma(C + 1))


@pytest.mark.parametrize("name", ["T2", "Perm"])
def test_summation_numeric(name):
    sf = summation_formula(builtin(name), "e")
    rng = random.Random(1)
    checked = 0
    while checked < 3:
        a, b, c, d = (Fr(rng.randint(1, 40), rng.randint(2, 17)) for _ in range(4))
        r = (a, b, c, d, 0)
        e = Fr(int(sf.solution.coeff(1))) + sum(
            Fr(int(sf.solution.coeff(g))) * x for g, x in zip(RING.gens, r)
        )
        full = (a, b, c, d, e)
        try:
            f = sf.f_value.evaluate(full)
            val = F4(full, f)
        except (PoleHit, Divergent, ZeroDivisionError):
            continue
        want = sf.closed_form.evaluate(full)
        assert abs(val - want) / abs(want) < 1e-10
        checked += 1


def test_summation_unsolvable():
    bad = [t for t in thomae_catalog() if int((lambda q: q[3] + q[4] - q[0] - q[1] - q[2])(t.D.linear_polys()).coeff(E)) == 0]
    assert bad
    with pytest.raises(ConstraintUnsolvable):
        summation_formula(bad[0], "e")
    with pytest.raises(ConstraintUnsolvable):
        summation_formula(IDENTITY, "x")

"""Double-precision evaluation of pFq(1) and the numeric verification harness.

Partial sums of a convergent pFq at unity approach the limit like
``n**-s (c0 + c1/n + ...)`` where ``s`` is the parametric excess, so the
evaluator samples the partial sum at ``N0 * 2**k`` terms and applies
Richardson extrapolation with the known exponents ``s, s+1, s+2, ...``.
That makes barely convergent series (small ``s``) cheap to evaluate.
"""

from __future__ import annotations

import math
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import (
    DegenerateEta,
    Divergent,
    HypError,
    NoConvergence,
    PoleHit,
    SamplingExhausted,
    SideDivergent,
)
from .expressions import Relation, Term
from .gammatype import GammaType, LinearForm
from .symbolic import VARIABLES, AffineMap, RationalFunction, eval_poly

MAX_LEVELS = 8
NOISE_FLOOR = 1e-11
POLE_MARGIN = 1e-6
EXCESS_MARGIN = Fraction(1, 5)


def _default_tol() -> float:
    env = os.environ.get("HYP_TOL")
    if env:
        try:
            tol = float(env)
        except ValueError:
            raise ValueError(f"HYP_TOL must be a number, got {env!r}") from None
        if tol > 0:
            return tol
    return 1e-14


@dataclass(frozen=True)
class EvalConfig:
    target_rel_tol: float = field(default_factory=_default_tol)
    max_terms: int = 1_000_000
    consecutive_small: int = 3

    def __post_init__(self):
        if not self.target_rel_tol > 0:
            raise ValueError("target_rel_tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be at least 1")
        if self.consecutive_small < 1:
            raise ValueError("consecutive_small must be at least 1")


def _nonpositive_int(x: Fraction) -> bool:
    return x <= 0 and x.denominator == 1


def _exact(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _terminating(upper: Sequence[Fraction], lower: Sequence[Fraction]) -> int | None:
    """Number of nonzero terms when an upper parameter is a non-positive integer."""
    stops = [-int(x) for x in upper if _nonpositive_int(x)]
    return min(stops) + 1 if stops else None


def eval_pfq(upper: Sequence, lower: Sequence, cfg: EvalConfig | None = None) -> float:
    """``pFq(upper; lower; 1)`` with ``len(upper) == len(lower) + 1``."""
    cfg = cfg or EvalConfig()
    if len(upper) != len(lower) + 1:
        raise ValueError("evaluation at unity needs p = q + 1")
    upper = [_exact(x) for x in upper]
    lower = [_exact(x) for x in lower]
    nterms = _terminating(upper, lower)
    for x in lower:
        if _nonpositive_int(x) and (nterms is None or -int(x) < nterms - 1):
            raise PoleHit(f"lower parameter {x} is a non-positive integer")
    if nterms is not None:
        return float(_finite_sum(upper, lower, nterms))
    excess = sum(lower) - sum(upper)
    if excess <= 0:
        raise Divergent(f"parametric excess {excess} is not positive")
    return _series(
        [float(x) for x in upper], [float(x) for x in lower], float(excess), cfg
    )


def _finite_sum(upper, lower, nterms: int) -> Fraction:
    t, s = Fraction(1), Fraction(0)
    for n in range(nterms):
        s += t
        num = math.prod((u + n for u in upper), start=Fraction(1))
        if num == 0:
            break
        den = math.prod((l + n for l in lower), start=Fraction(n + 1))
        t *= num / den
    return s


def _series(up: list[float], lo: list[float], s: float, cfg: EvalConfig) -> float:
    n0 = 32
    scale = max(abs(x) for x in up + lo)
    while n0 < 4 * scale:
        n0 *= 2
    tol = cfg.target_rel_tol
    t, acc, comp = 1.0, 0.0, 0.0
    checkpoint, n = n0, 0
    last_row: list[float] | None = None
    prev = last_change = None
    agree = small = 0
    peak = 0.0
    while n < cfg.max_terms:
        # Neumaier summation
        y = acc + t
        if abs(acc) >= abs(t):
            comp += (acc - y) + t
        else:
            comp += (t - y) + acc
        acc = y
        ratio = 1.0
        for x in up:
            ratio *= n + x
        den = n + 1.0
        for x in lo:
            den *= n + x
        t *= ratio / den
        n += 1
        total = acc + comp
        peak = max(peak, abs(total))
        if n > n0 and abs(t) < tol * abs(total):
            # raw-term rule, guarded by the size of the remaining tail
            small += 1
            if small >= cfg.consecutive_small and n * abs(t) < tol * s * abs(total):
                return total
        else:
            small = 0
        if n == checkpoint:
            row = [total]
            if last_row is not None:
                for j in range(min(len(last_row), MAX_LEVELS)):
                    q = 2.0 ** (s + j)
                    row.append((q * row[j] - last_row[j]) / (q - 1.0))
            est = row[-1]
            if prev is not None:
                change = abs(est - prev)
                if change <= tol * abs(est):
                    agree += 1
                    if agree >= 2:
                        return est
                else:
                    agree = 0
                # rounding noise has overtaken the truncation error; it scales
                # with the largest partial sum, not the (possibly cancelled) value
                if last_change is not None and change >= last_change and last_change <= NOISE_FLOOR * max(abs(prev), peak):
                    return prev
                last_change = change
            prev, last_row = est, row
            checkpoint *= 2
    raise NoConvergence(f"series did not converge within {cfg.max_terms} terms")


def eval_gamma(x) -> float:
    """Numeric gamma function; poles raise :class:`PoleHit`."""
    xf = float(x)
    if xf <= 0 and xf == math.floor(xf):
        raise PoleHit(f"gamma has a pole at {x}")
    return math.gamma(xf)


# -- points -------------------------------------------------------------------


@dataclass(frozen=True)
class HypPoint:
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction
    e: Fraction
    f: Fraction = Fraction(1)

    def __post_init__(self):
        for name in ("a", "b", "c", "d", "e", "f"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    @property
    def params(self) -> tuple[Fraction, ...]:
        return (self.a, self.b, self.c, self.d, self.e)

    @classmethod
    def parse(cls, text: str) -> "HypPoint":
        """``"a=5/3,b=21/17,..."``; ``f`` defaults to 1."""
        values = {}
        for part in text.split(","):
            if not part.strip():
                continue
            key, _, val = part.partition("=")
            key = key.strip()
            if key not in VARIABLES + ("f",) or not val.strip():
                raise ValueError(f"bad point component {part!r}")
            values[key] = Fraction(val.strip())
        missing = [v for v in VARIABLES if v not in values]
        if missing:
            raise ValueError(f"point is missing {', '.join(missing)}")
        return cls(**values)

    def __str__(self):
        return ",".join(f"{k}={getattr(self, k)}" for k in VARIABLES + ("f",))


REFERENCE_POINT = HypPoint(Fraction(5, 3), Fraction(21, 17), Fraction(3, 7), Fraction(5, 11), Fraction(129, 17), Fraction(12, 13))


# -- function values ----------------------------------------------------------


def F1(q: Sequence, cfg: EvalConfig | None = None) -> float:
    return eval_pfq(q[:3], q[3:5], cfg)


def F2(q: Sequence, cfg: EvalConfig | None = None) -> float:
    q = [_exact(x) for x in q]
    if q[0] * q[1] * q[2] == 0:
        return 0.0
    coeff = q[0] * q[1] * q[2] / (q[3] * q[4])
    return float(coeff) * eval_pfq([x + 1 for x in q[:3]], [x + 1 for x in q[3:5]], cfg)


def F4(q: Sequence, g, cfg: EvalConfig | None = None) -> float:
    """Unit-shift ``4F3(q1, q2, q3, g+1; q4, q5, g)``."""
    g = _exact(g)
    if _nonpositive_int(g):
        # (g+1)_n/(g)_n = (g+n)/g has no finite limit here
        raise PoleHit(f"f-slot {g} is a non-positive integer")
    return eval_pfq(list(q[:3]) + [g + 1], list(q[3:5]) + [g], cfg)


def excess(q: Sequence) -> Fraction:
    return q[3] + q[4] - q[0] - q[1] - q[2] - 1


# -- constraints --------------------------------------------------------------

Constraint = Callable[[HypPoint], bool]


@dataclass(frozen=True)
class Positive:
    """``expr(point) > margin`` for a rational function of (a..e)."""

    expr: RationalFunction
    margin: Fraction = Fraction(0)

    def __call__(self, p: HypPoint) -> bool:
        try:
            return self.expr.evaluate(p.params) > self.margin
        except ZeroDivisionError:
            return False


@dataclass(frozen=True)
class Negative:
    expr: RationalFunction

    def __call__(self, p: HypPoint) -> bool:
        try:
            return self.expr.evaluate(p.params) < 0
        except ZeroDivisionError:
            return False


@dataclass(frozen=True)
class NonZero:
    """``|poly(point)| > margin`` (polynomial form, so it never divides)."""

    poly: object
    margin: float = POLE_MARGIN

    def __call__(self, p: HypPoint) -> bool:
        return abs(eval_poly(self.poly, p.params)) > self.margin


@dataclass(frozen=True)
class OffPoles:
    """A linear form stays away from the non-positive integers."""

    form: LinearForm
    margin: float = POLE_MARGIN

    def __call__(self, p: HypPoint) -> bool:
        return _off_poles(self.form.evaluate(p.params), self.margin)


def _off_poles(x: Fraction, margin: float = POLE_MARGIN) -> bool:
    if x > margin:
        return True
    return abs(x - round(x)) > margin


@dataclass(frozen=True)
class FiniteEta:
    """The f-slot expression is defined, nonzero and off the poles."""

    eps: int
    lam: RationalFunction
    alpha: RationalFunction
    beta: RationalFunction

    def __call__(self, p: HypPoint) -> bool:
        try:
            num = self.eps * p.f + self.lam.evaluate(p.params)
            den = self.alpha.evaluate(p.params) * p.f + self.beta.evaluate(p.params)
        except ZeroDivisionError:
            return False
        if abs(den) < POLE_MARGIN or abs(num) < POLE_MARGIN:
            return False
        return _off_poles(num / den)


def f_off_poles(p: HypPoint) -> bool:
    return abs(p.f) > POLE_MARGIN and _off_poles(p.f)


def _linear_images(m: AffineMap, margin=EXCESS_MARGIN) -> list[Constraint]:
    q = m.linear_polys()
    out: list[Constraint] = [Positive(RationalFunction(q[3] + q[4] - q[0] - q[1] - q[2] - 1), margin)]
    out += [OffPoles(LinearForm.from_poly(q[i])) for i in (3, 4)]
    return out


def _rational_constraints(x: RationalFunction) -> list[Constraint]:
    return [] if x.den == 1 else [NonZero(x.den)]


def _gamma_constraints(g: GammaType) -> list[Constraint]:
    out = [OffPoles(LinearForm(c, s)) for c, s, _ in g.factors]
    out += _rational_constraints(g.prefactor)
    out.append(NonZero(g.prefactor.num))
    return out


def transformation_constraints(t) -> list[Constraint]:
    """Conditions under which both sides of ``t`` converge and are finite."""
    out: list[Constraint] = [f_off_poles]
    out += _linear_images(AffineMap.identity())
    out += _linear_images(t.D)
    out += _gamma_constraints(t.M)
    for x in (t.lam, t.alpha, t.beta):
        out += _rational_constraints(x)
    out.append(FiniteEta(t.epsilon, t.lam, t.alpha, t.beta))
    return out


def term_constraints(term: Term) -> list[Constraint]:
    out = _linear_images(term.argument) + _gamma_constraints(term.coefficient)
    for x in term.f_factor:
        out += _rational_constraints(x)
    if term.kind == "F2":
        q = term.argument.linear_polys()
        out += [NonZero(q[3]), NonZero(q[4])]
    if term.f_slot is not None:
        out.append(SlotOffPoles(term.f_slot))
    return out


@dataclass(frozen=True)
class SlotOffPoles:
    slot: object

    def __call__(self, p: HypPoint) -> bool:
        try:
            g = self.slot.evaluate(p.params, p.f)
        except (DegenerateEta, ZeroDivisionError):
            return False
        return abs(g) > POLE_MARGIN and _off_poles(g)


def relation_constraints(rel: Relation) -> list[Constraint]:
    out: list[Constraint] = [f_off_poles]
    for term in rel.terms:
        out += term_constraints(term)
    return out


DEFAULT_BOX = {
    "a": (Fraction(-1), Fraction(3)),
    "b": (Fraction(-1), Fraction(3)),
    "c": (Fraction(-1), Fraction(3)),
    "d": (Fraction(-1), Fraction(9)),
    "e": (Fraction(-1), Fraction(9)),
    "f": (Fraction(-2), Fraction(4)),
}


def sample_point(
    constraints: Iterable[Constraint],
    seed: int,
    box: dict | None = None,
    max_denominator: int = 100,
    trials: int = 10_000,
) -> HypPoint:
    """Rejection sampling of a rational point with denominators up to 100."""
    constraints = list(constraints)
    box = {**DEFAULT_BOX, **(box or {})}
    rng = random.Random(seed)
    for _ in range(trials):
        vals = {}
        for name in VARIABLES + ("f",):
            lo, hi = box[name]
            q = rng.randint(1, max_denominator)
            k_lo = math.ceil(lo * q)
            k_hi = math.floor(hi * q)
            vals[name] = Fraction(rng.randint(k_lo, k_hi), q)
        p = HypPoint(**vals)
        if all(c(p) for c in constraints):
            return p
    raise SamplingExhausted(f"no point satisfied the constraints after {trials} trials")


def sample_points(constraints: Iterable[Constraint], n: int, seed: int = 0, **kw) -> list[HypPoint]:
    constraints = list(constraints)
    return [sample_point(constraints, seed * 1_000_003 + i, **kw) for i in range(n)]


# -- verification -------------------------------------------------------------


def _side(label: str, fn):
    try:
        return fn()
    except Divergent as exc:
        raise SideDivergent(f"{label} side diverges: {exc}", label) from None


def verify_transformation(t, p: HypPoint, cfg: EvalConfig | None = None) -> float:
    """Relative residual ``|LHS - RHS| / |LHS|`` of ``t`` at ``p``."""
    r, f = p.params, p.f
    eta = t.eta().evaluate(r, f)
    lhs = _side("lhs", lambda: F4(r, f, cfg))
    factor = (t.epsilon * f + t.lam.evaluate(r)) / f
    rhs = _side("rhs", lambda: F4(t.D.apply(r), eta, cfg))
    rhs *= t.M.evaluate(r) * float(factor)
    return abs(lhs - rhs) / abs(lhs)


def eval_term(term: Term, p: HypPoint, cfg: EvalConfig | None = None) -> float:
    r = p.params
    q = term.argument.apply(r)
    if term.kind == "F1":
        val = F1(q, cfg)
    elif term.kind == "F2":
        val = F2(q, cfg)
    else:
        val = F4(q, term.f_slot.evaluate(r, p.f), cfg)
    x, y = term.f_factor
    weight = x.evaluate(r) + y.evaluate(r) / p.f
    return term.coefficient.evaluate(r) * float(weight) * val


def relation_sides(rel: Relation, p: HypPoint, cfg: EvalConfig | None = None) -> tuple[float, float]:
    lhs = _side("lhs", lambda: math.fsum(eval_term(t, p, cfg) for t in rel.lhs))
    rhs = _side("rhs", lambda: math.fsum(eval_term(t, p, cfg) for t in rel.rhs))
    return lhs, rhs


def verify_relation(rel: Relation, p: HypPoint, cfg: EvalConfig | None = None) -> float:
    lhs, rhs = relation_sides(rel, p, cfg)
    scale = max(abs(lhs), abs(rhs))
    return abs(lhs - rhs) / scale if scale else 0.0


# -- P5 invariance ------------------------------------------------------------


def p5_function(x, y, z, u, v, cfg: EvalConfig | None = None) -> float:
    x, y, z, u, v = (_exact(w) for w in (x, y, z, u, v))
    s = x + y + z
    lower = [s + 2 * u + v, s + u + 2 * v]
    val = eval_pfq([x + u + v, y + u + v, z + u + v], lower, cfg)
    return val / (eval_gamma(lower[0]) * eval_gamma(lower[1]) * eval_gamma(s))


def check_p5_invariance(x, y, z, u, v, sigma: Sequence[int], cfg: EvalConfig | None = None) -> float:
    """Relative difference between ``f(x, y, z, u, v)`` and the same function
    with its arguments permuted by ``sigma`` (argument ``i`` takes the
    value at position ``sigma[i]``)."""
    args = (x, y, z, u, v)
    if sorted(sigma) != list(range(5)):
        raise ValueError(f"{sigma} is not a permutation of 0..4")
    base = p5_function(*args, cfg=cfg)
    moved = p5_function(*(args[i] for i in sigma), cfg=cfg)
    return abs(base - moved) / abs(base)


__all__ = [
    "EvalConfig",
    "HypPoint",
    "HypError",
    "REFERENCE_POINT",
    "eval_pfq",
    "eval_gamma",
    "F1",
    "F2",
    "F4",
    "sample_point",
    "sample_points",
    "transformation_constraints",
    "relation_constraints",
    "verify_transformation",
    "verify_relation",
    "check_p5_invariance",
]

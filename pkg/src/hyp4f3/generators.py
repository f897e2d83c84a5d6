"""Built-in generators, unit shifts, the zero-shift catalog and synthesis."""

from __future__ import annotations

import itertools
import re
from functools import lru_cache
from typing import Sequence

from .errors import MalformedMatrix, NotInGeneratedSubgroup, UnknownGenerator
from .gammatype import Gamma
from .group import IDENTITY, Transformation, compose, invert
from .symbolic import A, B, C, D, E, AffineMap, RationalFunction

PSI = D + E - A - B - C - 1
SLOTS = "abcde"


def _rf(num, den=1) -> RationalFunction:
    return RationalFunction(num, den)


def _map(rows) -> AffineMap:
    return AffineMap(list(rows) + [[0, 0, 0, 0, 0, 1]])


def _t1() -> Transformation:
    M = Gamma(PSI + 1) * Gamma(D) * Gamma(E) / (Gamma(A) * Gamma(D + E - A - C) * Gamma(D + E - A - B))
    rows = [
        [-1, -1, -1, 1, 1, -1],
        [-1, 0, 0, 1, 0, 0],
        [-1, 0, 0, 0, 1, 0],
        [-1, 0, -1, 1, 1, 0],
        [-1, -1, 0, 1, 1, 0],
    ]
    return Transformation(1, M, _rf(B * C, PSI), _rf(1, PSI), _rf(0), _map(rows))


def _t2() -> Transformation:
    M = Gamma(E) * Gamma(PSI + 1) / (Gamma(E + D - A - B) * Gamma(E - C))
    rows = [
        [-1, 0, 0, 1, 0, 0],
        [0, -1, 0, 1, 0, 0],
        [0, 0, 1, 0, 0, 0],
        [0, 0, 0, 1, 0, 0],
        [-1, -1, 0, 1, 1, 0],
    ]
    return Transformation(1, M, _rf(C * (A + B - D), PSI), _rf(0), _rf(E - C - 1, PSI), _map(rows))


def _t3() -> Transformation:
    M = Gamma(PSI + 1) * Gamma(E) / (Gamma(E - A) * Gamma(E + D - B - C))
    rows = [
        [1, 0, 0, 0, 0, 0],
        [0, -1, 0, 1, 0, 0],
        [0, 0, -1, 1, 0, 0],
        [0, 0, 0, 1, 0, 1],
        [0, -1, -1, 1, 1, 0],
    ]
    return Transformation(1, M, _rf(A * B * C, D * PSI), _rf(1, D), _rf(B * C, D * PSI), _map(rows))


def _t4() -> Transformation:
    M = Gamma(E) * Gamma(PSI) / (Gamma(E - C) * Gamma(PSI + C))
    den = (D - A - 1) * (D - B - 1)
    rows = [
        [-1, 0, 0, 1, 0, -1],
        [0, -1, 0, 1, 0, -1],
        [0, 0, 1, 0, 0, 0],
        [0, 0, 0, 1, 0, 0],
        [-1, -1, 0, 1, 1, -1],
    ]
    return Transformation(1, M, _rf(0), _rf(D - A - B - 1, den), _rf(A * B, den), _map(rows))


def _sup1() -> Transformation:
    """a -> a + 1."""
    q = A**2 - B * C + (D - 1) * (E - 1) - A * (D + E - 2)
    M = 1 - _rf(B * C, (D - A - 1) * (E - A - 1))
    return Transformation(
        1, M, _rf(A * B * C, q), _rf(PSI - 1, q), _rf(-A * (PSI - 1), q), AffineMap.shift((1, 0, 0, 0, 0))
    )


def _sdown1() -> Transformation:
    """a -> a - 1."""
    beta = _rf(A * (D + E - A) + B * C - D * E, (A - 1) * PSI)
    return Transformation(1, 1, _rf(B * C, PSI), _rf(1, A - 1), beta, AffineMap.shift((-1, 0, 0, 0, 0)))


def _sup4() -> Transformation:
    """d -> d + 1."""
    beta = _rf((B - D) * (C - D) + A * (B + C - D), D * PSI)
    return Transformation(1, 1, _rf(A * B * C, D * PSI), _rf(1, D), beta, AffineMap.shift((0, 0, 0, 1, 0)))


def _sdown4() -> Transformation:
    """d -> d - 1."""
    q = (D - B - 1) * (D - C - 1) - A * (D - B - C - 1)
    M = _rf(q * (D - 1), (D - A - 1) * (D - B - 1) * (D - C - 1))
    return Transformation(
        1, M, _rf(-A * B * C, q), _rf(1 - PSI, q), _rf((PSI - 1) * (D - 1), q), AffineMap.shift((0, 0, 0, -1, 0))
    )


# -- permutations -------------------------------------------------------------

TOP_PERMS = list(itertools.permutations(range(3)))
BOTTOM_PERMS = [(3, 4), (4, 3)]


def perm_map(images: Sequence[int]) -> AffineMap:
    images = tuple(images)
    if sorted(images[:3]) != [0, 1, 2] or sorted(images[3:]) != [3, 4] or len(images) != 5:
        raise UnknownGenerator(f"{images} does not permute top and bottom parameters separately")
    return AffineMap.permutation(images)


def permutation(images: Sequence[int]) -> Transformation:
    """The symmetry ``F(r, f) = F(P r, f)`` with ``(P r)_i = r_{images[i]}``."""
    return Transformation(1, 1, _rf(0), _rf(0), _rf(1), perm_map(images))


def transposition(pair: str) -> Transformation:
    i, j = SLOTS.index(pair[0]), SLOTS.index(pair[1])
    images = list(range(5))
    images[i], images[j] = j, i
    return permutation(images)


def all_permutations() -> list[Transformation]:
    return [permutation(t + b) for t in TOP_PERMS for b in BOTTOM_PERMS]


def conjugate(t: Transformation, p: Transformation) -> Transformation:
    return compose(p, compose(t, p))


# -- names --------------------------------------------------------------------

_CONJUGATES = {2: (1, "ab"), 3: (1, "ac"), 5: (4, "de")}


@lru_cache(maxsize=None)
def _shift_generator(slot: int, up: bool) -> Transformation:
    if slot in (1, 4):
        return {(1, True): _sup1, (1, False): _sdown1, (4, True): _sup4, (4, False): _sdown4}[slot, up]()
    base, pair = _CONJUGATES[slot]
    return conjugate(_shift_generator(base, up), transposition(pair))


_BASIC = {"T1": _t1, "T2": _t2, "T3": _t3, "T4": _t4}
_PERM_RE = re.compile(r"^Perm((?:\((?:ab|ac|bc|de)\))*)$")


@lru_cache(maxsize=None)
def builtin(name: str) -> Transformation:
    """Generators by name: ``T1``-``T4``, ``Sup1``-``Sup5``, ``Sdown1``-``Sdown5``
    and ``Perm(ab)``, ``Perm(ac)(de)`` and so on (cycles applied right to left)."""
    if name in _BASIC:
        return _BASIC[name]()
    m = re.fullmatch(r"S(up|down)([1-5])", name)
    if m:
        return _shift_generator(int(m.group(2)), m.group(1) == "up")
    m = _PERM_RE.match(name)
    if m:
        t = IDENTITY
        for pair in reversed(re.findall(r"\((\w\w)\)", m.group(1))):
            t = compose(transposition(pair), t)
        return t
    raise UnknownGenerator(f"unknown generator {name!r}")


def token_name(token: str) -> str:
    """Translate CLI tokens (``t1``, ``s+a``, ``s-e``, ``sup2``, ``perm:ab``, ``perm:ab.de``)."""
    tok = token.strip().lower()
    if re.fullmatch(r"t[1-4]", tok):
        return tok.upper()
    m = re.fullmatch(r"s([+-])([a-e])", tok)
    if m:
        return ("Sup" if m.group(1) == "+" else "Sdown") + str(SLOTS.index(m.group(2)) + 1)
    m = re.fullmatch(r"s(up|down)([1-5])", tok)
    if m:
        return ("Sup" if m.group(1) == "up" else "Sdown") + m.group(2)
    m = re.fullmatch(r"perm:((?:ab|ac|bc|de)(?:\.(?:ab|ac|bc|de))*)", tok)
    if m:
        return "Perm" + "".join(f"({p})" for p in m.group(1).split("."))
    if tok in ("id", "identity"):
        return "Perm"
    raise UnknownGenerator(f"unknown generator token {token!r}")


def from_token(token: str) -> Transformation:
    tok = token.strip()
    if tok.lower().startswith("inv:"):
        return invert(from_token(tok[4:]))
    return builtin(token_name(tok))


GENERATOR_NAMES = (
    ["T1", "T2", "T3", "T4"]
    + [f"Sup{i}" for i in range(1, 6)]
    + [f"Sdown{i}" for i in range(1, 6)]
    + ["Perm(ab)", "Perm(ac)", "Perm(bc)", "Perm(de)"]
)


# -- shift lattice ------------------------------------------------------------


def shift_transformation(k: Sequence[int]) -> Transformation:
    """Pure shift by ``k``, built from unit shifts in slot order 1..5."""
    k = tuple(int(x) for x in k)
    if len(k) != 5:
        raise ValueError("shift vector needs five entries")
    t = IDENTITY
    for slot, n in enumerate(k, start=1):
        step = _shift_generator(slot, n > 0)
        for _ in range(abs(n)):
            t = compose(step, t)
    return t


def is_pure_shift(m: AffineMap) -> bool:
    return m.block() == AffineMap.identity().block()


# -- zero-shift catalog -------------------------------------------------------


@lru_cache(maxsize=None)
def _catalog() -> dict:
    t1, t2 = builtin("T1"), builtin("T2")
    bases = [IDENTITY]
    bases += [compose(t1, p) for p in (IDENTITY, transposition("ab"), transposition("ac"))]
    for pre in ("", "(ac)", "(bc)", "(de)", "(ac)(de)", "(bc)(de)"):
        bases.append(compose(t2, builtin("Perm" + pre)))
    entries = {}
    for base in bases:
        for p in all_permutations():
            t = compose(p, base)
            entries[t.D.block()] = t
    if len(entries) != 120:
        raise AssertionError(f"catalog has {len(entries)} distinct blocks, expected 120")
    return entries


def thomae_catalog() -> list[Transformation]:
    """The 120 zero-shift Thomae-like transformations."""
    return list(_catalog().values())


def catalog_lookup(block) -> Transformation | None:
    return _catalog().get(tuple(tuple(r) for r in block))


def synthesize(target: AffineMap | Sequence[Sequence[int]]) -> Transformation:
    """The transformation whose matrix is ``target``, factored as a pure shift
    after a catalog element."""
    if not isinstance(target, AffineMap):
        try:
            target = AffineMap(target)
        except (TypeError, ValueError, IndexError) as exc:
            raise MalformedMatrix(str(exc)) from None
    w = catalog_lookup(target.block())
    if w is None:
        raise NotInGeneratedSubgroup("principal block is not one of the 120 Thomae-like blocks")
    k = [t - s for t, s in zip(target.shift_column(), w.D.shift_column())]
    return compose(shift_transformation(k), w)


def s4_chain() -> Transformation:
    """The bottom shift d -> d + 1 assembled from T2, permutations and top
    shifts only: conjugate the top shift ``a+1, c-1`` by a zero-shift word
    ``W`` sending r to (d-c, e-c, psi, psi+a, psi+b), then undo the extra top
    shifts."""
    t2, ac, de = builtin("T2"), transposition("ac"), transposition("de")
    w = IDENTITY
    for g in (ac, t2, ac, de, t2, ac):
        w = compose(g, w)
    v = compose(_shift_generator(1, True), _shift_generator(3, False))
    x = compose(w, compose(v, invert(w)))
    return compose(_shift_generator(1, False), compose(_shift_generator(2, False), x))

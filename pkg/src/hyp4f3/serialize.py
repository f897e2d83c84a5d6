"""Versioned JSON schema for transformations and relations.

Everything is exact: polynomials are lists of ``[exponents, coefficient]``
pairs in descending grlex order, gamma factors are integer linear forms.
Output is deterministic so that a load/dump round trip is byte-identical.
"""

from __future__ import annotations

import json
from typing import Any

from .errors import DegenerateComposition, HypError, MalformedMatrix, SchemaViolation
from .expressions import Mobius, Relation, Term
from .gammatype import GammaType
from .group import Transformation
from .symbolic import AffineMap, Poly, RationalFunction, poly_from_terms, poly_terms

VERSION = 1


# -- encoding -----------------------------------------------------------------


def _poly(p: Poly) -> list:
    return [[list(exps), c] for exps, c in poly_terms(p)]


def _rf(x: RationalFunction) -> dict:
    return {"num": _poly(x.num), "den": _poly(x.den)}


def _gamma(g: GammaType) -> dict:
    return {
        "prefactor": _rf(g.prefactor),
        "gammas": [{"coeffs": list(c), "shift": s, "exp": k} for c, s, k in g.factors],
    }


def transformation_to_dict(t: Transformation) -> dict:
    return {
        "version": VERSION,
        "epsilon": t.epsilon,
        "M": _gamma(t.M),
        "lambda": _rf(t.lam),
        "alpha": _rf(t.alpha),
        "beta": _rf(t.beta),
        "D": t.D.flat(),
    }


def _term(term: Term) -> dict:
    slot = None
    if term.f_slot is not None:
        slot = {k: _poly(getattr(term.f_slot, k)) for k in ("p1", "p0", "q1", "q0")}
    return {
        "coefficient": _gamma(term.coefficient),
        "kind": term.kind,
        "argument": term.argument.flat(),
        "f_slot": slot,
        "f_factor": [_rf(x) for x in term.f_factor],
    }


def relation_to_dict(rel: Relation) -> dict:
    return {
        "version": VERSION,
        "kind": "relation",
        "note": rel.note,
        "lhs": [_term(t) for t in rel.lhs],
        "rhs": [_term(t) for t in rel.rhs],
    }


def _dump(obj: dict) -> bytes:
    return (json.dumps(obj, indent=2) + "\n").encode("utf-8")


def serialize(t: Transformation) -> bytes:
    return _dump(transformation_to_dict(t))


def serialize_relation(rel: Relation) -> bytes:
    return _dump(relation_to_dict(rel))


# -- decoding -----------------------------------------------------------------


def _field(obj: Any, key: str, path: str):
    if not isinstance(obj, dict):
        raise SchemaViolation("expected an object", path)
    if key not in obj:
        raise SchemaViolation(f"missing field {key!r}", path)
    return obj[key]


def _int(x: Any, path: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise SchemaViolation(f"expected an integer, got {x!r}", path)
    return x


def _list(x: Any, path: str, length: int | None = None) -> list:
    if not isinstance(x, list):
        raise SchemaViolation("expected a list", path)
    if length is not None and len(x) != length:
        raise SchemaViolation(f"expected {length} entries, got {len(x)}", path)
    return x


def _read_poly(x: Any, path: str) -> Poly:
    terms = []
    for i, item in enumerate(_list(x, path)):
        p = f"{path}[{i}]"
        pair = _list(item, p, 2)
        exps = [_int(v, f"{p}[0]") for v in _list(pair[0], f"{p}[0]", 5)]
        if any(v < 0 for v in exps):
            raise SchemaViolation("exponents must be non-negative", f"{p}[0]")
        coeff = _int(pair[1], f"{p}[1]")
        if coeff == 0:
            raise SchemaViolation("zero coefficients are not stored", f"{p}[1]")
        terms.append((exps, coeff))
    if len({tuple(e) for e, _ in terms}) != len(terms):
        raise SchemaViolation("repeated exponent vector", path)
    return poly_from_terms(terms)


def _read_rf(x: Any, path: str) -> RationalFunction:
    num = _read_poly(_field(x, "num", path), f"{path}.num")
    den = _read_poly(_field(x, "den", path), f"{path}.den")
    if not den:
        raise SchemaViolation("zero denominator", f"{path}.den")
    return RationalFunction(num, den)


def _read_gamma(x: Any, path: str) -> GammaType:
    pre = _read_rf(_field(x, "prefactor", path), f"{path}.prefactor")
    factors = []
    for i, g in enumerate(_list(_field(x, "gammas", path), f"{path}.gammas")):
        p = f"{path}.gammas[{i}]"
        coeffs = tuple(_int(v, f"{p}.coeffs") for v in _list(_field(g, "coeffs", p), f"{p}.coeffs", 5))
        factors.append((coeffs, _int(_field(g, "shift", p), f"{p}.shift"), _int(_field(g, "exp", p), f"{p}.exp")))
    try:
        return GammaType(factors, pre)
    except HypError as exc:
        raise SchemaViolation(str(exc), path) from None


def _read_map(x: Any, path: str) -> AffineMap:
    flat = [_int(v, f"{path}[{i}]") for i, v in enumerate(_list(x, path, 36))]
    try:
        return AffineMap.from_flat(flat)
    except MalformedMatrix as exc:
        raise SchemaViolation(str(exc), path) from None


def _check_version(obj: Any):
    v = _field(obj, "version", "")
    if v != VERSION:
        raise SchemaViolation(f"unsupported version {v!r}", "version")


def transformation_from_dict(obj: Any) -> Transformation:
    _check_version(obj)
    eps = _int(_field(obj, "epsilon", ""), "epsilon")
    if eps not in (0, 1):
        raise SchemaViolation("epsilon must be 0 or 1", "epsilon")
    M = _read_gamma(_field(obj, "M", ""), "M")
    lam, alpha, beta = (_read_rf(_field(obj, k, ""), k) for k in ("lambda", "alpha", "beta"))
    D = _read_map(_field(obj, "D", ""), "D")
    if eps == 0 and not lam.is_one():
        raise SchemaViolation("lambda must be 1 when epsilon is 0", "lambda")
    try:
        return Transformation(eps, M, lam, alpha, beta, D)
    except (ValueError, DegenerateComposition) as exc:
        raise SchemaViolation(str(exc), "") from None


def _read_term(x: Any, path: str) -> Term:
    kind = _field(x, "kind", path)
    if kind not in ("F1", "F2", "F4"):
        raise SchemaViolation(f"unknown term kind {kind!r}", f"{path}.kind")
    slot = _field(x, "f_slot", path)
    if slot is not None:
        slot = Mobius(*(_read_poly(_field(slot, k, f"{path}.f_slot"), f"{path}.f_slot.{k}") for k in ("p1", "p0", "q1", "q0")))
    factor = _list(_field(x, "f_factor", path), f"{path}.f_factor", 2)
    try:
        return Term(
            _read_gamma(_field(x, "coefficient", path), f"{path}.coefficient"),
            kind,
            _read_map(_field(x, "argument", path), f"{path}.argument"),
            slot,
            tuple(_read_rf(v, f"{path}.f_factor[{i}]") for i, v in enumerate(factor)),
        )
    except ValueError as exc:
        raise SchemaViolation(str(exc), path) from None


def relation_from_dict(obj: Any) -> Relation:
    _check_version(obj)
    if _field(obj, "kind", "") != "relation":
        raise SchemaViolation("expected kind 'relation'", "kind")
    lhs = [_read_term(t, f"lhs[{i}]") for i, t in enumerate(_list(_field(obj, "lhs", ""), "lhs"))]
    rhs = [_read_term(t, f"rhs[{i}]") for i, t in enumerate(_list(_field(obj, "rhs", ""), "rhs"))]
    note = _field(obj, "note", "")
    try:
        return Relation(tuple(lhs), tuple(rhs), note=str(note))
    except ValueError as exc:
        raise SchemaViolation(str(exc), "") from None


def _load(data: bytes | str) -> Any:
    try:
        return json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise SchemaViolation(f"not valid JSON: {exc}") from None


def deserialize(data: bytes | str) -> Transformation:
    return transformation_from_dict(_load(data))


def deserialize_relation(data: bytes | str) -> Relation:
    return relation_from_dict(_load(data))

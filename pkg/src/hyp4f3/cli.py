"""Command-line interface: ``hyp4f3 <verb> [options]``.

Transformations are given as generator tokens (``t1``, ``s+a``, ``perm:de``,
``inv:t3``), words such as ``t2*t1`` (rightmost factor acts first), a path
to a JSON file written with ``--format file-schema``, or ``-`` for stdin.

Exit status: 0 on success, 1 for domain errors, 2 for malformed input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Sequence

from . import numerics, relations, serialize
from .errors import DomainError, HypError, InputError, MalformedMatrix
from .generators import from_token, synthesize, thomae_catalog
from .group import IDENTITY, Transformation, compose, invert
from .render import relation_latex, transformation_latex, transformation_text
from .symbolic import AffineMap, parse_rational

FORMATS = ("text", "latex", "file-schema")


class VerificationFailed(DomainError):
    pass


# -- argument helpers ---------------------------------------------------------


def load_transformation(arg: str) -> Transformation:
    if arg == "-":
        return serialize.deserialize(sys.stdin.buffer.read())
    if os.path.isfile(arg):
        with open(arg, "rb") as fh:
            return serialize.deserialize(fh.read())
    t = IDENTITY
    for tok in reversed(arg.replace("*", " ").split()):
        t = compose(from_token(tok), t)
    if not arg.strip():
        raise InputError("empty transformation")
    return t


def _ints(text: str, n: int | None = None) -> list[int]:
    try:
        vals = [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise InputError(f"expected comma-separated integers, got {text!r}") from None
    if n is not None and len(vals) != n:
        raise InputError(f"expected {n} integers, got {len(vals)}")
    return vals


def _point(text: str) -> numerics.HypPoint:
    try:
        return numerics.HypPoint.parse(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(str(exc)) from None


def _rationals(text: str, n: int) -> list[Fraction]:
    try:
        vals = [Fraction(x) for x in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise InputError(f"expected {n} comma-separated rationals, got {text!r}") from None
    if len(vals) != n:
        raise InputError(f"expected {n} values, got {len(vals)}")
    return vals


def _cfg(args) -> numerics.EvalConfig:
    if getattr(args, "tol", None):
        return numerics.EvalConfig(target_rel_tol=args.tol)
    return numerics.EvalConfig()


# -- output -------------------------------------------------------------------


def _emit_transformation(t: Transformation, fmt: str) -> str:
    if fmt == "latex":
        return transformation_latex(t)
    if fmt == "file-schema":
        return serialize.serialize(t).decode()
    return transformation_text(t)


def _emit_relation(rel, fmt: str) -> str:
    if fmt == "latex":
        return relation_latex(rel)
    if fmt == "file-schema":
        return serialize.serialize_relation(rel).decode()
    return rel.to_text()


def _emit_mapping(items: dict, fmt: str) -> str:
    """Named rational functions, e.g. ``u`` and ``v``."""
    if fmt == "file-schema":
        obj = {"version": serialize.VERSION}
        obj.update({k: serialize._rf(v) for k, v in items.items()})
        return json.dumps(obj, indent=2)
    if fmt == "latex":
        return "\n".join(f"{k} = {v.to_latex()}" for k, v in items.items())
    return "\n".join(f"{k} = {v.to_text()}" for k, v in items.items())


# -- verbs --------------------------------------------------------------------


def cmd_compose(args) -> str:
    return _emit_transformation(compose(load_transformation(args.lhs), load_transformation(args.rhs)), args.format)


def cmd_invert(args) -> str:
    return _emit_transformation(invert(load_transformation(args.target)), args.format)


def cmd_generator(args) -> str:
    return _emit_transformation(from_token(args.name), args.format)


def cmd_synthesize(args) -> str:
    if args.matrix:
        flat = _ints(args.matrix, 36)
        target = AffineMap.from_flat(flat)
    elif args.target:
        target = load_transformation(args.target).D
    else:
        raise InputError("synthesize needs --matrix or --target")
    return _emit_transformation(synthesize(target), args.format)


def cmd_contiguous(args) -> str:
    u, v = relations.contiguous(_ints(args.k, 5), _ints(args.m, 5))
    return _emit_mapping({"u": u, "v": v}, args.format)


def cmd_three_term(args) -> str:
    r1, r2 = relations.three_term(load_transformation(args.t1), load_transformation(args.t2))
    if args.format == "file-schema":
        return json.dumps([serialize.relation_to_dict(r) for r in (r1, r2)], indent=2)
    return _emit_relation(r1, args.format) + "\n" + _emit_relation(r2, args.format)


def cmd_decompose(args) -> str:
    rel = relations.decompose_unit_shift(load_transformation(args.t1), load_transformation(args.t2))
    return _emit_relation(rel, args.format)


def cmd_break(args) -> str:
    try:
        gamma = parse_rational(args.gamma)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    slot, rel = relations.break_combination(args.kind, gamma)
    if args.format == "text":
        return f"f-slot = {slot.to_text()}\n{rel.to_text()}"
    return _emit_relation(rel, args.format)


def cmd_summation(args) -> str:
    sf = relations.summation_formula(load_transformation(args.target), args.eliminate)
    if args.format == "file-schema":
        from .render import poly_text

        obj = {
            "version": serialize.VERSION,
            "variable": sf.variable,
            "constraint": serialize._poly(sf.constraint),
            "solution": poly_text(sf.solution),
            "f_value": serialize._rf(sf.f_value),
            "gamma_part": serialize._gamma(sf.gamma_part),
            "epsilon": sf.epsilon,
            "lambda": serialize._rf(sf.lam),
            "closed_form": serialize._gamma(sf.closed_form),
        }
        return json.dumps(obj, indent=2)
    if args.format == "latex":
        return f"f = {sf.f_value.to_latex()},\\quad {{}}_4F_3 = {sf.closed_form.to_latex()}"
    return sf.to_text()


def cmd_verify(args) -> str:
    t = load_transformation(args.target)
    cfg = _cfg(args)
    if args.point:
        points = [_point(args.point)]
    else:
        points = numerics.sample_points(numerics.transformation_constraints(t), args.points, seed=args.seed)
    rows = [(p, numerics.verify_transformation(t, p, cfg)) for p in points]
    worst = max(r for _, r in rows)
    if args.format == "file-schema":
        out = json.dumps({"version": serialize.VERSION, "residuals": [{"point": str(p), "residual": r} for p, r in rows]}, indent=2)
    else:
        out = "\n".join(f"{p}  residual={r:.3e}" for p, r in rows)
        out += f"\nmax residual {worst:.3e} (threshold {args.threshold:.0e})"
    if worst > args.threshold:
        print(out)
        raise VerificationFailed(f"max residual {worst:.3e} exceeds {args.threshold:.0e}")
    return out


def cmd_catalog(args) -> str:
    cat = thomae_catalog()
    if args.format == "file-schema":
        return json.dumps([serialize.transformation_to_dict(t) for t in cat], indent=2)
    if args.format == "latex":
        return "\n\n".join(transformation_latex(t) for t in cat)
    return "\n".join(f"{i:3d}: ({', '.join(t.parameters())})" for i, t in enumerate(cat))


def cmd_p5_check(args) -> str:
    vals = _rationals(args.point, 5)
    if args.orbit:
        import itertools

        sigmas = list(itertools.permutations(range(5)))
    else:
        sigmas = [tuple(_ints(args.sigma, 5))]
    cfg = _cfg(args)
    res = [(s, numerics.check_p5_invariance(*vals, s, cfg=cfg)) for s in sigmas]
    worst = max(r for _, r in res)
    if args.format == "file-schema":
        return json.dumps({"version": serialize.VERSION, "max_residual": worst, "count": len(res)}, indent=2)
    lines = [f"sigma={s} residual={r:.3e}" for s, r in res] if len(res) <= 10 else []
    lines.append(f"{len(res)} permutations, max residual {worst:.3e}")
    return "\n".join(lines)


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyp4f3", description="Transformations of the unit-shift 4F3(1).")
    sub = parser.add_subparsers(dest="verb", required=True)

    def verb(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--format", choices=FORMATS, default="text")
        p.set_defaults(func=fn)
        return p

    p = verb("compose", cmd_compose, "compose two transformations (lhs after rhs)")
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)
    p = verb("invert", cmd_invert, "invert a transformation")
    p.add_argument("--target", required=True)
    p = verb("generator", cmd_generator, "print a built-in generator")
    p.add_argument("--name", required=True)
    p = verb("synthesize", cmd_synthesize, "transformation with a given matrix")
    p.add_argument("--matrix", help="36 comma-separated integers, row-major")
    p.add_argument("--target", help="use the matrix of this transformation")
    p = verb("contiguous", cmd_contiguous, "contiguous relation coefficients u, v")
    p.add_argument("--k", required=True)
    p.add_argument("--m", required=True)
    p = verb("three-term", cmd_three_term, "three-term relations of a pair")
    p.add_argument("--t1", required=True)
    p.add_argument("--t2", required=True)
    p = verb("decompose", cmd_decompose, "unit-shift 4F3 as two 3F2")
    p.add_argument("--t1", required=True)
    p.add_argument("--t2", required=True)
    p = verb("break", cmd_break, "combine two 3F2 into one unit-shift 4F3")
    p.add_argument("--kind", required=True, choices=relations.BREAK_KINDS)
    p.add_argument("--gamma", required=True)
    p = verb("summation", cmd_summation, "summation formula induced by a transformation")
    p.add_argument("--target", required=True)
    p.add_argument("--eliminate", default="e", choices=list("abcde"))
    p = verb("verify", cmd_verify, "numerically verify a transformation")
    p.add_argument("--target", required=True)
    p.add_argument("--point", help="a=..,b=..,c=..,d=..,e=..,f=..")
    p.add_argument("--points", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threshold", type=float, default=1e-10)
    p.add_argument("--tol", type=float)
    verb("catalog", cmd_catalog, "the 120 zero-shift transformations")
    p = verb("p5-check", cmd_p5_check, "P5 invariance of the normalized 3F2")
    p.add_argument("--point", required=True, help="x,y,z,u,v")
    p.add_argument("--sigma", default="0,1,2,3,4")
    p.add_argument("--orbit", action="store_true", help="check all 120 permutations")
    p.add_argument("--tol", type=float)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = args.func(args)
    except InputError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except HypError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OverflowError as exc:
        print(f"OverflowError: {exc}", file=sys.stderr)
        return 1
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface: ``bicomplexes [--input FILE | --fixture NAME] COMMAND``.

Exit status is 0 on success (including property checks that hold), 1 when a
checked property fails, and 2 on malformed input.
"""
from __future__ import annotations

import argparse
import ast
import json
import sys
from pathlib import Path

from .complex import blowup_model, shift, tensor, validate
from .dba import DbaError, isotypic
from .dsl import DslError, spec_to_dict
from .fixtures import FIXTURES, FixtureError, fixture_data, fixture_names
from .io import DocumentError, LoadedComplex, dumps, load_path
from .oracle import OracleInconclusive, brute_force_decompose
from .render import FORMATS, render
from .spectral import fss, purity_table
from .zigzag import (PROPERTIES, ConsistencyFault, check_property, decompose, looks_like_manifold,
                     multiplicities_from_ranks)

__all__ = ["main", "build_parser"]

EXIT_OK, EXIT_FALSE, EXIT_INPUT = 0, 1, 2
DEFAULT_ORACLE_LIMIT = 200


class InputError(Exception):
    pass


def _param_value(text: str):
    try:
        return ast.literal_eval(text)
    except (ValueError, SyntaxError):
        return text


def _parse_params(items) -> dict:
    params = {}
    for item in items or []:
        if "=" not in item:
            raise InputError(f"parameter {item!r} is not of the form key=value")
        k, v = item.split("=", 1)
        params[k.strip()] = _param_value(v.strip())
    return params


def _load(args) -> LoadedComplex:
    if bool(args.input) == bool(args.fixture):
        raise InputError("give exactly one of --input FILE or --fixture NAME")
    if args.fixture:
        d = fixture_data(args.fixture, **_parse_params(args.param))
        actions = {"sigma": d.action} if d.action is not None else {}
        return LoadedComplex(d.complex, d.real, actions, d.spec)
    return load_path(args.input)


def _emit(args, text: str) -> None:
    if getattr(args, "output", None):
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _dims_table(A) -> str:
    lines = ["bidegree  dim"]
    for (p, q) in sorted(A.support, key=lambda b: (b[0] + b[1], b[0])):
        lines.append(f"({p},{q})     {A.dim(p, q)}")
    lines.append(f"total     {A.total_dim()}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- commands


def cmd_validate(args, L: LoadedComplex) -> int:
    rep = validate(L.complex)
    if not rep:
        print(f"INVALID: {rep.identity} fails at {rep.bidegree}: {rep.message}")
        return EXIT_FALSE
    print("valid double complex")
    if L.real is not None:
        r = L.real.check(L.complex)
        print("real structure: " + ("ok" if r else f"FAILS ({r.identity} at {r.bidegree})"))
        if not r:
            return EXIT_FALSE
    return EXIT_OK


def cmd_pages(args, L) -> int:
    rep = fss(L.complex, "row" if args.row else "column")
    print(rep.table().rstrip("\n"))
    return EXIT_OK


def cmd_purity(args, L) -> int:
    t = purity_table(L.complex)
    print(t.table().rstrip("\n"))
    print("pure" if t.is_pure() else "not pure")
    return EXIT_OK


def cmd_zigzags(args, L) -> int:
    A = L.complex
    Z = brute_force_decompose(A) if args.oracle else decompose(A, oracle=False)
    print(Z.table().rstrip("\n"))
    return EXIT_OK


def cmd_check(args, L) -> int:
    res = check_property(L.complex, args.property)
    print(f"{res.which}: {'true' if res.holds else 'false'}")
    if res.witness:
        print(f"witness: {res.witness}")
    return EXIT_OK if res.holds else EXIT_FALSE


def cmd_manifold(args, L) -> int:
    ok, msg = looks_like_manifold(decompose(L.complex), args.dim)
    print("manifold-like: " + ("yes" if ok else "no"))
    if msg:
        print(f"witness: {msg}")
    return EXIT_OK if ok else EXIT_FALSE


def cmd_invariants(args, L) -> int:
    if args.action not in L.actions:
        known = ", ".join(sorted(L.actions)) or "none"
        raise InputError(f"no action named {args.action!r} (available: {known})")
    B = isotypic(L.complex, L.actions[args.action], args.character)
    _emit(args, dumps(B) + "\n" if args.output else _dims_table(B))
    return EXIT_OK


def cmd_blowup(args, L) -> int:
    Z = load_path(args.center).complex
    _emit(args, dumps(blowup_model(L.complex, Z, args.codim)) + "\n")
    return EXIT_OK


def cmd_tensor(args, L) -> int:
    B = load_path(args.other).complex
    _emit(args, dumps(tensor(L.complex, B)) + "\n")
    return EXIT_OK


def cmd_shift(args, L) -> int:
    _emit(args, dumps(shift(L.complex, args.i, args.j)) + "\n")
    return EXIT_OK


def cmd_render(args, L) -> int:
    Z = decompose(L.complex) if not L.complex.is_truncated() else None
    _emit(args, render(L.complex, Z, args.format))
    return EXIT_OK


def cmd_report(args, L) -> int:
    A = L.complex
    out = ["== dimensions", _dims_table(A).rstrip("\n")]
    rep = validate(A)
    out += ["== validate", "valid" if rep else f"INVALID: {rep.message}"]
    if not rep:
        print("\n".join(out))
        return EXIT_FALSE
    for kind in ("column", "row"):
        out += [f"== {kind} spectral sequence", fss(A, kind).table().rstrip("\n")]
    out += ["== purity", purity_table(A).table().rstrip("\n")]
    if not A.is_truncated():
        Z = multiplicities_from_ranks(A)
        if A.total_dim() <= args.oracle_limit:
            if brute_force_decompose(A) != Z:
                raise ConsistencyFault("rank route and oracle give different multiplicities")
            note = " (rank route, confirmed by the oracle)"
        else:
            note = " (rank route; oracle skipped, complex too large)"
        out += ["== zigzags" + note, Z.table().rstrip("\n"), "== properties"]
        for prop in PROPERTIES:
            r = check_property(A, prop, oracle=False)
            out.append(f"{prop}: {'true' if r.holds else 'false'}" + (f"  ({r.witness})" if r.witness else ""))
    print("\n".join(out))
    return EXIT_OK


def cmd_selftest(args, L=None) -> int:
    from .testing import random_complex

    bad = 0
    for i in range(args.count):
        A = random_complex(args.seed + i, order=args.order)
        if multiplicities_from_ranks(A) != brute_force_decompose(A):
            bad += 1
            print(f"seed {args.seed + i}: rank route and oracle disagree")
    print(f"{args.count - bad}/{args.count} random complexes agree")
    return EXIT_OK if not bad else EXIT_FALSE


def cmd_fixture(args) -> int:
    if args.name == "list":
        for n in fixture_names():
            params = FIXTURES[n][1]
            print(f"{n}" + (f"  ({params})" if params else ""))
        return EXIT_OK
    if args.name == "dump":
        if not args.params:
            raise InputError("fixture dump needs a fixture name")
        name, raw = args.params[0], args.params[1:]
    else:
        name, raw = args.name, args.params
    d = fixture_data(name, **_parse_params(raw))
    if args.spec:
        if d.spec is None:
            raise InputError(f"fixture {name} has no algebra presentation")
        _emit(args, json.dumps(spec_to_dict(d.spec), indent=1, sort_keys=True) + "\n")
    else:
        actions = {"sigma": d.action} if d.action is not None else None
        _emit(args, dumps(d.complex, d.real, actions) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bicomplexes", description="Exact computations with bounded double complexes.")
    ap.add_argument("--input", "-i", help="complex document (JSON) or algebra presentation (DSL)")
    ap.add_argument("--fixture", "-f", help="built-in fixture name (see 'fixture list')")
    ap.add_argument("--param", "-P", action="append", metavar="KEY=VALUE", help="fixture parameter, repeatable")
    ap.add_argument("--seed", type=int, default=0, help="seed for randomized self-tests")
    sub = ap.add_subparsers(dest="command", required=True)

    sub.add_parser("validate", help="check d^2 = 0 and the real structure")
    p = sub.add_parser("pages", help="Froelicher spectral sequence pages")
    p.add_argument("--row", action="store_true", help="use the row filtration")
    sub.add_parser("purity", help="b-numbers of the Hodge filtrations")
    p = sub.add_parser("zigzags", help="zigzag multiplicities")
    p.add_argument("--oracle", action="store_true", help="use the base-change oracle instead of ranks")
    p = sub.add_parser("check", help="test a cohomological property")
    p.add_argument("property", choices=list(PROPERTIES) + ["page1_ddbar", "ddc+3"])
    p = sub.add_parser("manifold-like", help="shape conditions for compact manifolds")
    p.add_argument("--dim", type=int, required=True)
    p = sub.add_parser("invariants", help="isotypic part for a group action")
    p.add_argument("--action", required=True)
    p.add_argument("--character", type=int, default=0)
    p.add_argument("--output", "-o")
    p = sub.add_parser("blowup", help="add shifted copies of a centre")
    p.add_argument("--center", required=True)
    p.add_argument("--codim", type=int, required=True)
    p.add_argument("--output", "-o")
    p = sub.add_parser("tensor", help="tensor product with another complex")
    p.add_argument("other")
    p.add_argument("--output", "-o")
    p = sub.add_parser("shift", help="bidegree shift")
    p.add_argument("i", type=int)
    p.add_argument("j", type=int)
    p.add_argument("--output", "-o")
    p = sub.add_parser("render", help="draw the complex and its summands")
    p.add_argument("--format", choices=FORMATS, default="ascii")
    p.add_argument("--output", "-o")
    p = sub.add_parser("report", help="everything at once")
    p.add_argument("--oracle-limit", type=int, default=DEFAULT_ORACLE_LIMIT,
                   help="largest total dimension for which the oracle also runs")
    p = sub.add_parser("fixture", help="list or dump built-in fixtures")
    p.add_argument("name", help="'list', 'dump', or a fixture name")
    p.add_argument("params", nargs="*", help="fixture name (after dump) and key=value parameters")
    p.add_argument("--spec", action="store_true", help="dump the algebra presentation instead of the complex")
    p.add_argument("--output", "-o")
    p = sub.add_parser("selftest", help="compare rank route and oracle on random complexes")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--order", type=int, default=1)
    return ap


COMMANDS = {
    "validate": cmd_validate, "pages": cmd_pages, "purity": cmd_purity, "zigzags": cmd_zigzags,
    "check": cmd_check, "manifold-like": cmd_manifold, "invariants": cmd_invariants, "blowup": cmd_blowup,
    "tensor": cmd_tensor, "shift": cmd_shift, "render": cmd_render, "report": cmd_report,
}


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        if args.command == "fixture":
            return cmd_fixture(args)
        if args.command == "selftest":
            return cmd_selftest(args)
        L = _load(args)
        return COMMANDS[args.command](args, L)
    except (InputError, DocumentError, DslError, DbaError, FixtureError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        # e.g. property checks on a window-compiled complex, codimension < 2
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ConsistencyFault, OracleInconclusive) as exc:
        print(f"internal fault: {exc}", file=sys.stderr)
        return EXIT_FALSE


if __name__ == "__main__":
    sys.exit(main())

"""amou-k0 command line.

    amou-k0 k0 A
    amou-k0 equiv p q
    amou-k0 k0map phi
    amou-k0 check {axioms,limit,orthogonality,projections,k0,functor,all}

Reports go to stdout and errors to stderr.  Exit status: 0 success, 1 a check
failed, 2 usage, parse or lookup error.
"""
from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import k0, morphisms, projlattice, suites
from .errors import AmouError, NotProjection
from .linalg import DEFAULT_TOL, Tolerance
from .workspace import Workspace, format_matrix

WORKSPACE_ENV = "AMOU_K0_WORKSPACE"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--trials", type=_positive_int, default=100, help="random trials per check (default 100)")
    common.add_argument("--seed", type=int, default=0, help="base seed (default 0)")
    common.add_argument("--tol", type=_positive_float, default=None, help="comparison tolerance eps")
    common.add_argument("--workspace", default=None, help=f"workspace file (default ${WORKSPACE_ENV})")

    parser = argparse.ArgumentParser(prog="amou-k0", description="K_0 workbench for absolute matrix order unit spaces")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("k0", parents=[common], help="ordered K_0 group of a named algebra")
    p.add_argument("algebra")
    p = sub.add_parser("equiv", parents=[common], help="decide p ~ q for named projections")
    p.add_argument("p")
    p.add_argument("q")
    p = sub.add_parser("k0map", parents=[common], help="K_0 of a named morphism")
    p.add_argument("morphism")
    p = sub.add_parser("check", parents=[common], help="run property suites")
    p.add_argument("suite", help=f"one of {', '.join(suites.SUITES)}, all")
    return parser


def _workspace(args, required: bool) -> Workspace | None:
    path = args.workspace or os.environ.get(WORKSPACE_ENV)
    if not path:
        if required:
            raise UsageError(f"no workspace given; pass --workspace or set {WORKSPACE_ENV}")
        return None
    return Workspace.load(path)


def _echo(args) -> str:
    parts = ["amou-k0", args.command]
    parts += [getattr(args, a) for a in ("algebra", "p", "q", "morphism", "suite") if hasattr(args, a)]
    if args.command == "check":
        parts += ["--trials", str(args.trials), "--seed", str(args.seed)]
    if args.tol is not None:
        parts += ["--tol", repr(args.tol)]
    if args.workspace:
        parts += ["--workspace", args.workspace]
    return "$ " + " ".join(parts)


def _tol(args, default: Tolerance) -> Tolerance:
    return default if args.tol is None else Tolerance(eps=args.tol, snap=default.snap)


def _ranks(r) -> str:
    return "(" + ", ".join(str(x) for x in r) + ")"


def cmd_k0(args, out) -> int:
    ws = _workspace(args, required=True)
    alg = ws.algebra(args.algebra)
    g = k0.k0_of(alg, _tol(args, DEFAULT_TOL), seed=args.seed)
    print(f"algebra {args.algebra} = {alg}", file=out)
    print(g.describe(), file=out)
    print(f"finiteness gate (e^n finite, n <= 4): {'pass' if g.finite_units else 'fail'}", file=out)
    for name, ok in g.verified.items():
        print(f"[{'PASS' if ok else 'FAIL'}] {name}", file=out)
    return EXIT_OK if all(g.verified.values()) else EXIT_FAIL


def cmd_equiv(args, out) -> int:
    ws = _workspace(args, required=True)
    tol = _tol(args, DEFAULT_TOL)
    p, q = ws.element(args.p), ws.element(args.q)
    for name, v in ((args.p, p), (args.q, q)):
        if not projlattice.is_order_projection(v, tol):
            raise NotProjection(f"{name} is not an order projection")
    rp, rq = projlattice.rank_vector(p, tol), projlattice.rank_vector(q, tol)
    w = projlattice.equivalent(p, q, tol)
    if w is None:
        print(f"INEQUIVALENT: {args.p} !~ {args.q}, ranks {_ranks(rp)} vs {_ranks(rq)}", file=out)
        return EXIT_OK
    ok = w.verify(tol)
    m, n = w.v.level
    print(f"EQUIVALENT: {args.p} ~ {args.q}, ranks {_ranks(rp)}", file=out)
    print(f"witness v in M_{m},{n}({ws.algebra_name(p.algebra)}) with |v*| = {args.p}, |v| = {args.q}:", file=out)
    for i, b in enumerate(w.v.blocks, start=1):
        head = f"  block {i} = "
        print(head + format_matrix(np.round(b, 12) + 0.0, " " * len(head)), file=out)
    print(f"[{'PASS' if ok else 'FAIL'}] witness verified", file=out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_k0map(args, out) -> int:
    ws = _workspace(args, required=True)
    phi = ws.morphism(args.morphism)
    src, dst, _ = ws.morphisms[args.morphism]
    mat = morphisms.k0_of_map(phi, _tol(args, DEFAULT_TOL))
    print(f"K0({args.morphism}): K0({src}) -> K0({dst}), unital: {'yes' if phi.unital else 'no'}", file=out)
    for row in mat:
        print("  [" + " ".join(f"{int(x):3d}" for x in row) + " ]", file=out)
    ok = np.array_equal(mat, phi.multiplicity)
    print(f"[{'PASS' if ok else 'FAIL'}] K0 matrix equals the multiplicity matrix", file=out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_check(args, out) -> int:
    ws = _workspace(args, required=False)
    algebras, maps = suites.DEFAULT_ALGEBRAS, ()
    if ws is not None:
        if ws.algebras:
            algebras = tuple(dict.fromkeys(ws.algebras.values()))
        maps = tuple((name, spec) for name, (_, _, spec) in ws.morphisms.items())
    reports = suites.run_suite(args.suite, args.trials, args.seed, _tol(args, suites.SUITE_TOL), algebras, maps)
    print("algebras: " + ", ".join(str(a) for a in algebras), file=out)
    total = failed = 0
    for rep in reports:
        print(rep.render(), file=out)
        total += len(rep.checks)
        failed += len(rep.failures())
    if failed:
        print(f"RESULT: FAIL ({failed} of {total} checks failed)", file=out)
        return EXIT_FAIL
    print(f"RESULT: PASS ({total} checks)", file=out)
    return EXIT_OK


COMMANDS = {"k0": cmd_k0, "equiv": cmd_equiv, "k0map": cmd_k0map, "check": cmd_check}


def main(argv: list[str] | None = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    print(_echo(args), file=out)
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"amou-k0: error: {exc}", file=err)
    except AmouError as exc:
        print(f"amou-k0: error: {type(exc).__name__}: {exc}", file=err)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

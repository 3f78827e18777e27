"""Command-line harness: build, query, bench, verify, derand, generate.

Exit codes: 0 success, 1 usage or input error, 2 oracle mismatch,
3 verification collision (with ``--fail-on-collision``).
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .baseline import BaselineIndex
from .bench import OracleMismatch, Workload, render, run_bench
from .derand import query_sets, count_b_id, derandomize
from .dump import DumpError, load_text, read_dump, write_dump
from .fingerprint import PhiParams, pick_random_phi
from .stats import QueryStats
from .structures import CERTIFIED, KINDS, build_structure
from .verify import verify_phi

EXIT_OK, EXIT_USAGE, EXIT_MISMATCH, EXIT_COLLISION = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _eps(value: str) -> float:
    try:
        return float(Fraction(value))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad epsilon {value!r}") from None


def _add_text(p: argparse.ArgumentParser, required: bool = True) -> None:
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--text", help="path of a text file (raw bytes)")
    g.add_argument("--gen", help="generator spec, e.g. random:n=1024,sigma=2,seed=7")


def _text(args):
    spec = f"file:{args.text}" if args.text else args.gen
    try:
        return load_text(spec)
    except (OSError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _taus(value: str, n: int) -> list[int]:
    out = []
    for item in value.split(","):
        item = item.strip()
        try:
            tau = n if item == "n" else int(item)
        except ValueError:
            raise UsageError(f"bad tau {item!r}") from None
        if tau < 1:
            raise UsageError(f"tau must be >= 1, got {tau}")
        out.append(tau)
    return out


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_build(args) -> int:
    t = _text(args)
    (tau,) = _taus(args.tau, t.n)
    try:
        built = build_structure(args.structure, t, tau, seed=args.seed, eps=args.eps)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    meta = write_dump(built, args.out)
    print(json.dumps({"kind": built.kind, "out": args.out, "words": meta["words"],
                      "samples": meta["samples"], "tau_eff": built.tau}, sort_keys=True))
    return EXIT_OK


def cmd_query(args) -> int:
    try:
        built = read_dump(args.dump)
    except (OSError, DumpError, ValueError) as exc:
        raise UsageError(f"cannot load {args.dump}: {exc}") from None
    t = built.text
    try:
        t.check_index(args.i, args.j)
    except IndexError as exc:
        raise UsageError(str(exc)) from None
    st = QueryStats()
    answer = built.query(args.i, args.j, st, debug=args.checks == "invariants")
    record = {"i": args.i, "j": args.j, "answer": answer, "stats": st.as_dict(args.timing)}
    if st.path == CERTIFIED:
        record["answer"] = None
        record["bound"] = answer
    status = EXIT_OK
    if args.checks == "oracle":
        expected = BaselineIndex(t).lce(args.i, args.j)
        ok = expected <= answer if st.path == CERTIFIED else expected == answer
        record["oracle"] = expected
        if not ok:
            status = EXIT_MISMATCH
    print(json.dumps(record, sort_keys=True))
    return status


def _pairs(value: str) -> list[tuple[int, int]]:
    pairs = []
    for item in filter(None, value.split(";")):
        a, _, b = item.partition(",")
        try:
            pairs.append((int(a), int(b)))
        except ValueError:
            raise UsageError(f"bad query pair {item!r}") from None
    return pairs


def cmd_bench(args) -> int:
    t = _text(args)
    structures = [s.strip() for s in args.structure.split(",")]
    for s in structures:
        if s not in KINDS:
            raise UsageError(f"unknown structure {s!r}")
    w = Workload(
        text=t,
        taus=_taus(args.tau, t.n),
        structures=structures,
        pairs=_pairs(args.pairs) if args.pairs is not None else None,
        queries=args.queries,
        seed=args.seed,
        checks=args.checks,
        eps=args.eps,
        timing=args.timing,
    )
    try:
        rows = run_bench(w)
    except OracleMismatch as exc:
        print(json.dumps({"error": "oracle mismatch", **exc.witness}, sort_keys=True), file=sys.stderr)
        return EXIT_MISMATCH
    except (ValueError, IndexError) as exc:
        raise UsageError(str(exc)) from None
    _emit(render(rows, args.format, args.timing), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    t = _text(args)
    (tau,) = _taus(args.tau, t.n)
    if args.modulus is not None:
        if args.base is None:
            raise UsageError("--modulus needs --base")
        try:
            phi = PhiParams(args.modulus, args.base)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        phi = pick_random_phi(t.n, args.c, seed=args.seed)
    report = verify_phi(t, tau, phi)
    _emit(report.to_json() + "\n", args.out)
    if not report.collision_free and args.fail_on_collision:
        return EXIT_COLLISION
    return EXIT_OK


def cmd_derand(args) -> int:
    t = _text(args)
    (tau,) = _taus(args.tau, t.n)
    A, L = query_sets(t.n, tau)
    oracle = BaselineIndex(t)
    try:
        phi = derandomize(t, A, L, args.eps, args.space, oracle)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    record = {
        "p": phi.p,
        "xs": list(phi.xs),
        "eps": args.eps,
        "k_max": phi.k,
        "b_id": count_b_id(t, A, L, oracle),
        "rounds": [vars(r) for r in phi.rounds],
    }
    _emit(json.dumps(record, sort_keys=True) + "\n", args.out)
    return EXIT_OK


def cmd_generate(args) -> int:
    try:
        t = load_text(args.gen)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    data = t.decode().encode("latin-1")
    if args.out:
        Path(args.out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lce-tradeoff", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("build", help="build a structure and write a dump")
    _add_text(p)
    p.add_argument("--tau", required=True, help="block length, or 'n'")
    p.add_argument("--structure", required=True, choices=KINDS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eps", type=_eps, default=0.5)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("query", help="answer one LCE query from a dump")
    p.add_argument("dump")
    p.add_argument("i", type=int)
    p.add_argument("j", type=int)
    p.add_argument("--checks", choices=("oracle", "invariants", "none"), default="none")
    p.add_argument("--timing", action="store_true", help="include wall time (not replayable)")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("bench", help="run a query workload and print a table")
    _add_text(p)
    p.add_argument("--tau", required=True, help="comma-separated list; 'n' means the text length")
    p.add_argument("--structure", required=True, help="comma-separated list of kinds")
    p.add_argument("--queries", type=int, default=1000, help="number of random queries")
    p.add_argument("--pairs", help="explicit queries 'i,j;i,j;...' (may be empty)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eps", type=_eps, default=0.5)
    p.add_argument("--checks", choices=("oracle", "invariants", "none"), default="oracle")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--timing", action="store_true", help="add wall-time columns (not replayable)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify", help="check a fingerprint function for collisions")
    _add_text(p)
    p.add_argument("--tau", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--modulus", type=int, help="fixed prime modulus instead of a random one")
    p.add_argument("--base", type=int)
    p.add_argument("--fail-on-collision", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("derand", help="derandomize the fingerprint tuple")
    _add_text(p)
    p.add_argument("--tau", required=True)
    p.add_argument("--eps", type=_eps, default=0.5)
    p.add_argument("--space", type=int, help="positions of A held at once (default |A|)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_derand)

    p = sub.add_parser("generate", help="write a generated text")
    p.add_argument("--gen", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help, or a usage error already printed
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"lce-tradeoff: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

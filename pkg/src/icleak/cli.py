"""Command-line interface: ``icleak analyze | graph | verify-paper``.

Exit codes: 0 success, 1 verification failure, 2 unreadable or invalid
input, 3 a size or search limit was exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .confusion import (CHROMATIC_CAP, DEFAULT_VERTEX_CAP, DOT_CAP, GraphCapError,
                        build_confusion_graph, chromatic_number, fractional_chromatic,
                        max_independent_set, to_dot)
from .fitting import SearchLimitError, SearchLimits
from .fixtures import run_fixtures
from .instance import InstanceError, parse_instance
from .report import analyze, render_table

EXIT_OK, EXIT_VERIFY, EXIT_PARSE, EXIT_LIMIT = 0, 1, 2, 3


def _load(path: str, q: int | None):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InstanceError(f"cannot read {path}: {exc.strerror}") from None
    inst, split = parse_instance(text)
    if q is not None:
        inst = inst.with_q(q)
    return inst, split


def _emit(text: str, dest: str | None) -> None:
    if dest in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(dest).write_text(text)


def cmd_analyze(args: argparse.Namespace) -> int:
    inst, split = _load(args.instance, args.q)
    limits = SearchLimits(args.max_free_cells, args.mode, args.seed, args.iterations)
    if split is None and (args.exhaustive_t1 or args.pareto or args.mutual_info):
        raise InstanceError("adversary: required for --exhaustive-t1, --pareto and --mutual-info")
    report = analyze(inst, split, limits, args.vertex_cap, exhaustive_t1=args.exhaustive_t1,
                     pareto=args.pareto, mutual_info=args.mutual_info, bits=args.bits)
    if args.json is not None:
        _emit(report.to_json(), args.json)
        if args.json == "-":
            return EXIT_OK
    sys.stdout.write(render_table(report))
    return EXIT_OK


def cmd_graph(args: argparse.Namespace) -> int:
    inst, _ = _load(args.instance, args.q)
    g = build_confusion_graph(inst, args.t, args.vertex_cap)
    alpha, witness = max_independent_set(g, args.vertex_cap)
    chi = chromatic_number(g) if g.vertex_count <= CHROMATIC_CAP else None
    stats = {"vertices": g.vertex_count, "edges": g.edge_count, "alpha": alpha,
             "alpha_witness": [g.label(v) for v in witness], "chi": chi,
             "chi_f": {"num": str(fractional_chromatic(g, alpha).numerator),
                       "den": str(fractional_chromatic(g, alpha).denominator)}}
    if args.dot:
        if g.vertex_count > DOT_CAP:
            raise GraphCapError(f"{g.vertex_count} vertices exceed the DOT cap {DOT_CAP}")
        _emit(to_dot(g), args.dot)
    if args.json:
        sys.stdout.write(json.dumps(stats, sort_keys=True, indent=2) + "\n")
        return EXIT_OK
    chi_f = fractional_chromatic(g, alpha)
    print(f"|V| = {g.vertex_count}")
    print(f"|E| = {g.edge_count}")
    print(f"alpha = {alpha}  witness {{{', '.join(stats['alpha_witness'])}}}")
    print(f"chi = {chi if chi is not None else f'skipped (|V| > {CHROMATIC_CAP})'}")
    print(f"chi_f = {chi_f}")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    outcomes = run_fixtures(corrupt=args.corrupt)
    failed = [o for o in outcomes if not o.passed]
    if args.json:
        doc = {"passed": [o.name for o in outcomes if o.passed],
               "failed": [{"name": o.name, "actual": o.actual, "expected": o.expected} for o in failed]}
        sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    else:
        width = max(len(o.name) for o in outcomes)
        for o in outcomes:
            line = f"{'PASS' if o.passed else 'FAIL'}  {o.name:<{width}}"
            if not o.passed:
                line += f"  got {o.actual}, expected {o.expected}"
            print(line)
        print(f"{len(outcomes) - len(failed)}/{len(outcomes)} fixtures passed")
    return EXIT_VERIFY if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="icleak", description="Exact leakage analysis for index coding instances.")
    p.add_argument("--version", action="version", version=f"icleak {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="rates, minimum linear leakage and converse bound")
    a.add_argument("instance", help="instance JSON file ('-' for stdin)")
    a.add_argument("--q", type=int, help="override the field size in the file")
    a.add_argument("--max-free-cells", type=int, help="exhaustive search limit on free entries")
    a.add_argument("--mode", choices=["exhaustive", "randomized"], default="exhaustive")
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--iterations", type=int, default=10_000, help="randomized-mode samples")
    a.add_argument("--vertex-cap", type=int, default=DEFAULT_VERTEX_CAP)
    a.add_argument("--exhaustive-t1", action="store_true",
                   help="also optimize over all deterministic block-length-1 codes")
    a.add_argument("--pareto", action="store_true", help="minimum leakage per achievable rank")
    a.add_argument("--mutual-info", action="store_true", help="mutual-information leakage of the linear optimum")
    a.add_argument("--bits", action="store_true", help="report leakage and rates in bits")
    a.add_argument("--json", nargs="?", const="-", metavar="PATH",
                   help="write the JSON report to PATH (stdout if omitted)")
    a.set_defaults(func=cmd_analyze)

    g = sub.add_parser("graph", help="confusion graph statistics")
    g.add_argument("instance")
    g.add_argument("--q", type=int)
    g.add_argument("--t", type=int, default=1, help="block length")
    g.add_argument("--vertex-cap", type=int, default=DEFAULT_VERTEX_CAP)
    g.add_argument("--dot", metavar="PATH", help="write Graphviz DOT ('-' for stdout)")
    g.add_argument("--json", action="store_true")
    g.set_defaults(func=cmd_graph)

    v = sub.add_parser("verify-paper", help="check the built-in reference fixtures")
    v.add_argument("--json", action="store_true")
    v.add_argument("--corrupt", metavar="NAME", help=argparse.SUPPRESS)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InstanceError, ValueError) as exc:
        if isinstance(exc, (GraphCapError, SearchLimitError)):
            print(f"icleak: limit exceeded: {exc}", file=sys.stderr)
            return EXIT_LIMIT
        print(f"icleak: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except KeyError as exc:
        print(f"icleak: error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())

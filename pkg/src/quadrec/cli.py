"""Command line front end.

Three subcommands: ``symbol`` evaluates a single residue or unit symbol,
``verify`` runs the prediction-vs-oracle sweeps, ``invariant`` evaluates the
quartic invariant of an edge set.  Exit codes: 0 clean, 1 usage, 2 domain
error, 3 at least one sweep failure, 4 undecided instances but no failures.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import asdict
from datetime import datetime, timezone

from .arith import DomainError, jacobi, legendre, quartic
from .f2graph import build_graph, edge, graph_to_lines
from .invariants import general_invariant
from .pell import UnitCache, unit_symbol
from .sweeps import CHECK_DEFAULT_BOUNDS, SweepConfig, run_check, summarize


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad usage; this tool reserves 2 for domain errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _edge_arg(text: str) -> tuple[int, int]:
    left, sep, right = text.partition("-")
    if sep and left.strip().isdigit() and right.strip().isdigit():
        return int(left), int(right)
    raise argparse.ArgumentTypeError(f"expected an edge like 5-29, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="quadrec",
                     description="residue symbols, Pell units, and "
                                 "quartic-invariant verification sweeps")
    sub = parser.add_subparsers(dest="command", metavar="command",
                                parser_class=_Parser, required=True)

    p_sym = sub.add_parser("symbol", help="evaluate one symbol")
    p_sym.add_argument("kind", choices=["legendre", "jacobi", "quartic", "unit"])
    p_sym.add_argument("m", type=int, help="numerator (or unit modulus)")
    p_sym.add_argument("p", type=int, help="prime (odd modulus for jacobi)")
    p_sym.set_defaults(func=cmd_symbol)

    p_ver = sub.add_parser("verify", help="run prediction-vs-oracle sweeps")
    p_ver.add_argument("--check", action="append", metavar="NAME",
                       choices=sorted(CHECK_DEFAULT_BOUNDS),
                       help="sweep to run (repeatable; default all)")
    p_ver.add_argument("--bound", type=_positive_int, default=None,
                       help="override the per-check instance bound")
    p_ver.add_argument("--samples", type=_positive_int, default=200,
                       help="random graphs for the duality check")
    p_ver.add_argument("--cache", metavar="PATH", default=None,
                       help="fundamental unit cache file")
    p_ver.add_argument("--precision", type=_positive_int, default=64,
                       help="starting interval precision in bits")
    p_ver.add_argument("--jobs", type=_positive_int, default=1,
                       help="worker processes")
    p_ver.add_argument("--format", choices=["human", "json-lines", "csv"],
                       default="human")
    p_ver.add_argument("--seed", type=int, default=0,
                       help="seed for the randomized checks")
    p_ver.set_defaults(func=cmd_verify)

    p_inv = sub.add_parser("invariant", help="evaluate the invariant of an edge set")
    p_inv.add_argument("edges", nargs="+", type=_edge_arg, metavar="P-Q",
                       help="edge of the prime graph, e.g. 5-29")
    p_inv.add_argument("--show-graph", action="store_true",
                       help="also print the full graph on the involved primes")
    p_inv.set_defaults(func=cmd_invariant)
    return parser


def cmd_symbol(args) -> int:
    m, p = args.m, args.p
    if args.kind == "legendre":
        label, value = f"({m}|{p})", legendre(m, p)
    elif args.kind == "jacobi":
        label, value = f"({m}|{p})", jacobi(m, p)
    elif args.kind == "quartic":
        label, value = f"({m}|{p})_4", quartic(m, p)
    else:
        label, value = f"(eps_{m}|{p})", unit_symbol(m, p)
    print(f"{label} = {value:+d}")
    return 0


def _write_report(out, fmt: str, records, counts) -> None:
    stamp = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
    print(f"# quadrec verify {stamp}", file=out)
    if fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["check", "instance", "predicted", "oracle", "verdict"])
        for r in records:
            writer.writerow([r.check, r.instance, r.predicted, r.oracle, r.verdict])
        print(f"# summary pass={counts['pass']} fail={counts['fail']} "
              f"undecided={counts['undecided']}", file=out)
    elif fmt == "json-lines":
        for r in records:
            print(json.dumps(asdict(r), sort_keys=True), file=out)
        print(json.dumps({"summary": counts}, sort_keys=True), file=out)
    else:
        for r in records:
            print(f"{r.check:<9} {r.instance:<22} {r.predicted:>10} vs "
                  f"{r.oracle:<22} {r.verdict}", file=out)
        total = sum(counts.values())
        print(f"{total} instances: {counts['pass']} pass, {counts['fail']} fail, "
              f"{counts['undecided']} undecided", file=out)


def cmd_verify(args) -> int:
    checks = tuple(args.check) if args.check else tuple(sorted(CHECK_DEFAULT_BOUNDS))
    config = SweepConfig(checks=checks, bound=args.bound, samples=args.samples,
                         cache_path=args.cache, precision_start=args.precision,
                         output_format=args.format, jobs=args.jobs, seed=args.seed)
    cache = UnitCache(args.cache) if args.cache else None
    records = []
    for name in checks:
        records.extend(run_check(name, config, cache=cache))
    counts = summarize(records)
    _write_report(sys.stdout, args.format, records, counts)
    if cache is not None:
        cache.compact()
    if counts["fail"]:
        return 3
    if counts["undecided"]:
        return 4
    return 0


def cmd_invariant(args) -> int:
    vec = set()
    for p, q in args.edges:
        vec.symmetric_difference_update({edge(p, q)})
    report = general_invariant(sorted(vec))
    print(report)
    if args.show_graph:
        support = sorted({x for e in vec for x in e})
        for line in graph_to_lines(build_graph(support)):
            print(line)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

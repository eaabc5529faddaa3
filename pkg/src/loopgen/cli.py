"""``loopgen`` command-line interface."""
from __future__ import annotations

import argparse
import csv
import sys
import time
from typing import Sequence

from .curves import count_sets
from .exact import RootRational
from .graph import STANDARD_GRAPHS, GraphError, RecouplingGraph, parse_graph
from .oracles import BudgetExceeded, contraction_oracle
from .quantum import AssignmentError, QuantumAssignment, assignments
from .series import CapError
from .symbols import SymbolEvaluator, generating_function, symbol_value, symbol_via_layer_sums
from .verify import check, verify_glue

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_BUDGET = 0, 1, 2, 3
BENCH_HEADER = ("evaluator", "max2j", "cases", "wall_ms", "terms")


class UsageError(Exception):
    pass


def load_graph(source: str) -> RecouplingGraph:
    """A graph file path, or ``@3j``/``@3j3j``/``@5j``/``@6j``/``@9j``."""
    if source.startswith("@"):
        try:
            return STANDARD_GRAPHS[source[1:]]()
        except KeyError:
            raise UsageError(f"unknown built-in graph {source!r}; choose from "
                             + ", ".join("@" + k for k in STANDARD_GRAPHS)) from None
    try:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {source}: {exc.strerror}") from None
    return parse_graph(text)


def approx(x: RootRational) -> str:
    return f"{float(x):.15g}"


def _resolve(g: RecouplingGraph, name: str) -> str:
    lines = g.leg_names + g.edge_names
    if name in lines:
        return name
    hits = [x for x in lines if x.lower() == name.lower()]
    if len(hits) != 1:
        raise UsageError(f"unknown line {name!r}; lines are {', '.join(lines)}")
    return hits[0]


def parse_assignment(g: RecouplingGraph, pairs: Sequence[str], ms: Sequence[int] | None) -> QuantumAssignment:
    tj: dict[str, int] = {}
    tm: dict[str, int] = {}
    for item in pairs:
        name, eq, val = item.partition("=")
        if not eq:
            raise UsageError(f"expected name=2j[,2m], got {item!r}")
        line = _resolve(g, name)
        parts = val.split(",")
        try:
            nums = [int(p) for p in parts]
        except ValueError:
            raise UsageError(f"doubled quantum numbers must be integers: {item!r}") from None
        if len(nums) > 2 or (len(nums) == 2 and line not in g.leg_names):
            raise UsageError(f"bad value in {item!r}")
        tj[line] = nums[0]
        if len(nums) == 2:
            tm[line] = nums[1]
    if ms is not None:
        if len(ms) != g.J:
            raise UsageError(f"--m needs {g.J} values, one per leg ({', '.join(g.leg_names)})")
        tm.update(zip(g.leg_names, ms))
    q = QuantumAssignment(tj, tm)
    q.validate(g)
    return q


# commands -------------------------------------------------------------------


def cmd_gf(args, out) -> int:
    g = load_graph(args.graph)
    gf = generating_function(g)
    print(f"base: {gf.base}", file=out)
    for j, q in gf.q_factors.items():
        print(f"Q[{j}]: {q}", file=out)
    _print_counts(g, out)
    return EXIT_OK


def _print_counts(g: RecouplingGraph, out) -> None:
    n0, pairs = count_sets(g)
    print(f"|Omega0| = {n0}  (2^(I-V+1) = {2 ** (g.I - g.V + 1)})", file=out)
    for (i, j), n in sorted(pairs.items()):
        print(f"|Omega({i},{j})| = {n}", file=out)


def cmd_count(args, out) -> int:
    g = load_graph(args.graph)
    print(f"V = {g.V}  I = {g.I}  J = {g.J}", file=out)
    _print_counts(g, out)
    return EXIT_OK


def cmd_symbol(args, out) -> int:
    g = load_graph(args.graph)
    q = parse_assignment(g, args.numbers, args.m)
    if args.cap is not None:
        over = {v: e for v, e in q.exponents(g).items() if e > args.cap}
        if over:
            raise CapError(f"cap {args.cap} is below required exponents {over}")
    s = symbol_value(g, q)
    print(s, file=out)
    if not s.flags:
        print(f"~ {approx(s.value)}", file=out)
    return EXIT_OK


def cmd_check(args, out) -> int:
    g = load_graph(args.graph)
    report = check(g, args.max2j, budget=args.budget)
    for label, q, got, want in report.mismatches:
        print(f"mismatch vs {label}: 2j={dict(q.twice_j)} 2m={dict(q.twice_m)}: {got} != {want}", file=out)
    print(f"oracle: {report.oracle}", file=out)
    print(report.summary(), file=out)
    return EXIT_OK if report.ok else EXIT_VERIFY


def cmd_glue(args, out) -> int:
    g = load_graph(args.graph)
    for leg in (args.leg1, args.leg2):
        if leg not in g.leg_names:
            raise UsageError(f"no external leg {leg!r}; legs are {', '.join(g.leg_names)}")
    glued, ok = verify_glue(g, args.leg1, args.leg2, args.name, args.cap)
    out.write(glued.to_text())
    print(f"# verdict: {'PASS' if ok else 'FAIL'} (verified to order {args.cap})", file=out)
    return EXIT_OK if ok else EXIT_VERIFY


def bench_rows(g: RecouplingGraph, max2j: int, budget: int):
    """Yield ``(evaluator, max2j, cases, wall_ms, terms)`` per size; contraction stops once over budget."""
    contraction_on = True
    for size in range(max2j + 1):
        cases = list(assignments(g, size, admissible=True))

        t0 = time.perf_counter()
        ev = SymbolEvaluator(g, size)
        for q in cases:
            ev(q)
        yield "series", size, len(cases), (time.perf_counter() - t0) * 1000, len(ev.series)

        if g.J == 0:
            stats: dict = {}
            t0 = time.perf_counter()
            for q in cases:
                symbol_via_layer_sums(g, q, ev.gf, stats=stats)
            yield "layers", size, len(cases), (time.perf_counter() - t0) * 1000, stats.get("terms", 0)

        if contraction_on:
            stats = {}
            t0 = time.perf_counter()
            try:
                for q in cases:
                    contraction_oracle(g, q, budget - stats.get("terms", 0), stats=stats)
            except BudgetExceeded:
                contraction_on = False
                continue
            yield "contraction", size, len(cases), (time.perf_counter() - t0) * 1000, stats["terms"] if cases else 0


def cmd_bench(args, out) -> int:
    g = load_graph(args.graph)
    writer = csv.writer(out, lineterminator="\n") if args.csv else None
    if writer:
        writer.writerow(BENCH_HEADER)
    else:
        print("{:<12} {:>5} {:>8} {:>12} {:>10}".format(*BENCH_HEADER), file=out)
    for name, size, cases, ms, terms in bench_rows(g, args.max2j, args.budget):
        if writer:
            writer.writerow((name, size, cases, f"{ms:.3f}", terms))
        else:
            print(f"{name:<12} {size:>5} {cases:>8} {ms:>12.3f} {terms:>10}", file=out)
    return EXIT_OK


# entry point ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="loopgen", description="Exact multi-j symbols from loop generating functions.")
    sub = p.add_subparsers(dest="command", required=True)

    def graph_cmd(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("graph", help="graph file or built-in alias (@3j, @3j3j, @5j, @6j, @9j)")
        return sp

    graph_cmd("gf", "print the loop polynomial, the Q_j factors and set counts").set_defaults(func=cmd_gf)
    graph_cmd("count", "count non-overlapping loop and curve sets").set_defaults(func=cmd_count)

    sp = graph_cmd("symbol", "exact value of one symbol")
    sp.add_argument("numbers", nargs="*", metavar="name=2j[,2m]")
    sp.add_argument("--m", nargs="+", type=int, metavar="2m", help="doubled magnetic numbers in leg order")
    sp.add_argument("--cap", type=int, help="refuse exponents above this cap")
    sp.set_defaults(func=cmd_symbol)

    sp = graph_cmd("check", "exhaustive comparison against oracles, the exponential form and layer sums")
    sp.add_argument("--max2j", type=int, default=2)
    sp.add_argument("--budget", type=int, default=10**6, help="contraction terms per case")
    sp.set_defaults(func=cmd_check)

    sp = graph_cmd("glue", "glue two legs and verify the series-level gluing step")
    sp.add_argument("leg1")
    sp.add_argument("leg2")
    sp.add_argument("--name", help="name of the new internal line (default: leg1+leg2)")
    sp.add_argument("--cap", type=int, default=3, help="verification order")
    sp.set_defaults(func=cmd_glue)

    sp = graph_cmd("bench", "time the evaluators on all admissible assignments per size")
    sp.add_argument("--max2j", type=int, default=4)
    sp.add_argument("--budget", type=int, default=10**7, help="contraction terms per row")
    sp.add_argument("--csv", action="store_true", help="emit CSV")
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except GraphError as exc:
        print(f"loopgen: graph error: {exc}", file=sys.stderr)
    except (UsageError, AssignmentError, CapError) as exc:
        print(f"loopgen: {exc}", file=sys.stderr)
    except BudgetExceeded as exc:
        print(f"loopgen: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

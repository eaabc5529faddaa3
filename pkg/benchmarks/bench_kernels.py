"""Compare the compiled series kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 3] [--csv]

Each workload expands a generating function (the product form) with one backend,
checks that both backends give identical series, and reports the best wall time.
"""
from __future__ import annotations

import argparse
import csv
import sys
import time

from loopgen import kernels
from loopgen.graph import five_j, nine_j, six_j, three_j
from loopgen.symbols import expand_eq5, generating_function

WORKLOADS = [
    ("3j", three_j, 6),
    ("3j", three_j, 10),
    ("5j", five_j, 4),
    ("6j", six_j, 6),
    ("6j", six_j, 8),
    ("9j", nine_j, 3),
]


def best_of(fn, repeat: int):
    best, result = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best * 1000, result


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--csv", action="store_true")
    args = p.parse_args(argv)

    if not kernels.COMPILED_AVAILABLE:
        print("compiled kernels are not built; reinstall with Cython available", file=sys.stderr)
        return 1

    header = ("graph", "cap", "terms", "python_ms", "cython_ms", "speedup")
    writer = csv.writer(sys.stdout, lineterminator="\n") if args.csv else None
    if writer:
        writer.writerow(header)
    else:
        print("{:<6} {:>4} {:>8} {:>12} {:>12} {:>8}".format(*header))

    for name, make, cap in WORKLOADS:
        gf = generating_function(make())
        times = {}
        series = {}
        for backend in ("python", "cython"):
            with kernels.use_backend(backend):
                times[backend], series[backend] = best_of(lambda: expand_eq5(gf, cap), args.repeat)
        if series["python"] != series["cython"]:
            print(f"backends disagree on {name} cap {cap}", file=sys.stderr)
            return 2
        row = (name, cap, len(series["cython"]), times["python"], times["cython"], times["python"] / times["cython"])
        if writer:
            writer.writerow((*row[:3], f"{row[3]:.2f}", f"{row[4]:.2f}", f"{row[5]:.2f}"))
        else:
            print("{:<6} {:>4} {:>8} {:>12.2f} {:>12.2f} {:>7.2f}x".format(*row))
    return 0


if __name__ == "__main__":
    sys.exit(main())

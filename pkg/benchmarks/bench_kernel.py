"""Timing harness for the row_reduce kernel: pure Python vs compiled.

Both backends are imported side by side (independent of the import-time
selection in twkit.exactla), run on identical seeded inputs, and checked
for bit-identical output before any number is reported.  Run as

    python benchmarks/bench_kernel.py [--seed N] [--repeats N]
"""

import argparse
import random
import time
from fractions import Fraction

from twkit.exactla import _pure

try:
    from twkit.exactla import _speedups
except ImportError:
    _speedups = None


def random_matrix(rng, nrows, ncols, density, span=9):
    """Random Fraction matrix with roughly density*nrows*ncols nonzeros."""
    rows = []
    for _ in range(nrows):
        row = []
        for _ in range(ncols):
            if rng.random() < density:
                num = rng.choice([n for n in range(-span, span + 1) if n])
                row.append(Fraction(num, rng.randint(1, 4)))
            else:
                row.append(Fraction(0))
        rows.append(row)
    return rows


CASES = [
    # name, nrows, ncols, density
    ("small dense", 20, 20, 0.9),
    ("medium dense", 60, 60, 0.9),
    ("medium sparse", 80, 80, 0.15),
    ("wide", 40, 160, 0.3),
    ("tall", 160, 40, 0.3),
]


def best_of(fn, arg, repeats):
    best = None
    for _ in range(repeats):
        rows = [list(r) for r in arg]
        t0 = time.perf_counter()
        fn(rows)
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=20260814)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    if _speedups is None:
        print("compiled backend not built; timing pure backend only")

    rng = random.Random(args.seed)
    header = "%-14s %6s %8s  %10s  %10s  %7s" % (
        "case", "shape", "density", "pure", "compiled", "speedup")
    print(header)
    print("-" * len(header))
    for name, nr, nc, density in CASES:
        mat = random_matrix(rng, nr, nc, density)
        if _speedups is not None:
            got_pure = _pure.row_reduce([list(r) for r in mat])
            got_fast = _speedups.row_reduce([list(r) for r in mat])
            assert got_pure == got_fast, "backends disagree on %s" % name
        t_pure = best_of(_pure.row_reduce, mat, args.repeats)
        if _speedups is not None:
            t_fast = best_of(_speedups.row_reduce, mat, args.repeats)
            ratio = "%6.2fx" % (t_pure / t_fast)
            fast_s = "%8.2f ms" % (t_fast * 1e3)
        else:
            ratio = "-"
            fast_s = "-"
        print("%-14s %3dx%-3d %7.0f%%  %8.2f ms  %10s  %7s" % (
            name, nr, nc, density * 100, t_pure * 1e3, fast_s, ratio))


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Times the transfer-table kernels (compiled vs pure Python) on cycle nets.

The table holds (2**n - 1) * 2**n cells for an n-place cycle, so this is the
one genuinely hot loop in the package. Example:

    python3 benchmarks/bench_table.py --places 8 10 12
"""

from __future__ import annotations

import argparse
import time

import evinet._kernels_py as kernels_py

try:
    import evinet._speedups as speedups
except ImportError:
    speedups = None


def cycle_args(n: int):
    pre_place = list(range(n))
    post_place = [(i + 1) % n for i in range(n)]
    rmasks = list(range(1 << n))  # a cycle is conflict-free, all combinations admissible
    return n, pre_place, post_place, rmasks


def best_of(kernel, args, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        kernel.fill_rows(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--places", type=int, nargs="+", default=[8, 10, 12])
    parser.add_argument("--repeat", type=int, default=3)
    options = parser.parse_args()

    print(f"{'places':>6} {'cells':>12} {'python':>10} {'cython':>10} {'speedup':>8}")
    for n in options.places:
        args = cycle_args(n)
        cells = ((1 << n) - 1) * (1 << n)
        py_time = best_of(kernels_py, args, options.repeat)
        if speedups is None:
            print(f"{n:>6} {cells:>12} {py_time:>9.3f}s {'n/a':>10} {'n/a':>8}")
            continue
        cy_time = best_of(speedups, args, options.repeat)
        print(
            f"{n:>6} {cells:>12} {py_time:>9.3f}s {cy_time:>9.3f}s "
            f"{py_time / cy_time:>7.1f}x"
        )


if __name__ == "__main__":
    main()

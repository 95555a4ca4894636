#!/usr/bin/env python3
"""Benchmark the numba and numpy kernel backends against each other.

Usage: python benchmarks/bench_kernels.py [--repeats N]

Times the three hot kernels on sizes representative of a large release
(tens of thousands of pooled ownership values) and prints a side-by-side
table. The first numba call includes JIT compilation; a warmup run is done
outside the timed region so the table reflects steady-state cost.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from ownlens.stats import kernels


def _time(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        started = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - started)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    backends = {}
    for name in ("numba", "numpy"):
        try:
            module, resolved = kernels.select_backend(name)
        except Exception as exc:
            print(f"backend {name}: unavailable ({exc})")
            continue
        backends[resolved] = module
    if len(backends) < 2:
        print("only one backend available; nothing to compare")

    rng = np.random.default_rng(1234)
    rank_input = rng.integers(0, 5000, size=200_000).astype(np.float64)
    pool_x = rng.normal(size=4000)
    pool_y = rng.normal(size=4000)

    cases = {
        "average_ranks (n=200k, heavy ties)": lambda mod: mod.average_ranks(rank_input),
        "dominance_counts (4k x 4k pairs)": lambda mod: mod.dominance_counts(
            pool_x, pool_y
        ),
        "ranksum_tail_counts (N=20, k=10) x200": lambda mod: [
            mod.ranksum_tail_counts(20, 10, 120) for _ in range(200)
        ],
    }

    # warmup: triggers JIT compilation for numba and page-faults for numpy
    for module in backends.values():
        module.average_ranks(rank_input[:64])
        module.dominance_counts(pool_x[:64], pool_y[:64])
        module.ranksum_tail_counts(12, 6, 40)

    width = max(len(label) for label in cases)
    header = f"{'kernel'.ljust(width)}  " + "".join(
        f"{name:>12}" for name in backends
    )
    print(header)
    print("-" * len(header))
    for label, runner in cases.items():
        timings = []
        for name, module in backends.items():
            timings.append(_time(lambda: runner(module), args.repeats))
        row = f"{label.ljust(width)}  " + "".join(f"{t * 1000:>10.2f}ms" for t in timings)
        if len(timings) == 2 and min(timings) > 0:
            ratio = timings[1] / timings[0]
            row += f"   ({list(backends)[0]} is {ratio:.1f}x vs {list(backends)[1]})"
        print(row)


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Benchmark the compiled vs pure-Python match-loop kernels.

Runs the same seeded workloads on both backends (results are bit-identical;
only wall time differs) and prints a table.  Usage:

    python benchmarks/bench_backends.py [--steps 20000] [--repeat 3]
"""

import argparse
import time

import numpy as np

from teamelo import _kernels
from teamelo.micro import LineupMode, MicroConfig, run_micro
from teamelo.population import build_gaussian_population, build_setup_r1


def workloads(steps):
    gauss = build_gaussian_population(np.linspace(4, 10, 100), 2.0)
    rosters = build_setup_r1(100, seed=1)
    base = dict(gamma=0.02, nu=1.0, matches_per_step=25, realizations=1, seed=7)
    yield (
        "gaussian draw (N=100)",
        gauss,
        MicroConfig(n_steps=steps, lineup_mode=LineupMode.GAUSSIAN_DRAW, **base),
    )
    yield (
        "uniform 11-of-23 line-ups (N=100)",
        rosters,
        MicroConfig(n_steps=steps, **base),
    )
    yield (
        "strength-proportional line-ups (N=100)",
        rosters,
        MicroConfig(n_steps=steps, lineup_mode=LineupMode.STRENGTH_PROPORTIONAL, **base),
    )


def clock(pop, cfg, backend, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        run_micro(pop, cfg, backend=backend)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--steps", type=int, default=20_000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backends = _kernels.available_backends()
    if "cython" not in backends:
        print("compiled kernel not built; benchmarking python only")

    matches = args.steps * 25
    print(f"{matches:,} candidate matches per run, best of {args.repeat}\n")
    header = f"{'workload':42s} " + " ".join(f"{b:>10s}" for b in backends)
    print(header + ("    speedup" if len(backends) == 2 else ""))
    print("-" * len(header))
    for name, pop, cfg in workloads(args.steps):
        times = {b: clock(pop, cfg, b, args.repeat) for b in backends}
        row = f"{name:42s} " + " ".join(f"{times[b]:9.3f}s" for b in backends)
        if len(backends) == 2:
            row += f"    {times['python'] / times['cython']:6.1f}x"
        print(row)
        rates = {b: matches / times[b] / 1e6 for b in backends}
        print(" " * 42 + " " + " ".join(f"{rates[b]:8.2f}M/s" for b in backends))


if __name__ == "__main__":
    main()

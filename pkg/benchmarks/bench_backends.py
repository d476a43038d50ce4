#!/usr/bin/env python3
"""Benchmark: compiled jet kernel vs the pure-Python fallback.

Times batched value evaluation (the finite-difference oracle's workload) and
full order-3 jets on a few representative fields, then prints per-call times
and the speedup.  Both backends compute bit-identical results; only speed
differs.

Usage: python benchmarks/bench_backends.py [--n-values 20000] [--n-jets 500]
"""

import argparse
import time

import numpy as np

from curvhom import backends
from curvhom.field import parse_field

FIELDS = [
    ("canonical p=3", "0.5*(x1^2+x2^2+x3^2)+0.5*sin(x1)", 3),
    ("trig/exp p=3", "sin(x1)*cos(x2)+exp(0.3*x3)/(1+x1^2)", 3),
    ("canonical p=8",
     "0.5*(x1^2+x2^2+x3^2+x4^2+x5^2+x6^2+x7^2+x8^2)+0.5*sin(x1)", 8),
]


def bench(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--n-values", type=int, default=20000)
    parser.add_argument("--n-jets", type=int, default=500)
    args = parser.parse_args()

    lanes = backends.available_backends()
    if "compiled" not in lanes:
        print("note: compiled kernel not built; timing the pure lane only")

    rng = np.random.default_rng(0)
    header = f"{'field':16s} {'workload':22s}" + "".join(
        f" {lane + ' (us)':>14s}" for lane in lanes)
    if len(lanes) == 2:
        header += f" {'speedup':>9s}"
    print(header)
    print("-" * len(header))

    for label, source, p in FIELDS:
        fld = parse_field(source, p)
        xs = rng.uniform(-1.0, 1.0, (args.n_values, p))
        jet_points = rng.uniform(-1.0, 1.0, (args.n_jets, p))

        workloads = [
            (f"values x{args.n_values}",
             lambda lane: backends.eval_values(fld.program, xs, backend=lane),
             args.n_values),
            (f"jet3 x{args.n_jets}",
             lambda lane: [backends.eval_jet3(fld.program, x, backend=lane)
                           for x in jet_points],
             args.n_jets),
        ]
        for name, work, per in workloads:
            times = [bench(lambda lane=lane: work(lane)) for lane in lanes]
            row = f"{label:16s} {name:22s}" + "".join(
                f" {1e6 * t / per:14.2f}" for t in times)
            if len(times) == 2:
                row += f" {times[1] / times[0]:8.1f}x"
            print(row)


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Benchmark the shot-sampling kernels: compiled extension vs pure Python.

Usage: python benchmarks/bench_sampler.py [--shots N] [--repeat R]

Verifies the backends produce identical bytes before timing them, then
reports shots/second per backend and the speedup of the compiled kernel.
"""

import argparse
import time

from qduet import qcore, sampler


def time_backend(fn, seed, probs, shots, repeat):
    best = float("inf")
    for _ in range(repeat):
        started = time.perf_counter()
        fn(seed, *probs, shots)
        best = min(best, time.perf_counter() - started)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--shots", type=int, default=2_000_000)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--s", type=float, default=0.37, help="switch parameter")
    args = parser.parse_args()

    backends = sampler.available_backends()
    p0, p1, p2, _ = qcore.measure_probs(qcore.entanglement_switch_state(args.s))
    probs = (p0, p1, p2)
    seed = 42

    reference = None
    for name, fn in backends.items():
        check_n = min(args.shots, 200_000)
        result = fn(seed, *probs, check_n)
        if reference is None:
            reference = result
        elif result != reference:
            raise SystemExit(f"backend {name} disagrees with the reference output")

    print(f"sampling {args.shots:,} shots at s={args.s} (best of {args.repeat})")
    timings = {}
    for name, fn in backends.items():
        n = args.shots if name != "python" else min(args.shots, 2_000_000)
        elapsed = time_backend(fn, seed, probs, n, args.repeat)
        timings[name] = elapsed / n
        print(f"  {name:>8}: {n / elapsed:>14,.0f} shots/s  ({elapsed / n * 1e9:7.1f} ns/shot)")

    if "cython" in timings and "python" in timings:
        print(f"  speedup : {timings['python'] / timings['cython']:.1f}x")
    elif "cython" not in timings:
        print("  compiled kernel not available; build it with `pip install -e .`")


if __name__ == "__main__":
    main()

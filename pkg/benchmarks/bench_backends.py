#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Times the two hot loops on identical inputs and checks that both backends
produce bit-identical results while timing them:

  * orbit_fill: the pruned non-backtracking orbit walk (tally fills)
  * region_fill: lattice enumeration of a positive definite form's values

Usage:
    python benchmarks/bench_backends.py [--quick]
"""

import argparse
import time

from apollonian.backend import available_backends
from apollonian.tally import bit_vector, popcount

ROOT = (-1, 2, 2, 3)


def time_call(fn, *args, repeats=1):
    best = None
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn(*args)
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, result


def bench_orbit(backends, bound, repeats):
    rows = []
    reference = None
    for name, mod in backends.items():
        bits = bit_vector(bound)
        dt, emitted = time_call(
            lambda b=bits, m=mod: m.orbit_fill(*ROOT, 0, bound, 0, -1, b), repeats=repeats
        )
        if reference is None:
            reference = (popcount(bits), emitted)
        else:
            assert (popcount(bits), emitted) == reference, "backends disagree"
        rows.append((name, dt, emitted))
    return rows


def bench_region(backends, bound, repeats):
    # tangency form of the curvature-2 circle of the root packing: x^2+2xy+5y^2, shift 2
    rows = []
    reference = None
    for name, mod in backends.items():
        bits = bit_vector(bound)
        dt, visited = time_call(
            lambda b=bits, m=mod: m.region_fill(1, 2, 5, 2, bound, 1, 0, b), repeats=repeats
        )
        if reference is None:
            reference = (popcount(bits), visited)
        else:
            assert (popcount(bits), visited) == reference, "backends disagree"
        rows.append((name, dt, visited))
    return rows


def print_table(title, rows, unit_label):
    print(f"\n{title}")
    base = {name: dt for name, dt, _ in rows}.get("pure")
    for name, dt, work in rows:
        speedup = f"{base / dt:6.1f}x" if base and name != "pure" else "  1.0x"
        print(f"  {name:>9}: {dt * 1000:10.1f} ms  {speedup}  ({work} {unit_label})")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true", help="smaller bounds, single repeat")
    args = ap.parse_args()

    backends = available_backends()
    print("available backends:", ", ".join(backends))
    if "compiled" not in backends:
        print("note: compiled kernels not built; timing the fallback only")

    orbit_bounds = (10**5,) if args.quick else (10**5, 10**6)
    region_bounds = (10**6,) if args.quick else (10**6, 10**7)
    repeats = 1 if args.quick else 2

    for bound in orbit_bounds:
        rows = bench_orbit(backends, bound, repeats)
        print_table(f"orbit fill, X = {bound:.0e}", rows, "circles")
    for bound in region_bounds:
        rows = bench_region(backends, bound, repeats)
        print_table(f"region fill, X = {bound:.0e}", rows, "lattice points")


if __name__ == "__main__":
    main()

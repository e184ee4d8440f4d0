#!/usr/bin/env python3
"""Benchmark the compiled Monte Carlo kernel against the numpy fallback.

Runs the same simulations on both engines, checks the error counts agree,
and prints per-configuration timings.

Usage:  python benchmarks/bench_montecarlo.py [--bits N]
"""
import argparse
import time

from csocdma.codebook import build_cs
from csocdma.linkmodel import OperatingPoint, PhysicalParams
from csocdma.montecarlo import MonteCarloConfig, compiled_available, run_monte_carlo

CASES = [
    # (users, weight, received power W) at roughly BER 1e-3 .. 1e-4
    (15, 4, 9e-6),
    (30, 4, 1.75e-5),
    (60, 4, 3.5e-5),
    (120, 4, 7e-5),  # > 64 users exercises the multi-word bit path
]


def time_run(matrix, op, params, mc, engine):
    start = time.perf_counter()
    estimate = run_monte_carlo(matrix, op, params, mc, engine=engine)
    return time.perf_counter() - start, estimate


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--bits", type=int, default=1_000_000,
                        help="bit slots per configuration (default 1e6)")
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    params = PhysicalParams()
    engines = ["python"]
    if compiled_available():
        engines.insert(0, "compiled")
    else:
        print("note: compiled kernel not built; timing the fallback only\n")

    header = f"{'users':>6} {'bits':>9} " + "".join(f"{e + ' [s]':>14}" for e in engines)
    if len(engines) == 2:
        header += f"{'speedup':>10} {'errors':>9}"
    print(header)
    print("-" * len(header))

    for users, weight, power in CASES:
        matrix = build_cs(users, weight)
        op = OperatingPoint(users=users, weight=weight, received_power_w=power)
        mc = MonteCarloConfig(bits_per_user=args.bits, rng_seed=args.seed)
        timings = {}
        estimates = {}
        for engine in engines:
            timings[engine], estimates[engine] = time_run(matrix, op, params, mc, engine)
        line = f"{users:>6} {args.bits:>9} " + "".join(
            f"{timings[e]:>14.3f}" for e in engines)
        if len(engines) == 2:
            if estimates["compiled"].errors != estimates["python"].errors:
                raise SystemExit(
                    f"engine mismatch at {users} users: "
                    f"{estimates['compiled'].errors} vs {estimates['python'].errors}")
            line += f"{timings['python'] / timings['compiled']:>9.1f}x"
            line += f"{estimates['compiled'].errors:>9}"
        print(line)


if __name__ == "__main__":
    main()

"""Calibrate the optional-stopping demonstration.

Runs the fixed-n versus stop-on-target comparison over a block of seeds
disjoint from the ones the test suite uses, and prints the quantities the
regression bounds were frozen from: hit fraction, median errors of both
arms, their ratio, and the median stopping time among hits.

Usage: python3 scripts/calibrate_cheat.py [--first 10001] [--count 300]
"""

import argparse
import math
import statistics
import time

from buffonlab import FixedN, FloorSpec, NeedleSpec, TargetWindow, cheat_report


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--first", type=int, default=10001,
                        help="first seed of the calibration block")
    parser.add_argument("--count", type=int, default=300,
                        help="number of seeds")
    parser.add_argument("--workers", type=int, default=8)
    args = parser.parse_args()

    seeds = range(args.first, args.first + args.count)
    t0 = time.perf_counter()
    report = cheat_report(
        seeds,
        FixedN(200_000),
        TargetWindow(math.pi, 3e-6, 3000, 200_000),
        FloorSpec(6.0),
        NeedleSpec(5.0),
        workers=args.workers,
    )
    elapsed = time.perf_counter() - t0

    stop_ns = [o.cheat_stop_n for o in report.outcomes
               if o.cheat_reason == "target-hit"]
    print(f"seeds                {seeds.start}..{seeds.stop - 1}")
    print(f"hit fraction         {report.hit_fraction:.4f} "
          f"({report.hits}/{args.count})")
    print(f"median fixed error   {report.median_fixed_error:.6e}")
    print(f"median hit error     {report.median_hit_error:.6e}")
    print(f"error ratio          {report.error_ratio:.3e}")
    if stop_ns:
        print(f"median stop n        {statistics.median(stop_ns):.0f}")
    print(f"elapsed              {elapsed:.1f}s")

    # binomial sanity line for choosing a frozen lower bound on the fraction
    p = report.hit_fraction
    sigma = math.sqrt(p * (1.0 - p) / args.count)
    print(f"fraction - 4 sigma   {p - 4.0 * sigma:.4f}")


if __name__ == "__main__":
    main()

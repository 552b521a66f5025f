#!/usr/bin/env python3
"""RK4 step-size study for one particle orbit: max deviation from the
closed-form circle should shrink ~16x per dt halving until it reaches the
floating-point floor."""

import argparse
import math

from gerstner_fplane import (
    WaveParameters,
    compare_to_analytic,
    flow_map,
    trace,
    wave_speed,
)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--k", type=float, default=1.0)
    parser.add_argument("--depth", type=float, default=1.0, help="label depth below b0, in 1/k")
    parser.add_argument("--levels", type=int, default=5)
    parser.add_argument("--n0", type=int, default=125, help="coarsest steps per period")
    args = parser.parse_args()

    params = WaveParameters(k=args.k)
    period = 2.0 * math.pi / (params.k * wave_speed(params))
    b = params.b0 - args.depth / params.k
    radius = math.exp(params.k * b) / params.k
    x0, z0 = flow_map(0.0, (0.4, b), params)

    print(f"orbit radius {radius:.6f} m, period {period:.6f} s")
    print(f"{'steps':>7s} {'dt':>12s} {'max deviation':>15s} {'dev/radius':>12s} {'ratio':>7s}")
    previous = None
    for level in range(args.levels):
        n = args.n0 * 2**level
        trajectory = trace(0.0, x0, z0, params, dt=period / n, n_steps=n)
        deviation = compare_to_analytic(trajectory, params)
        ratio = f"{previous / deviation:7.2f}" if previous else "      -"
        print(f"{n:7d} {period/n:12.3e} {deviation:15.6e} {deviation/radius:12.3e} {ratio}")
        previous = deviation


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Step-halving study for every finite-difference residual: the measured
reduction factors should hug 4 for 2nd-order stencils."""

import argparse

from gerstner_fplane import WaveParameters, convergence_ratios


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--k", type=float, default=1.0)
    parser.add_argument("--h0", type=float, default=None, help="coarse step (default 2e-4/k)")
    parser.add_argument("--points", type=int, default=12)
    parser.add_argument("--seed", type=int, default=20)
    args = parser.parse_args()

    params = WaveParameters(k=args.k)
    ratios = convergence_ratios(params, h0=args.h0, n_points=args.points, seed=args.seed)
    print(f"{'residual':16s} {'min':>6s} {'mean':>6s} {'max':>6s}   per-point ratios")
    all_ok = True
    for name, values in ratios.items():
        ok = all(3.5 <= v <= 4.5 for v in values)
        all_ok &= ok
        print(
            f"{name:16s} {min(values):6.2f} {sum(values)/len(values):6.2f} "
            f"{max(values):6.2f}   {' '.join(f'{v:.2f}' for v in values)}"
            f"{'' if ok else '   <-- outside [3.5, 4.5]'}"
        )
    print("second-order convergence", "confirmed" if all_ok else "NOT confirmed")
    raise SystemExit(0 if all_ok else 1)


if __name__ == "__main__":
    main()

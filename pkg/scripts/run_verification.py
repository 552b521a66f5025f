#!/usr/bin/env python3
"""Run the full residual certification for the rotating wave and its
omega = 0 classical limit, printing one table per run."""

import argparse
import time

from gerstner_fplane import WaveParameters, run_full_verification, wave_speed


def show(params, label):
    start = time.perf_counter()
    report = run_full_verification(params)
    elapsed = time.perf_counter() - start
    print(f"\n=== {label}: k={params.k}, omega={params.omega}, c={wave_speed(params):.6f} ===")
    print(f"{'check':26s} {'scaled residual':>16s} {'tolerance':>10s}  result")
    for check in report.checks:
        scaled = check.max_abs_residual / check.residual_scale
        print(
            f"{check.name:26s} {scaled:16.3e} {check.tolerance:10.0e}  "
            f"{'pass' if check.passed else 'FAIL'}"
        )
    print(
        f"{report.n_volume_points} volume points, {report.n_surface_labels} surface "
        f"labels, fd step {report.fd_step:.2e}, {elapsed:.1f}s, "
        f"overall {'PASS' if report.overall_pass else 'FAIL'}"
    )
    return report.overall_pass


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--k", type=float, default=1.0)
    parser.add_argument("--omega", type=float, default=7.3e-5)
    args = parser.parse_args()

    ok = show(WaveParameters(k=args.k, omega=args.omega), "rotating")
    ok &= show(WaveParameters(k=args.k, omega=0.0), "classical limit")
    raise SystemExit(0 if ok else 1)


if __name__ == "__main__":
    main()

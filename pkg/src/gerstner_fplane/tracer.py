"""Particle paths through the reconstructed Eulerian velocity field.

A trajectory is integrated with classical fixed-step RK4, then summarized
by an algebraic circle fit and angle unwrapping.  For this flow the truth
is known exactly: each particle rides the circle of radius e^{kb}/k about
its label (a, b), clockwise, with angular speed kc, so the integration
error model (global error ~ dt^4) can be certified against the closed
form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fields import flow_map, wave_speed
from .inversion import InversionSettings, eulerian_velocity, invert_map
from .params import EulerianPoint, WaveParameters

TAU = 2.0 * math.pi


@dataclass(frozen=True)
class Trajectory:
    """Integrated particle path plus the inferred orbit geometry.

    samples holds rows (t, x, z), strictly increasing in t.  The center,
    radius and period come from a least-squares circle fit and unwrapped
    polar angles about it; clockwise means the unwrapped angle decreases
    monotonically.
    """

    initial: EulerianPoint
    dt: float
    samples: np.ndarray
    inferred_center: tuple[float, float]
    inferred_radius: float
    inferred_period: float
    clockwise: bool


def fit_circle(xs: np.ndarray, zs: np.ndarray) -> tuple[float, float, float]:
    """Algebraic least-squares circle fit (solves the linear system for
    x^2 + z^2 = 2 cx x + 2 cz z + r^2 - cx^2 - cz^2).  Deterministic and
    exact for points on a true circle."""
    A = np.column_stack([xs, zs, np.ones_like(xs)])
    rhs = xs * xs + zs * zs
    coef, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    cx, cz = 0.5 * coef[0], 0.5 * coef[1]
    radius = math.sqrt(max(coef[2] + cx * cx + cz * cz, 0.0))
    return float(cx), float(cz), radius


def trace(
    t0: float,
    x0: float,
    z0: float,
    params: WaveParameters,
    dt: float | None = None,
    n_steps: int | None = None,
    settings: InversionSettings | None = None,
) -> Trajectory:
    """RK4-integrate dx/dt = u(t, x, z), dz/dt = w(t, x, z) from (x0, z0).

    Defaults integrate exactly one orbital period in 2000 steps.  dt must
    resolve the orbit (dt <= T/100).  A particle that escapes the fluid,
    which cannot happen for interior starts, surfaces as the domain error
    of the underlying field evaluation.
    """
    c = wave_speed(params)
    period = TAU / (params.k * c)
    if dt is None and n_steps is None:
        dt, n_steps = period / 2000.0, 2000
    elif dt is None:
        dt = period / n_steps
    elif n_steps is None:
        n_steps = int(round(period / dt))
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if dt > 0.01 * period:
        raise ValueError(f"dt={dt} too coarse: need dt <= 0.01 * period = {0.01 * period}")
    if n_steps < 1:
        raise ValueError(f"n_steps must be >= 1, got {n_steps}")

    rows = np.empty((n_steps + 1, 3))
    rows[0] = (t0, x0, z0)
    x, z = x0, z0
    for i in range(n_steps):
        t = t0 + i * dt
        k1x, k1z = eulerian_velocity(t, x, z, params, settings)
        k2x, k2z = eulerian_velocity(t + dt / 2, x + dt / 2 * k1x, z + dt / 2 * k1z, params, settings)
        k3x, k3z = eulerian_velocity(t + dt / 2, x + dt / 2 * k2x, z + dt / 2 * k2z, params, settings)
        k4x, k4z = eulerian_velocity(t + dt, x + dt * k3x, z + dt * k3z, params, settings)
        x += dt / 6 * (k1x + 2 * k2x + 2 * k3x + k4x)
        z += dt / 6 * (k1z + 2 * k2z + 2 * k3z + k4z)
        rows[i + 1] = (t0 + (i + 1) * dt, x, z)

    cx, cz, radius = fit_circle(rows[:, 1], rows[:, 2])
    angles = np.unwrap(np.arctan2(rows[:, 2] - cz, rows[:, 1] - cx))
    increments = np.diff(angles)
    clockwise = bool(np.all(increments < 0))
    swept = angles[-1] - angles[0]
    if swept != 0.0:
        inferred_period = float(-TAU * (rows[-1, 0] - rows[0, 0]) / swept)
    else:
        inferred_period = math.inf
    return Trajectory(
        initial=EulerianPoint(t0, x0, z0),
        dt=dt,
        samples=rows,
        inferred_center=(cx, cz),
        inferred_radius=radius,
        inferred_period=inferred_period,
        clockwise=clockwise,
    )


def compare_to_analytic(
    trajectory: Trajectory,
    params: WaveParameters,
    settings: InversionSettings | None = None,
) -> float:
    """Max pointwise distance between the integrated samples and the
    closed-form orbit of the particle that started the trajectory."""
    p = trajectory.initial
    label = invert_map(p.t, p.x, p.z, params, settings)
    worst = 0.0
    for t, x, z in trajectory.samples:
        X, Z = flow_map(t, label, params)
        worst = max(worst, math.hypot(X - x, Z - z))
    return worst

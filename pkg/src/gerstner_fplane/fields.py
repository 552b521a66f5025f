"""Closed-form Lagrangian fields of the rotating Gerstner wave.

The particle labelled (a, b) moves on the circle

    x(t, a, b) = a - (e^{kb}/k) sin(ka - kct)
    z(t, a, b) = b + (e^{kb}/k) cos(ka - kct)

of radius e^{kb}/k about (a, b), clockwise with angular speed kc.  The
wave speed c is the positive root of the dispersion quadratic
k c^2 + 2 omega c - g = 0.  All functions here are pure; the phase
ka - kct is reduced modulo 2*pi before trigonometric evaluation so large
times do not degrade accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import LagrangianLabel, WaveParameters

TAU = 2.0 * math.pi


class SurfaceSingularityError(ValueError):
    """Raised where a formula degenerates at the b = 0 label line (the
    inverse Jacobian prefactor and the vorticity denominator both vanish
    there)."""


def _ab(label) -> tuple[float, float]:
    """Accept a LagrangianLabel or a plain (a, b) pair."""
    if isinstance(label, LagrangianLabel):
        return label.a, label.b
    a, b = label
    return float(a), float(b)


def wave_speed(params: WaveParameters) -> float:
    """Wave speed c = (sqrt(omega^2 + k g) - omega) / k, the positive root
    of k c^2 + 2 omega c - g = 0.  With omega = 0 this is sqrt(g/k)."""
    k, omega, g = params.k, params.omega, params.g
    return (math.sqrt(omega * omega + k * g) - omega) / k


def dispersion_residual(params: WaveParameters) -> float:
    """|k c^2 + 2 omega c - g| for the computed speed; zero in exact
    arithmetic, O(eps * g) in floats."""
    c = wave_speed(params)
    return abs(params.k * c * c + 2.0 * params.omega * c - params.g)


def phase(t: float, a: float, params: WaveParameters) -> float:
    """Wave phase ka - kct reduced to [-pi, pi]."""
    c = wave_speed(params)
    return math.remainder(params.k * a - params.k * c * t, TAU)


def flow_map(t: float, label, params: WaveParameters) -> tuple[float, float]:
    """Particle position (x, z) at time t."""
    a, b = _ab(label)
    k = params.k
    E = math.exp(k * b)
    th = phase(t, a, params)
    return a - E / k * math.sin(th), b + E / k * math.cos(th)


def flow_velocity(t: float, label, params: WaveParameters) -> tuple[float, float]:
    """Particle velocity (x_t, z_t) = c e^{kb} (cos th, sin th)."""
    a, b = _ab(label)
    c = wave_speed(params)
    E = math.exp(params.k * b)
    th = phase(t, a, params)
    return c * E * math.cos(th), c * E * math.sin(th)


def flow_acceleration(t: float, label, params: WaveParameters) -> tuple[float, float]:
    """Particle acceleration (x_tt, z_tt) = k c^2 e^{kb} (sin th, -cos th)."""
    a, b = _ab(label)
    c = wave_speed(params)
    k = params.k
    E = math.exp(k * b)
    th = phase(t, a, params)
    return k * c * c * E * math.sin(th), -k * c * c * E * math.cos(th)


def jacobian(t: float, label, params: WaveParameters) -> np.ndarray:
    """Jacobian of the label-to-position map,

        [[x_a, x_b], [z_a, z_b]] =
        [[1 - e^{kb} cos th, -e^{kb} sin th],
         [-e^{kb} sin th,     1 + e^{kb} cos th]]

    with determinant 1 - e^{2kb}."""
    a, b = _ab(label)
    E = math.exp(params.k * b)
    th = phase(t, a, params)
    Ec, Es = E * math.cos(th), E * math.sin(th)
    return np.array([[1.0 - Ec, -Es], [-Es, 1.0 + Ec]])


def inverse_jacobian(t: float, label, params: WaveParameters) -> np.ndarray:
    """Closed-form inverse of :func:`jacobian`,

        1/(1 - e^{2kb}) * [[1 + e^{kb} cos th, e^{kb} sin th],
                           [e^{kb} sin th,     1 - e^{kb} cos th]].

    Requires b < 0: the prefactor blows up on the b = 0 line."""
    a, b = _ab(label)
    if b >= 0:
        raise SurfaceSingularityError(
            f"inverse Jacobian requires b < 0 (prefactor 1/(1 - e^{{2kb}}) "
            f"is singular at b = 0); got b={b}"
        )
    E = math.exp(params.k * b)
    th = phase(t, a, params)
    Ec, Es = E * math.cos(th), E * math.sin(th)
    det = 1.0 - E * E
    return np.array([[1.0 + Ec, Es], [Es, 1.0 - Ec]]) / det


def pressure_lagrangian(b: float, params: WaveParameters) -> float:
    """Pressure carried by the particle at depth label b,

        P = P0 + rho (k c^2 + 2 omega c)/(2k) (e^{2kb} - e^{2k b0})
               - rho g (b - b0).

    Depends on b only; by the dispersion quadratic the bracket
    k c^2 + 2 omega c equals g, which makes P = P0 on b = b0 the only
    surface value compatible with a constant atmospheric pressure."""
    c = wave_speed(params)
    k, rho, g = params.k, params.rho, params.g
    bracket = k * c * c + 2.0 * params.omega * c
    return (
        params.p0
        + rho * bracket / (2.0 * k) * (math.exp(2.0 * k * b) - math.exp(2.0 * k * params.b0))
        - rho * g * (b - params.b0)
    )


def vorticity(b: float, params: WaveParameters) -> float:
    """Flow vorticity gamma = u_z - w_x = -2 k c e^{2kb} / (1 - e^{2kb}).

    Negative for every b < 0, strictly decreasing in b, and vanishing as
    b -> -inf.  Singular on the b = 0 line."""
    if b >= 0:
        raise SurfaceSingularityError(
            f"vorticity requires b < 0 (denominator 1 - e^{{2kb}} vanishes "
            f"at b = 0); got b={b}"
        )
    c = wave_speed(params)
    E2 = math.exp(2.0 * params.k * b)
    return -2.0 * params.k * c * E2 / (1.0 - E2)


@dataclass(frozen=True)
class FlowKinematics:
    """Everything the closed form says about one particle at one time."""

    position: tuple[float, float]
    velocity: tuple[float, float]
    acceleration: tuple[float, float]
    jacobian: np.ndarray
    inverse_jacobian: np.ndarray


def kinematics(t: float, label, params: WaveParameters) -> FlowKinematics:
    """Bundle position, velocity, acceleration and both Jacobians at a
    label.  Requires b < 0 (the inverse Jacobian must exist)."""
    return FlowKinematics(
        position=flow_map(t, label, params),
        velocity=flow_velocity(t, label, params),
        acceleration=flow_acceleration(t, label, params),
        jacobian=jacobian(t, label, params),
        inverse_jacobian=inverse_jacobian(t, label, params),
    )

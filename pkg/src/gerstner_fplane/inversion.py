"""Numerical inversion of the label-to-position map.

The map (a, b) -> (x, z) is a diffeomorphism from the label half-plane
b <= b0 onto the fluid region below the free surface, so Eulerian fields
are obtained by inverting it pointwise.  Two solvers do all the work:

* a scalar solve of x = a - (e^{kb}/k) sin(ka - kct) in a, which is
  strictly monotone for b < 0 (derivative x_a = 1 - e^{kb} cos >= 1 - e^{kb})
  and brackets its root in [x - e^{kb}/k, x + e^{kb}/k];
* a damped 2-D Newton iteration using the closed-form inverse Jacobian,
  warm-started by the scalar solve and with iterates kept inside the label
  half-plane.

Plain Newton started at (a, b) = (x, z) can stall for points just under
the surface by chasing a phantom root with b > b0, hence the warm start.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fields import flow_velocity, pressure_lagrangian, wave_speed
from .params import LagrangianLabel, WaveParameters

TAU = 2.0 * math.pi

#: Points up to this far above the free surface still invert; verification
#: sampling needs points arbitrarily close to (and exactly on) the surface.
DOMAIN_ACCEPT_TOL = 1e-9

_EPS = math.ulp(1.0)


class NotInDomainError(ValueError):
    """The requested point lies above the free surface."""


class ConvergenceError(RuntimeError):
    """An iterative solve failed; carries the last residual seen."""

    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(f"{message} (residual {residual:.3e} after {iterations} iterations)")
        self.residual = residual
        self.iterations = iterations


@dataclass(frozen=True)
class InversionSettings:
    """Knobs of the inversion solvers.

    tolerance          : position-residual bound in meters (floored at a
                         few ulps of the coordinates internally)
    max_iterations     : Newton iteration cap
    bisection_fallback : fall back to bisection in the scalar solve when
                         the derivative degenerates (cycloid cusps, b0 = 0)
    """

    tolerance: float = 1e-12
    max_iterations: int = 50
    bisection_fallback: bool = True

    def __post_init__(self):
        if not (self.tolerance > 0):
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")


DEFAULT_SETTINGS = InversionSettings()


@dataclass(frozen=True)
class InversionResult:
    """Label found by :func:`newton_invert` plus solver diagnostics."""

    a: float
    b: float
    iterations: int
    residual: float

    def as_label(self) -> LagrangianLabel:
        return LagrangianLabel(self.a, self.b)


def _solve_horizontal(
    t: float,
    x: float,
    b_fix: float,
    params: WaveParameters,
    settings: InversionSettings,
) -> float:
    """Solve x = a - (e^{k b_fix}/k) sin(ka - kct) for a.

    Newton with the root bracketed; any step leaving the bracket is
    replaced by its midpoint.  Near-cusp derivatives (|x_a| < 1e-8, only
    reachable for b0 ~ 0) divert to pure bisection when enabled.
    """
    k = params.k
    c = wave_speed(params)
    E = math.exp(k * b_fix)
    tol = max(settings.tolerance, 8.0 * _EPS * max(1.0, abs(x)))
    lo, hi = x - E / k, x + E / k
    a = x
    F = dF = 0.0
    for _ in range(settings.max_iterations):
        th = math.remainder(k * a - k * c * t, TAU)
        F = a - E / k * math.sin(th) - x
        if abs(F) <= tol:
            return a
        dF = 1.0 - E * math.cos(th)
        if dF < 1e-8:
            break
        if F > 0.0:
            hi = a
        else:
            lo = a
        step = a - F / dF
        a = step if lo < step < hi else 0.5 * (lo + hi)
    if dF < 1e-8 and not settings.bisection_fallback:
        raise ConvergenceError(
            "horizontal solve hit a degenerate derivative with bisection disabled",
            abs(F),
            settings.max_iterations,
        )
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        F = mid - E / k * math.sin(math.remainder(k * mid - k * c * t, TAU)) - x
        if abs(F) <= tol or (hi - lo) <= 4.0 * _EPS * max(1.0, abs(x)):
            return mid
        if F > 0.0:
            hi = mid
        else:
            lo = mid
    raise ConvergenceError("horizontal bisection failed to close the bracket", abs(F), 200)


def newton_invert(
    t: float,
    x: float,
    z: float,
    params: WaveParameters,
    settings: InversionSettings | None = None,
) -> InversionResult:
    """Invert the flow map at (t, x, z) without a domain pre-check.

    Warm start: b at min(z, just under b0), a from the scalar horizontal
    solve at that depth.  Newton steps use the closed-form inverse
    Jacobian, are halved while the residual grows, and keep b capped
    inside the label half-plane.
    """
    settings = settings or DEFAULT_SETTINGS
    k, b0 = params.k, params.b0
    c = wave_speed(params)
    tol = max(settings.tolerance, 8.0 * _EPS * max(1.0, abs(x), abs(z)))
    # Cap just above b0 so exact-surface points (and the DOMAIN_ACCEPT_TOL
    # band above the surface) converge, while staying clear of b = 0.
    b_cap = min(b0 + 1e-7 / k, -1e-9 / k)

    b = min(z, b_cap)
    a = _solve_horizontal(t, x, b, params, settings)
    rn = math.inf
    for iteration in range(settings.max_iterations):
        E = math.exp(k * b)
        th = math.remainder(k * a - k * c * t, TAU)
        rx = a - E / k * math.sin(th) - x
        rz = b + E / k * math.cos(th) - z
        rn = math.hypot(rx, rz)
        if rn <= tol:
            return InversionResult(a, b, iteration, rn)
        Ec, Es = E * math.cos(th), E * math.sin(th)
        det = 1.0 - E * E
        da = ((1.0 + Ec) * rx + Es * rz) / det
        db = (Es * rx + (1.0 - Ec) * rz) / det
        lam = 1.0
        improved = False
        for _ in range(10):
            a_new = a - lam * da
            b_new = min(b - lam * db, b_cap)
            E_new = math.exp(k * b_new)
            th_new = math.remainder(k * a_new - k * c * t, TAU)
            rx_new = a_new - E_new / k * math.sin(th_new) - x
            rz_new = b_new + E_new / k * math.cos(th_new) - z
            if math.hypot(rx_new, rz_new) < rn:
                improved = True
                break
            lam *= 0.5
        if not improved:
            raise ConvergenceError(
                "Newton inversion stalled (point may lie outside the fluid)",
                rn,
                iteration,
            )
        a, b = a_new, b_new
    raise ConvergenceError("Newton inversion did not converge", rn, settings.max_iterations)


def invert_map(
    t: float,
    x: float,
    z: float,
    params: WaveParameters,
    settings: InversionSettings | None = None,
) -> LagrangianLabel:
    """Label (a, b) whose particle sits at (x, z) at time t.

    Raises NotInDomainError for points above the surface (beyond the
    DOMAIN_ACCEPT_TOL band) and ConvergenceError if Newton fails.
    """
    settings = settings or DEFAULT_SETTINGS
    if z > surface_elevation(t, x, params, settings) + DOMAIN_ACCEPT_TOL:
        raise NotInDomainError(
            f"point (x={x}, z={z}) lies above the free surface at t={t}"
        )
    return newton_invert(t, x, z, params, settings).as_label()


def surface_elevation(
    t: float,
    x: float,
    params: WaveParameters,
    settings: InversionSettings | None = None,
) -> float:
    """Free-surface elevation eta(t, x).

    The surface is the image of the b = b0 label line, so eta is found by
    solving the horizontal equation at b = b0 and evaluating the vertical
    component there.  eta travels undistorted: eta(t, x) = eta(0, x - ct).
    """
    settings = settings or DEFAULT_SETTINGS
    a = _solve_horizontal(t, x, params.b0, params, settings)
    k, b0 = params.k, params.b0
    c = wave_speed(params)
    th = math.remainder(k * a - k * c * t, TAU)
    return b0 + math.exp(k * b0) / k * math.cos(th)


def in_domain(
    t: float,
    x: float,
    z: float,
    params: WaveParameters,
    settings: InversionSettings | None = None,
) -> bool:
    """True iff (x, z) lies strictly below the free surface at time t."""
    return z < surface_elevation(t, x, params, settings)


def eulerian_velocity(
    t: float,
    x: float,
    z: float,
    params: WaveParameters,
    settings: InversionSettings | None = None,
) -> tuple[float, float]:
    """Velocity field (u, w) at a fixed point: the particle velocity of
    whichever particle currently occupies (x, z).  Decays like e^{kz}
    with depth."""
    label = invert_map(t, x, z, params, settings)
    return flow_velocity(t, label, params)


def eulerian_pressure(
    t: float,
    x: float,
    z: float,
    params: WaveParameters,
    settings: InversionSettings | None = None,
) -> float:
    """Pressure at a fixed point; equals p0 exactly on the surface and
    tends to the hydrostatic profile at depth."""
    label = invert_map(t, x, z, params, settings)
    return pressure_lagrangian(label.b, params)


@dataclass(frozen=True)
class SurfaceProfile:
    """Sampled wave profile over one spatial period.

    samples is an (n, 2) array of (x, eta(x)) pairs on [0, 2*pi/k); kind
    is "cycloid" for b0 = 0 (cusped at the crests) and "trochoid" for
    b0 < 0 (real-analytic).
    """

    wavenumber: float
    samples: np.ndarray
    kind: str


def surface_profile(
    t: float,
    params: WaveParameters,
    n_samples: int = 256,
    settings: InversionSettings | None = None,
) -> SurfaceProfile:
    """Sample eta(t, x) at n_samples equispaced x over one wavelength."""
    if n_samples < 2:
        raise ValueError(f"n_samples must be >= 2, got {n_samples}")
    wavelength = params.wavelength
    xs = np.arange(n_samples) * (wavelength / n_samples)
    etas = np.array([surface_elevation(t, float(x), params, settings) for x in xs])
    kind = "cycloid" if params.b0 == 0.0 else "trochoid"
    return SurfaceProfile(params.k, np.column_stack([xs, etas]), kind)

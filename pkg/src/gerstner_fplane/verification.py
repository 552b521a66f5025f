"""Independent certification that the closed-form flow solves the
free-boundary system.

Every residual here is assembled from *Eulerian field evaluations only*
(velocity and pressure obtained through coordinate inversion), with all
derivatives taken by 2nd-order central differences.  The closed-form
derivative formulas never enter a stencil; they appear only as
cross-check targets.  Residuals are reported against named physical
scales so the tolerances are dimensionless:

    momentum, material acceleration : k c^2 e^{kb}
    divergence, vorticity           : c k e^{kb}
    kinematic boundary condition    : c
    dynamic boundary condition      : p0
    deep decay                      : ratio to the bound c e^{k z + e^{k b0}}
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace

import numpy as np

from .fields import (
    SurfaceSingularityError,
    flow_acceleration,
    flow_map,
    flow_velocity,
    jacobian,
    phase,
    vorticity,
    wave_speed,
)
from .inversion import (
    DEFAULT_SETTINGS,
    ConvergenceError,
    InversionSettings,
    NotInDomainError,
    eulerian_pressure,
    eulerian_velocity,
    invert_map,
    surface_elevation,
)
from .params import WaveParameters

TAU = 2.0 * math.pi

#: Dimensionless pass thresholds per check: h^2 truncation estimates for
#: the default step, with an order-of-magnitude safety factor.
DEFAULT_TOLERANCES = {
    "momentum": 1e-5,
    "material_acceleration": 1e-5,
    "divergence": 1e-5,
    "vorticity": 1e-4,
    "kinematic_bc": 1e-5,
    "kinematic_bc_identity": 1e-12,
    "dynamic_bc": 1e-9,
    "decay": 1.0,
}


class StencilOutsideDomainError(RuntimeError):
    """A finite-difference stencil point left the fluid; shrink h or move
    the sample point."""


def default_fd_step(params: WaveParameters) -> float:
    """Default spatial step h = 1e-5 / k; time differences use h / c.

    Small enough that even the sampling rows hugging the free surface stay
    truncation-dominated under the tolerance ledger, large enough that
    inversion and rounding noise sit several orders below truncation.
    """
    return 1e-5 / params.k


def _time_step(h: float, params: WaveParameters) -> float:
    return h / wave_speed(params)


def momentum_residual(
    t: float,
    x: float,
    z: float,
    params: WaveParameters,
    h: float | None = None,
    settings: InversionSettings | None = None,
) -> tuple[float, float]:
    """Residuals of the two momentum equations at a fixed interior point:

        r_x = u_t + u u_x + w u_z + 2 omega w + P_x / rho
        r_z = w_t + u w_x + w w_z - 2 omega u + P_z / rho + g

    with every derivative a central difference of the Eulerian fields.
    The whole stencil (x +- h, z +- h, t +- h/c) must lie in the fluid.
    """
    if h is None:
        h = default_fd_step(params)
    ht = _time_step(h, params)
    omega, rho, g = params.omega, params.rho, params.g
    try:
        u0, w0 = eulerian_velocity(t, x, z, params, settings)
        uxp, wxp = eulerian_velocity(t, x + h, z, params, settings)
        uxm, wxm = eulerian_velocity(t, x - h, z, params, settings)
        uzp, wzp = eulerian_velocity(t, x, z + h, params, settings)
        uzm, wzm = eulerian_velocity(t, x, z - h, params, settings)
        utp, wtp = eulerian_velocity(t + ht, x, z, params, settings)
        utm, wtm = eulerian_velocity(t - ht, x, z, params, settings)
        pxp = eulerian_pressure(t, x + h, z, params, settings)
        pxm = eulerian_pressure(t, x - h, z, params, settings)
        pzp = eulerian_pressure(t, x, z + h, params, settings)
        pzm = eulerian_pressure(t, x, z - h, params, settings)
    except NotInDomainError as exc:
        raise StencilOutsideDomainError(
            f"momentum stencil at (t={t}, x={x}, z={z}, h={h}) left the fluid"
        ) from exc
    u_t, w_t = (utp - utm) / (2 * ht), (wtp - wtm) / (2 * ht)
    u_x, w_x = (uxp - uxm) / (2 * h), (wxp - wxm) / (2 * h)
    u_z, w_z = (uzp - uzm) / (2 * h), (wzp - wzm) / (2 * h)
    p_x, p_z = (pxp - pxm) / (2 * h), (pzp - pzm) / (2 * h)
    r_x = u_t + u0 * u_x + w0 * u_z + 2 * omega * w0 + p_x / rho
    r_z = w_t + u0 * w_x + w0 * w_z - 2 * omega * u0 + p_z / rho + g
    return r_x, r_z


def material_derivative_residual(
    t: float,
    x: float,
    z: float,
    params: WaveParameters,
    h: float | None = None,
    settings: InversionSettings | None = None,
) -> tuple[float, float]:
    """Cross-check that the finite-difference material derivative of the
    Eulerian velocity equals the closed-form particle acceleration at the
    inverted label (the chain-rule identity behind the momentum balance)."""
    if h is None:
        h = default_fd_step(params)
    ht = _time_step(h, params)
    try:
        u0, w0 = eulerian_velocity(t, x, z, params, settings)
        uxp, wxp = eulerian_velocity(t, x + h, z, params, settings)
        uxm, wxm = eulerian_velocity(t, x - h, z, params, settings)
        uzp, wzp = eulerian_velocity(t, x, z + h, params, settings)
        uzm, wzm = eulerian_velocity(t, x, z - h, params, settings)
        utp, wtp = eulerian_velocity(t + ht, x, z, params, settings)
        utm, wtm = eulerian_velocity(t - ht, x, z, params, settings)
        label = invert_map(t, x, z, params, settings)
    except NotInDomainError as exc:
        raise StencilOutsideDomainError(
            f"material-derivative stencil at (t={t}, x={x}, z={z}, h={h}) left the fluid"
        ) from exc
    acc_x, acc_z = flow_acceleration(t, label, params)
    du = (utp - utm) / (2 * ht) + u0 * (uxp - uxm) / (2 * h) + w0 * (uzp - uzm) / (2 * h)
    dw = (wtp - wtm) / (2 * ht) + u0 * (wxp - wxm) / (2 * h) + w0 * (wzp - wzm) / (2 * h)
    return du - acc_x, dw - acc_z


def divergence_residual(
    t: float,
    x: float,
    z: float,
    params: WaveParameters,
    h: float | None = None,
    settings: InversionSettings | None = None,
) -> float:
    """u_x + w_z by central differences; zero for incompressible flow."""
    if h is None:
        h = default_fd_step(params)
    try:
        uxp, _ = eulerian_velocity(t, x + h, z, params, settings)
        uxm, _ = eulerian_velocity(t, x - h, z, params, settings)
        _, wzp = eulerian_velocity(t, x, z + h, params, settings)
        _, wzm = eulerian_velocity(t, x, z - h, params, settings)
    except NotInDomainError as exc:
        raise StencilOutsideDomainError(
            f"divergence stencil at (t={t}, x={x}, z={z}, h={h}) left the fluid"
        ) from exc
    return (uxp - uxm) / (2 * h) + (wzp - wzm) / (2 * h)


def vorticity_residual(
    t: float,
    x: float,
    z: float,
    params: WaveParameters,
    h: float | None = None,
    settings: InversionSettings | None = None,
) -> float:
    """(u_z - w_x) by central differences minus the closed-form vorticity
    at the inverted label depth."""
    if h is None:
        h = default_fd_step(params)
    try:
        uzp, _ = eulerian_velocity(t, x, z + h, params, settings)
        uzm, _ = eulerian_velocity(t, x, z - h, params, settings)
        _, wxp = eulerian_velocity(t, x + h, z, params, settings)
        _, wxm = eulerian_velocity(t, x - h, z, params, settings)
        label = invert_map(t, x, z, params, settings)
    except NotInDomainError as exc:
        raise StencilOutsideDomainError(
            f"vorticity stencil at (t={t}, x={x}, z={z}, h={h}) left the fluid"
        ) from exc
    fd = (uzp - uzm) / (2 * h) - (wxp - wxm) / (2 * h)
    return fd - vorticity(label.b, params)


def kinematic_bc_residual(
    t: float,
    a_surface: float,
    params: WaveParameters,
    h: float | None = None,
    settings: InversionSettings | None = None,
) -> float:
    """w - eta_t - u eta_x at the surface particle labelled (a_surface, b0).

    eta derivatives come from central differences of the surface solve;
    (u, w) are taken one-sided from the closed form at b = b0 since no
    fluid exists above the surface.
    """
    if h is None:
        h = default_fd_step(params)
    ht = _time_step(h, params)
    b0 = params.b0
    _require_noncusp(t, a_surface, params)
    X, _ = flow_map(t, (a_surface, b0), params)
    u, w = flow_velocity(t, (a_surface, b0), params)
    eta_x = (
        surface_elevation(t, X + h, params, settings)
        - surface_elevation(t, X - h, params, settings)
    ) / (2 * h)
    eta_t = (
        surface_elevation(t + ht, X, params, settings)
        - surface_elevation(t - ht, X, params, settings)
    ) / (2 * ht)
    return w - eta_t - u * eta_x


def kinematic_bc_identity_residual(
    t: float, a_surface: float, params: WaveParameters
) -> float:
    """Closed-form variant of the surface condition, w - (u - c) eta_x,
    with the analytic slope eta_x = z_a / x_a.  Identically zero; the
    float result is machine noise."""
    _require_noncusp(t, a_surface, params)
    c = wave_speed(params)
    u, w = flow_velocity(t, (a_surface, params.b0), params)
    J = jacobian(t, (a_surface, params.b0), params)
    eta_x = J[1, 0] / J[0, 0]
    return w - (u - c) * eta_x


def _require_noncusp(t: float, a_surface: float, params: WaveParameters) -> None:
    x_a = 1.0 - math.exp(params.k * params.b0) * math.cos(phase(t, a_surface, params))
    if abs(x_a) < 1e-8:
        raise SurfaceSingularityError(
            f"surface label a={a_surface} sits at a cusp (x_a={x_a:.2e})"
        )


def dynamic_bc_residual(
    t: float,
    a_surface: float,
    params: WaveParameters,
    settings: InversionSettings | None = None,
) -> float:
    """Pressure excess over atmospheric at the surface particle: the
    Eulerian pressure, recovered by inversion at the mapped surface point,
    minus p0."""
    X, Z = flow_map(t, (a_surface, params.b0), params)
    return eulerian_pressure(t, X, Z, params, settings) - params.p0


def decay_check(
    t: float,
    x_column: float,
    params: WaveParameters,
    depths=None,
    settings: InversionSettings | None = None,
) -> np.ndarray:
    """Velocity magnitudes down a column of depths below the surface.

    Asserts the exponential bound |(u, w)| <= c e^{k z + e^{k b0}} and
    strict monotone decay with depth, then returns the magnitudes.
    """
    k, b0 = params.k, params.b0
    c = wave_speed(params)
    if depths is None:
        depths = [b0 - d / k for d in range(4, 11)]
    depths = list(depths)
    if not all(d2 < d1 for d1, d2 in zip(depths, depths[1:])):
        raise ValueError("depths must be strictly decreasing")
    if depths[0] > b0:
        raise ValueError(f"depths must start at or below b0={b0}")
    mags = []
    for z in depths:
        u, w = eulerian_velocity(t, x_column, z, params, settings)
        mag = math.hypot(u, w)
        bound = c * math.exp(k * z + math.exp(k * b0))
        assert mag <= bound * (1.0 + 1e-12), (
            f"velocity magnitude {mag} exceeds decay bound {bound} at z={z}"
        )
        mags.append(mag)
    mags = np.array(mags)
    assert np.all(np.diff(mags) < 0), "velocity magnitudes must decrease with depth"
    return mags


@dataclass(frozen=True)
class SamplingGrid:
    """Where the verification sweep evaluates residuals.

    n_x rows of samples per column over one wavelength, n_z uniformly
    spaced rows between the trough line and b0 - depth_extent, plus one
    near-surface row per entry of surface_offsets (distances below the
    local eta).  None fields resolve against the wave parameters:
    depth_extent -> 3/k, times -> (0, 0.3 T, 0.7 T), surface_offsets ->
    (0.01, 0.04, 0.12, 0.3, 0.6)/k.
    """

    n_x: int = 24
    n_z: int = 16
    depth_extent: float | None = None
    times: tuple[float, ...] | None = None
    surface_offsets: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.n_x < 2 or self.n_z < 2:
            raise ValueError(f"grid needs n_x, n_z >= 2, got {self.n_x} x {self.n_z}")
        if self.depth_extent is not None and not self.depth_extent > 0:
            raise ValueError(f"depth_extent must be positive, got {self.depth_extent}")
        if self.times is not None and len(self.times) == 0:
            raise ValueError("times must be non-empty")

    def resolved(self, params: WaveParameters) -> "SamplingGrid":
        """Fill None fields with their parameter-dependent defaults."""
        k = params.k
        period = TAU / (k * wave_speed(params))
        return replace(
            self,
            depth_extent=self.depth_extent if self.depth_extent is not None else 3.0 / k,
            times=self.times
            if self.times is not None
            else (0.0, 0.3 * period, 0.7 * period),
            surface_offsets=self.surface_offsets
            if self.surface_offsets is not None
            else tuple(d / k for d in (0.01, 0.04, 0.12, 0.3, 0.6)),
        )


def sample_points(
    grid: SamplingGrid,
    params: WaveParameters,
    settings: InversionSettings | None = None,
) -> list[tuple[float, float, float]]:
    """Materialize the grid as (t, x, z) triples.

    Columns are equispaced over one wavelength.  Near-surface rows follow
    the local surface at the configured offsets; uniform rows start just
    below the trough line (interior for every phase) and reach down to
    b0 - depth_extent.
    """
    grid = grid.resolved(params)
    k, b0 = params.k, params.b0
    E0 = math.exp(k * b0)
    z_top = b0 - E0 / k - 0.02 / k
    z_bottom = b0 - grid.depth_extent
    if z_bottom >= z_top:
        raise ValueError(
            f"depth_extent={grid.depth_extent} too shallow: uniform rows need "
            f"to fit below the trough line at {z_top}"
        )
    uniform_rows = np.linspace(z_top, z_bottom, grid.n_z)
    points = []
    dx = params.wavelength / grid.n_x
    for t in grid.times:
        for j in range(grid.n_x):
            x = j * dx
            eta = surface_elevation(t, x, params, settings)
            for off in grid.surface_offsets:
                points.append((t, x, eta - off))
            for z in uniform_rows:
                points.append((t, x, float(z)))
    return points


def surface_labels(grid: SamplingGrid, params: WaveParameters) -> list[float]:
    """n_x surface labels equispaced over one label wavelength."""
    return [j * params.wavelength / grid.n_x for j in range(grid.n_x)]


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one named check over the whole sweep.

    max_abs_residual is the raw residual at the worst (scaled) point and
    residual_scale the physical scale there, so the dimensionless reading
    is max_abs_residual / residual_scale <= tolerance.
    """

    name: str
    max_abs_residual: float
    residual_scale: float
    tolerance: float
    passed: bool
    n_points: int
    n_errors: int


@dataclass(frozen=True)
class VerificationReport:
    """Aggregated residual maxima for every equation of the system."""

    params: WaveParameters
    grid: SamplingGrid
    fd_step: float
    checks: tuple[CheckResult, ...]
    errors: tuple[str, ...]
    n_volume_points: int
    n_surface_labels: int
    overall_pass: bool

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


class _Accumulator:
    def __init__(self, name: str, tolerance: float):
        self.name = name
        self.tolerance = tolerance
        self.worst_scaled = 0.0
        self.worst_raw = 0.0
        self.worst_scale = 1.0
        self.n_points = 0
        self.n_errors = 0

    def add(self, raw: float, scale: float):
        self.n_points += 1
        raw, scale = abs(float(raw)), float(scale)
        scaled = raw / scale
        if scaled >= self.worst_scaled:
            self.worst_scaled = scaled
            self.worst_raw = raw
            self.worst_scale = scale

    def error(self):
        self.n_points += 1
        self.n_errors += 1

    def result(self) -> CheckResult:
        passed = self.worst_scaled <= self.tolerance and self.n_errors == 0
        return CheckResult(
            self.name,
            self.worst_raw,
            self.worst_scale,
            self.tolerance,
            passed,
            self.n_points,
            self.n_errors,
        )


def run_full_verification(
    params: WaveParameters,
    grid: SamplingGrid | None = None,
    h: float | None = None,
    settings: InversionSettings | None = None,
    tolerances: dict | None = None,
) -> VerificationReport:
    """Sweep every residual over the grid and collect a pass/fail report.

    Per-point failures (domain, stencil, convergence) are recorded and the
    sweep continues; any recorded failure fails the affected check.
    """
    grid = (grid if grid is not None else SamplingGrid()).resolved(params)
    if h is None:
        h = default_fd_step(params)
    settings = settings or DEFAULT_SETTINGS
    tols = dict(DEFAULT_TOLERANCES)
    if tolerances:
        unknown = set(tolerances) - set(tols)
        if unknown:
            raise ValueError(f"unknown check names in tolerances: {sorted(unknown)}")
        tols.update(tolerances)

    k = params.k
    c = wave_speed(params)
    acc = {name: _Accumulator(name, tol) for name, tol in tols.items()}
    errors: list[str] = []

    def record_error(names, t, x, z, exc):
        for name in names:
            acc[name].error()
        if len(errors) < 50:
            errors.append(f"{'/'.join(names)} at (t={t:.6g}, x={x:.6g}, z={z:.6g}): {exc}")

    volume_checks = ("momentum", "material_acceleration", "divergence", "vorticity")
    points = sample_points(grid, params, settings)
    for t, x, z in points:
        try:
            label = invert_map(t, x, z, params, settings)
        except (NotInDomainError, ConvergenceError) as exc:
            record_error(volume_checks, t, x, z, exc)
            continue
        E = math.exp(k * label.b)
        scale_mom = k * c * c * E
        scale_grad = c * k * E
        try:
            r_x, r_z = momentum_residual(t, x, z, params, h, settings)
            acc["momentum"].add(max(abs(r_x), abs(r_z)), scale_mom)
            m_x, m_z = material_derivative_residual(t, x, z, params, h, settings)
            acc["material_acceleration"].add(max(abs(m_x), abs(m_z)), scale_mom)
            acc["divergence"].add(divergence_residual(t, x, z, params, h, settings), scale_grad)
            acc["vorticity"].add(vorticity_residual(t, x, z, params, h, settings), scale_grad)
        except (StencilOutsideDomainError, ConvergenceError) as exc:
            record_error(volume_checks, t, x, z, exc)

    labels = surface_labels(grid, params)
    for t in grid.times:
        for a_s in labels:
            X, Z = flow_map(t, (a_s, params.b0), params)
            try:
                acc["kinematic_bc"].add(kinematic_bc_residual(t, a_s, params, h, settings), c)
                acc["kinematic_bc_identity"].add(
                    kinematic_bc_identity_residual(t, a_s, params), c
                )
                acc["dynamic_bc"].add(dynamic_bc_residual(t, a_s, params, settings), params.p0)
            except (ConvergenceError, NotInDomainError) as exc:
                record_error(("kinematic_bc", "kinematic_bc_identity", "dynamic_bc"), t, X, Z, exc)

    try:
        t0 = grid.times[0]
        x_col = 0.37 * params.wavelength
        mags = decay_check(t0, x_col, params, settings=settings)
        depths = [params.b0 - d / k for d in range(4, 11)]
        for z, mag in zip(depths, mags):
            bound = c * math.exp(k * z + math.exp(k * params.b0))
            acc["decay"].add(mag / bound, 1.0)
    except (AssertionError, ConvergenceError, NotInDomainError) as exc:
        record_error(("decay",), grid.times[0], 0.37 * params.wavelength, math.nan, exc)

    checks = tuple(acc[name].result() for name in DEFAULT_TOLERANCES)
    return VerificationReport(
        params=params,
        grid=grid,
        fd_step=h,
        checks=checks,
        errors=tuple(errors),
        n_volume_points=len(points),
        n_surface_labels=len(labels) * len(grid.times),
        overall_pass=all(ch.passed for ch in checks),
    )


def convergence_ratios(
    params: WaveParameters,
    h0: float | None = None,
    n_points: int = 12,
    seed: int = 20,
    settings: InversionSettings | None = None,
) -> dict[str, list[float]]:
    """Ratio of each finite-difference residual at steps h0 and h0/2 on a
    seeded set of interior points (plus surface labels for the kinematic
    condition).  Second-order stencils put every ratio near 4.

    The sample band sits between 0.12/k and 0.7/k below the surface label,
    where truncation dominates every noise floor by orders of magnitude.
    Points whose leading truncation coefficient happens to vanish (phase
    cancellations make the coarse residual invisible against the floor)
    are redrawn: the order is not measurable there.
    """
    if h0 is None:
        h0 = 2e-4 / params.k
    k, b0 = params.k, params.b0
    c = wave_speed(params)
    period = TAU / (k * c)
    rng = random.Random(seed)
    ratios: dict[str, list[float]] = {
        name: []
        for name in (
            "momentum_x",
            "momentum_z",
            "material_x",
            "material_z",
            "divergence",
            "vorticity",
            "kinematic_bc",
        )
    }
    for _ in range(n_points):
        for _attempt in range(50):
            a0 = rng.uniform(0.0, TAU / k)
            b = b0 - rng.uniform(0.12, 0.7) / k
            t = rng.uniform(0.0, period)
            x, z = flow_map(t, (a0, b), params)
            E = math.exp(k * b)
            scale_mom = k * c * c * E
            scale_grad = c * k * E
            coarse_m = momentum_residual(t, x, z, params, h0, settings)
            coarse_a = material_derivative_residual(t, x, z, params, h0, settings)
            coarse_d = divergence_residual(t, x, z, params, h0, settings)
            coarse_v = vorticity_residual(t, x, z, params, h0, settings)
            visible = min(
                abs(coarse_m[0]) / scale_mom,
                abs(coarse_m[1]) / scale_mom,
                abs(coarse_a[0]) / scale_mom,
                abs(coarse_a[1]) / scale_mom,
                abs(coarse_d) / scale_grad,
                abs(coarse_v) / scale_grad,
            )
            if visible >= 1e-9:
                break
        fine_m = momentum_residual(t, x, z, params, h0 / 2, settings)
        fine_a = material_derivative_residual(t, x, z, params, h0 / 2, settings)
        ratios["momentum_x"].append(abs(coarse_m[0] / fine_m[0]))
        ratios["momentum_z"].append(abs(coarse_m[1] / fine_m[1]))
        ratios["material_x"].append(abs(coarse_a[0] / fine_a[0]))
        ratios["material_z"].append(abs(coarse_a[1] / fine_a[1]))
        ratios["divergence"].append(
            abs(coarse_d / divergence_residual(t, x, z, params, h0 / 2, settings))
        )
        ratios["vorticity"].append(
            abs(coarse_v / vorticity_residual(t, x, z, params, h0 / 2, settings))
        )
    for _ in range(n_points):
        for _attempt in range(50):
            a_s = rng.uniform(0.0, TAU / k)
            t = rng.uniform(0.0, period)
            coarse = kinematic_bc_residual(t, a_s, params, h0, settings)
            if abs(coarse) >= 1e-10 * c:
                break
        ratios["kinematic_bc"].append(
            abs(coarse / kinematic_bc_residual(t, a_s, params, h0 / 2, settings))
        )
    return ratios

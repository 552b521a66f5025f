"""Rotational deep-water Gerstner waves on the equatorial f-plane.

Closed-form Lagrangian fields, numerical coordinate inversion to Eulerian
fields, a finite-difference certification harness for the governing
free-boundary system, and an RK4 particle tracer.
"""

from .fields import (
    FlowKinematics,
    SurfaceSingularityError,
    dispersion_residual,
    flow_acceleration,
    flow_map,
    flow_velocity,
    inverse_jacobian,
    jacobian,
    kinematics,
    phase,
    pressure_lagrangian,
    vorticity,
    wave_speed,
)
from .inversion import (
    ConvergenceError,
    InversionSettings,
    NotInDomainError,
    SurfaceProfile,
    eulerian_pressure,
    eulerian_velocity,
    in_domain,
    invert_map,
    newton_invert,
    surface_elevation,
    surface_profile,
)
from .params import (
    EulerianPoint,
    LagrangianLabel,
    WaveParameters,
)
from .tracer import Trajectory, compare_to_analytic, fit_circle, trace
from .verification import (
    CheckResult,
    SamplingGrid,
    StencilOutsideDomainError,
    VerificationReport,
    convergence_ratios,
    decay_check,
    default_fd_step,
    divergence_residual,
    dynamic_bc_residual,
    kinematic_bc_identity_residual,
    kinematic_bc_residual,
    material_derivative_residual,
    momentum_residual,
    run_full_verification,
    vorticity_residual,
)

__version__ = "0.1.0"

"""Physical parameters and coordinate records for the rotating Gerstner flow.

Everything is SI: meters, seconds, kilograms, pascals.  The flow lives on
the equatorial f-plane, so the only rotation input is the Earth rate
``omega`` entering the momentum balance through 2*omega terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

EARTH_ROTATION_RATE = 7.3e-5  # rad/s, Earth's rotation about the polar axis
STANDARD_GRAVITY = 9.8        # m/s^2
WATER_DENSITY = 1000.0        # kg/m^3
ATMOSPHERIC_PRESSURE = 101325.0  # Pa


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class WaveParameters:
    """Constants defining one wave.

    k     : wavenumber, 1/m, k > 0
    omega : rotation rate, rad/s, omega >= 0 (0 recovers the classical
            non-rotating Gerstner wave)
    g     : gravitational acceleration, m/s^2, g > 0
    rho   : water density, kg/m^3, rho > 0
    p0    : atmospheric pressure at the free surface, Pa
    b0    : label depth of the free surface, m, b0 <= 0.  ``None`` resolves
            to -0.1/k, a strictly submerged (trochoidal) surface.

    The derived wave speed always exists because the dispersion
    discriminant omega^2 + k*g is positive for valid parameters.
    """

    k: float = 1.0
    omega: float = EARTH_ROTATION_RATE
    g: float = STANDARD_GRAVITY
    rho: float = WATER_DENSITY
    p0: float = ATMOSPHERIC_PRESSURE
    b0: float | None = None

    def __post_init__(self):
        for name in ("k", "omega", "g", "rho", "p0"):
            object.__setattr__(self, name, _require_finite(name, getattr(self, name)))
        if self.k <= 0:
            raise ValueError(f"wavenumber k must be positive, got {self.k}")
        if self.omega < 0:
            raise ValueError(f"rotation rate omega must be >= 0, got {self.omega}")
        if self.g <= 0:
            raise ValueError(f"gravity g must be positive, got {self.g}")
        if self.rho <= 0:
            raise ValueError(f"density rho must be positive, got {self.rho}")
        b0 = -0.1 / self.k if self.b0 is None else _require_finite("b0", self.b0)
        if b0 > 0:
            raise ValueError(f"surface label depth b0 must be <= 0, got {b0}")
        object.__setattr__(self, "b0", b0)

    @property
    def wavelength(self) -> float:
        """Spatial period 2*pi/k in meters."""
        return 2.0 * math.pi / self.k

    def label(self, a: float, b: float) -> "LagrangianLabel":
        """Validated label constructor: checks membership in the label
        half-plane b <= b0."""
        a = _require_finite("a", a)
        b = _require_finite("b", b)
        if b > self.b0:
            raise ValueError(
                f"label depth b={b} lies above the surface label b0={self.b0}"
            )
        return LagrangianLabel(a, b)


@dataclass(frozen=True)
class LagrangianLabel:
    """Particle label (a, b): a is the horizontal label (m, unrestricted),
    b the depth label (m, b <= b0 for labels inside the fluid)."""

    a: float
    b: float


@dataclass(frozen=True)
class EulerianPoint:
    """Physical space-time point (t, x, z).  The point lies in the fluid
    iff z is below the free surface elevation at (t, x)."""

    t: float
    x: float
    z: float

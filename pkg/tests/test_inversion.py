import math
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gerstner_fplane import (
    ConvergenceError,
    InversionSettings,
    NotInDomainError,
    WaveParameters,
    eulerian_pressure,
    eulerian_velocity,
    flow_map,
    flow_velocity,
    in_domain,
    invert_map,
    jacobian,
    newton_invert,
    surface_elevation,
    surface_profile,
    wave_speed,
)

TAU = 2.0 * math.pi


class TestInvertMap:
    def test_round_trip_on_random_labels(self, params):
        rng = random.Random(101)
        for _ in range(200):
            a = rng.uniform(-20.0, 20.0)
            b = params.b0 - rng.uniform(0.01, 3.0)
            t = rng.uniform(0.0, 10.0)
            x, z = flow_map(t, (a, b), params)
            result = newton_invert(t, x, z, params)
            assert math.hypot(result.a - a, result.b - b) <= 1e-10
            assert result.iterations <= 12

    @given(
        st.floats(-10.0, 10.0),
        st.floats(0.02, 2.5),
        st.floats(0.0, 8.0),
    )
    def test_round_trip_property(self, a, depth, t):
        p = WaveParameters()
        b = p.b0 - depth
        x, z = flow_map(t, (a, b), p)
        label = invert_map(t, x, z, p)
        assert math.hypot(label.a - a, label.b - b) <= 1e-10

    def test_fixed_point_self_consistency(self, params):
        """Forward-map a reference label, invert, compare."""
        x, z = flow_map(0.7, (0.3, -0.5), params)
        label = invert_map(0.7, x, z, params)
        assert label.a == pytest.approx(0.3, abs=1e-12)
        assert label.b == pytest.approx(-0.5, abs=1e-12)

    def test_deep_points_invert_to_themselves(self, params):
        x, z = 4.2, params.b0 - 12.0
        label = invert_map(1.3, x, z, params)
        bound = 2.0 * math.exp(params.k * label.b) / params.k
        assert math.hypot(label.a - x, label.b - z) <= bound

    def test_surface_points_invert(self, params):
        for a in (0.0, 1.0, 2.5, 4.0):
            x, z = flow_map(0.9, (a, params.b0), params)
            label = invert_map(0.9, x, z, params)
            assert label.b == pytest.approx(params.b0, abs=1e-10)
            assert label.a == pytest.approx(a, abs=1e-10)

    def test_rejects_point_above_surface(self, params):
        x = 1.0
        z = surface_elevation(0.0, x, params) + 0.01
        with pytest.raises(NotInDomainError):
            invert_map(0.0, x, z, params)

    def test_nonconvergence_reports_residual(self, params):
        settings = InversionSettings(max_iterations=1, tolerance=1e-15)
        x, z = flow_map(0.0, (0.5, params.b0 - 0.02), params)
        with pytest.raises(ConvergenceError) as err:
            newton_invert(0.0, x, z, params, settings)
        assert err.value.residual > 0

    def test_previously_stalling_case(self, params):
        """A near-surface point that traps plain Newton started at (x, z)."""
        a, b, t = 8.196443698354038, -0.10611740100205275, 6.166991453398141
        x, z = flow_map(t, (a, b), params)
        result = newton_invert(t, x, z, params)
        assert math.hypot(result.a - a, result.b - b) <= 1e-10
        assert result.iterations <= 12


class TestSettingsValidation:
    def test_bad_settings_rejected(self):
        with pytest.raises(ValueError):
            InversionSettings(tolerance=0.0)
        with pytest.raises(ValueError):
            InversionSettings(tolerance=-1e-9)
        with pytest.raises(ValueError):
            InversionSettings(max_iterations=0)


class TestSurfaceElevation:
    def test_crest_and_trough(self, params):
        k, b0 = params.k, params.b0
        c = wave_speed(params)
        E0 = math.exp(k * b0)
        t = 0.6
        crest_x = c * t  # label a = ct puts the phase at zero
        trough_x = c * t + math.pi / k
        assert surface_elevation(t, crest_x, params) == pytest.approx(b0 + E0 / k, abs=1e-12)
        assert surface_elevation(t, trough_x, params) == pytest.approx(b0 - E0 / k, abs=1e-12)

    def test_periodicity(self, params):
        rng = random.Random(7)
        wavelength = params.wavelength
        for _ in range(50):
            t = rng.uniform(0.0, 5.0)
            x = rng.uniform(-10.0, 10.0)
            assert surface_elevation(t, x + wavelength, params) == pytest.approx(
                surface_elevation(t, x, params), abs=1e-10
            )

    def test_travels_undistorted(self, params):
        c = wave_speed(params)
        rng = random.Random(13)
        for _ in range(100):
            t = rng.uniform(0.0, 8.0)
            x = rng.uniform(-15.0, 15.0)
            assert surface_elevation(t, x, params) == pytest.approx(
                surface_elevation(0.0, x - c * t, params), abs=1e-9
            )

    def test_bracketed_by_crest_and_trough(self, params):
        k, b0 = params.k, params.b0
        E0 = math.exp(k * b0)
        xs = np.linspace(0.0, params.wavelength, 200)
        for x in xs:
            eta = surface_elevation(0.3, float(x), params)
            assert b0 - E0 / k - 1e-12 <= eta <= b0 + E0 / k + 1e-12

    def test_monotone_parametrization(self, params):
        """x(t, a, b0) must be strictly increasing in a for a submerged surface."""
        t = 1.1
        a_values = np.linspace(0.0, params.wavelength, 400)
        xs = [flow_map(t, (float(a), params.b0), params)[0] for a in a_values]
        assert all(x2 > x1 for x1, x2 in zip(xs, xs[1:]))
        assert all(
            jacobian(t, (float(a), params.b0), params)[0, 0] > 0 for a in a_values[::10]
        )


class TestSurfaceProfile:
    def test_trochoid_kind_and_bounds(self, params):
        profile = surface_profile(0.0, params, 128)
        assert profile.kind == "trochoid"
        assert profile.samples.shape == (128, 2)
        k, b0 = params.k, params.b0
        E0 = math.exp(k * b0)
        assert profile.samples[:, 1].max() <= b0 + E0 / k + 1e-12
        assert profile.samples[:, 1].min() >= b0 - E0 / k - 1e-12

    def test_cycloid_kind(self):
        p = WaveParameters(b0=0.0)
        profile = surface_profile(0.0, p, 64)
        assert profile.kind == "cycloid"

    def test_cycloid_cusp_slope_diverges(self):
        """One-sided slopes blow up approaching the crest cusp at x = 0."""
        p = WaveParameters(b0=0.0)
        eta_cusp = surface_elevation(0.0, 0.0, p)
        assert eta_cusp == pytest.approx(1.0 / p.k, abs=1e-9)
        delta = 1e-9 / p.k
        slope = abs(surface_elevation(0.0, delta, p) - eta_cusp) / delta
        assert slope > 1e3

    def test_rejects_tiny_sample_count(self, params):
        with pytest.raises(ValueError):
            surface_profile(0.0, params, 1)


class TestEulerianFields:
    def test_velocity_at_crest(self, params):
        c = wave_speed(params)
        t = 0.45
        a = c * t
        x, z = flow_map(t, (a, params.b0), params)
        u, w = eulerian_velocity(t, x, z, params)
        assert u == pytest.approx(c * math.exp(params.k * params.b0), rel=1e-10)
        assert w == pytest.approx(0.0, abs=1e-10)

    def test_speed_magnitude_everywhere(self, params):
        c = wave_speed(params)
        rng = random.Random(3)
        for _ in range(50):
            a = rng.uniform(-5.0, 5.0)
            b = params.b0 - rng.uniform(0.0, 4.0)
            t = rng.uniform(0.0, 5.0)
            x, z = flow_map(t, (a, b), params)
            u, w = eulerian_velocity(t, x, z, params)
            assert math.hypot(u, w) == pytest.approx(c * math.exp(params.k * b), rel=1e-10)

    def test_velocity_decays_with_depth(self, params):
        c = wave_speed(params)
        z = params.b0 - 12.0 / params.k
        u, w = eulerian_velocity(0.7, 2.0, z, params)
        assert math.hypot(u, w) <= 1e-4 * c

    def test_pressure_on_surface_is_atmospheric(self, params):
        for a in (0.2, 1.7, 3.9):
            x, z = flow_map(1.2, (a, params.b0), params)
            assert eulerian_pressure(1.2, x, z, params) == pytest.approx(
                params.p0, rel=1e-9
            )

    def test_pressure_constant_along_constant_depth_label(self, params):
        b = params.b0 - 0.8
        t = 0.9
        p1 = eulerian_pressure(t, *flow_map(t, (0.7, b), params), params)
        p2 = eulerian_pressure(t, *flow_map(t, (3.1, b), params), params)
        assert abs(p1 - p2) <= 1e-10 * params.p0

    def test_hydrostatic_asymptote(self, params):
        """At depth the pressure is hydrostatic up to the fixed surface
        correction rho*g/(2k) e^{2k b0}; the relative gap falls below 1%
        only once |z - b0| exceeds ~45/k (it is ~5% at 8/k)."""
        rho, g, k, b0 = params.rho, params.g, params.k, params.b0
        correction = rho * g / (2 * k) * math.exp(2 * k * b0)

        def gap(depth):
            z = b0 - depth / k
            excess = eulerian_pressure(0.0, 1.0, z, params) - params.p0
            hydrostatic = -rho * g * (z - b0)
            return excess - hydrostatic, hydrostatic

        diff, hydro = gap(8.0)
        assert abs(diff) / hydro == pytest.approx(0.0512, abs=0.002)
        diff, hydro = gap(45.0)
        assert diff == pytest.approx(-correction, rel=1e-6)
        assert abs(diff) / hydro < 0.01


class TestInDomain:
    def test_deep_point_inside(self, params):
        assert in_domain(0.0, 3.0, params.b0 - 5.0 / params.k, params)

    def test_above_crest_outside(self, params):
        z = params.b0 + 2.0 * math.exp(params.k * params.b0) / params.k
        assert not in_domain(0.0, 0.0, z, params)

    def test_forward_mapped_interior_inside(self, params):
        x, z = flow_map(0.8, (1.0, params.b0 - 0.5 / params.k), params)
        assert in_domain(0.8, x, z, params)

    def test_point_just_above_surface_outside(self, params):
        x = 0.7
        eta = surface_elevation(0.0, x, params)
        assert not in_domain(0.0, x, eta + 1e-6, params)
        assert in_domain(0.0, x, eta - 1e-6, params)

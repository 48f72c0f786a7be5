import math

import numpy as np
import pytest

from rosenau import (
    InputDomainError,
    InvariantViolation,
    ModelParams,
    PreconditionError,
    SincConstants,
    band_boundaries,
    derivative_floor,
    dispersion_derivatives,
    epsilon0,
    eval_dispersion,
    second_derivative_bound,
    unit_sphere_area,
)

P_DEFAULT = ModelParams(1.0, 1.0, 1.0, 2.0, 1)
SINC = SincConstants()

# parameter sets exercising theta in {0.5, 1, 2} and mu in {0, 1}
PARAM_SETS = [
    ModelParams(1.0, 1.0, 1.0, 2.0, 1),
    ModelParams(1.0, 0.0, 1.0, 2.0, 1),
    ModelParams(1.0, 1.0, 1.0, 1.0, 1),
    ModelParams(1.0, 1.0, 1.0, 0.5, 1),
    ModelParams(2.0, 0.0, 3.0, 0.5, 1),
]


class TestModelParams:
    def test_rejects_bad_coefficients(self):
        with pytest.raises(InputDomainError):
            ModelParams(0.0, 1.0, 1.0, 2.0, 1)
        with pytest.raises(InputDomainError):
            ModelParams(1.0, -1.0, 1.0, 2.0, 1)
        with pytest.raises(InputDomainError):
            ModelParams(1.0, 1.0, 0.0, 2.0, 1)
        with pytest.raises(InputDomainError):
            ModelParams(1.0, 1.0, 1.0, 2.5, 1)
        with pytest.raises(InputDomainError):
            ModelParams(1.0, 1.0, 1.0, 2.0, 0)

    def test_mu_zero_guard(self):
        p = ModelParams(1.0, 0.0, 1.0, 2.0, 1)
        with pytest.raises(PreconditionError):
            p.require_mu_positive("test op")


class TestDispersion:
    def test_unit_value(self):
        assert eval_dispersion(P_DEFAULT, 1.0) == pytest.approx(1.0, rel=1e-15)

    def test_origin_exact_zero(self):
        assert eval_dispersion(P_DEFAULT, 0.0) == 0.0

    @pytest.mark.parametrize("r", [1e-2, 1e-4, 1e-6])
    def test_linear_slope_at_origin(self, r):
        # f(r)/r -> sqrt(kappa) with quadratic-order correction
        params = P_DEFAULT
        ratio = eval_dispersion(params, r) / r
        correction = 2.0 * (params.mu / params.kappa + params.delta)
        assert abs(ratio / math.sqrt(params.kappa) - 1.0) <= correction * r**2

    def test_rejects_bad_radius(self):
        with pytest.raises(InputDomainError):
            eval_dispersion(P_DEFAULT, -1.0)
        with pytest.raises(InputDomainError):
            eval_dispersion(P_DEFAULT, math.nan)

    def test_positive_away_from_origin(self):
        r = np.geomspace(1e-8, 1e8, 200)
        assert np.all(eval_dispersion(P_DEFAULT, r) > 0)


class TestDerivatives:
    def test_first_derivative_matches_finite_difference(self):
        r0, h = 0.3, 1e-5
        fp, _ = dispersion_derivatives(P_DEFAULT, r0)
        fd = (eval_dispersion(P_DEFAULT, r0 + h) - eval_dispersion(P_DEFAULT, r0 - h)) / (2 * h)
        assert fp == pytest.approx(fd, rel=1e-6)

    def test_second_derivative_matches_finite_difference(self):
        r0, h = 0.3, 1e-4
        _, fpp = dispersion_derivatives(P_DEFAULT, r0)
        fd = (
            eval_dispersion(P_DEFAULT, r0 + h)
            - 2 * eval_dispersion(P_DEFAULT, r0)
            + eval_dispersion(P_DEFAULT, r0 - h)
        ) / h**2
        assert fpp == pytest.approx(fd, rel=1e-4)

    def test_default_floor_is_one_eighth(self):
        assert derivative_floor(P_DEFAULT) == pytest.approx(0.125, rel=1e-12)

    def test_rejects_nonpositive_radius(self):
        with pytest.raises(InputDomainError):
            dispersion_derivatives(P_DEFAULT, 0.0)

    @pytest.mark.parametrize("params", PARAM_SETS)
    def test_first_derivative_floor_on_dense_grid(self, params):
        r = np.geomspace(1e-8, epsilon0(params), 1000)
        fp, _ = dispersion_derivatives(params, r)
        assert np.all(fp >= derivative_floor(params) * (1 - 1e-12))

    @pytest.mark.parametrize("params", PARAM_SETS)
    def test_second_derivative_bound_on_dense_grid(self, params):
        r = np.geomspace(1e-8, epsilon0(params), 1000)
        _, fpp = dispersion_derivatives(params, r)
        c = second_derivative_bound(params)
        assert np.all(r * np.abs(fpp) <= c * (1.0 + r))


class TestEpsilon0:
    def test_default_value(self):
        assert epsilon0(P_DEFAULT) == pytest.approx((1.0 / 8.0) ** 0.25, rel=1e-12)

    def test_clamps_to_one(self):
        assert epsilon0(ModelParams(1e-6, 1e-6, 100.0, 0.5, 1)) == 1.0

    def test_mu_zero_theta_one(self):
        assert epsilon0(ModelParams(1.0, 0.0, 1.0, 1.0, 1)) == pytest.approx(
            math.sqrt(0.5), rel=1e-12
        )


class TestSincConstants:
    def test_defaults_valid(self):
        s = SincConstants()
        assert s.L == 1.0 and s.delta0 == 0.9

    def test_rejects_bad_threshold(self):
        with pytest.raises(InputDomainError):
            SincConstants(delta0=1.5)

    def test_rejects_wrong_supremum(self):
        with pytest.raises(InvariantViolation):
            SincConstants(L=2.0)

    def test_half_level_and_supremum_sampled(self):
        eta = np.linspace(1e-9, 1e3, 200001)
        vals = np.abs(np.sin(eta) / eta)
        assert np.all(vals[eta <= SINC.delta0] >= 0.5)
        assert np.max(vals) <= SINC.L


class TestBands:
    def test_beta_value(self):
        b = band_boundaries(P_DEFAULT, SINC, 10.0)
        assert b.beta == pytest.approx(0.9 / (math.sqrt(2) * 10), rel=1e-12)

    def test_gamma_value(self):
        b = band_boundaries(P_DEFAULT, SINC, math.e**2)
        assert b.gamma_band == pytest.approx(0.9 / (math.sqrt(2) * 2), rel=1e-12)

    def test_low_band_phase_cap(self):
        for t in np.geomspace(10.0, 1e6, 25):
            b = band_boundaries(P_DEFAULT, SINC, t)
            assert t * eval_dispersion(P_DEFAULT, b.beta) <= SINC.delta0 * (1 + 1e-12)

    def test_rejects_small_time(self):
        with pytest.raises(PreconditionError):
            band_boundaries(P_DEFAULT, SINC, 2.0)

    def test_scaled_radii_are_time_free(self):
        vals_beta = []
        vals_gamma = []
        for t in (10.0, 1e3, 1e5):
            b = band_boundaries(P_DEFAULT, SINC, t)
            vals_beta.append(b.beta * t)
            vals_gamma.append(b.gamma_band * math.log(t))
        assert np.ptp(vals_beta) <= 1e-12 * vals_beta[0]
        assert np.ptp(vals_gamma) <= 1e-12 * vals_gamma[0]


class TestSphereArea:
    @pytest.mark.parametrize(
        "dim,expected",
        [(1, 2.0), (2, 2 * math.pi), (3, 4 * math.pi), (4, 2 * math.pi**2)],
    )
    def test_known_areas(self, dim, expected):
        assert unit_sphere_area(dim) == pytest.approx(expected, rel=1e-12)

    def test_rejects_bad_dimension(self):
        with pytest.raises(InputDomainError):
            unit_sphere_area(0)

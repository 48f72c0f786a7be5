import math

import numpy as np
import pytest

from rosenau import (
    InputDomainError,
    IntegrabilityError,
    MomentDecomposition,
    RadialProfile,
    TailBound,
    annular_profile,
    fluctuation,
    gaussian_profile,
    l1_norm,
    moment_bound_check,
    weighted_l1_norm,
    zeroth_moment,
)
from rosenau.moments import radial_fourier


def indicator_profile(dim=1):
    return RadialProfile(
        func=lambda r: np.where(np.asarray(r, dtype=float) <= 1.0, 1.0, 0.0),
        dim=dim,
        tail=TailBound(kind="compact", cutoff=1.0),
        label="indicator",
    )


class TestZerothMoment:
    def test_gaussian_1d(self):
        assert zeroth_moment(gaussian_profile(1)) == pytest.approx(
            math.sqrt(math.pi), rel=1e-10
        )

    def test_gaussian_2d(self):
        assert zeroth_moment(gaussian_profile(2)) == pytest.approx(math.pi, rel=1e-10)

    def test_divergent_tail_rejected(self):
        slow = RadialProfile(
            func=lambda r: 1.0 / (1.0 + np.asarray(r, dtype=float)),
            dim=1,
            tail=TailBound(kind="power", amplitude=1.0, power=1.0, cutoff=1.0),
        )
        with pytest.raises(IntegrabilityError):
            zeroth_moment(slow)


class TestFluctuation:
    def test_zero_frequency(self):
        assert fluctuation(gaussian_profile(1), 0.0) == (0.0, 0.0)

    def test_odd_part_vanishes_for_radial_data(self):
        for rho in (0.3, 1.0, 4.0):
            _, b = fluctuation(gaussian_profile(2), rho)
            assert b == 0.0

    def test_gaussian_closed_form(self):
        # u1 = e^{-x^2} in 1-D has transform sqrt(pi) e^{-xi^2/4}
        a, _ = fluctuation(gaussian_profile(1), 1.0)
        expected = math.sqrt(math.pi) * (math.exp(-0.25) - 1.0)
        assert a == pytest.approx(expected, rel=1e-10)

    def test_accepts_vector_argument(self):
        a_scalar, _ = fluctuation(gaussian_profile(2), 1.0)
        a_vec, _ = fluctuation(gaussian_profile(2), np.array([0.6, 0.8]))
        assert a_vec == pytest.approx(a_scalar, rel=1e-10)

    def test_reconstruction_against_independent_transform(self):
        profile = gaussian_profile(2)
        p = zeroth_moment(profile)
        for rho in (0.2, 0.9, 2.5, 6.0):
            a, b = fluctuation(profile, rho)
            direct = radial_fourier(profile, rho)
            assert p + a - 1j * b == pytest.approx(direct, abs=1e-8)


class TestWeightedNorm:
    def test_gaussian_1d_gamma_one(self):
        assert weighted_l1_norm(gaussian_profile(1), 1.0) == pytest.approx(
            math.sqrt(math.pi) + 1.0, rel=1e-10
        )

    def test_small_gamma_limit(self):
        profile = gaussian_profile(1)
        val = weighted_l1_norm(profile, 1e-6)
        assert val == pytest.approx(2.0 * l1_norm(profile), rel=1e-4)

    def test_indicator(self):
        assert weighted_l1_norm(indicator_profile(), 1.0) == pytest.approx(3.0, rel=1e-10)

    def test_dominates_plain_l1(self):
        for gamma in (0.25, 0.6, 1.0):
            profile = gaussian_profile(2, a=0.7)
            assert weighted_l1_norm(profile, gamma) >= l1_norm(profile)

    def test_rejects_bad_gamma(self):
        with pytest.raises(InputDomainError):
            weighted_l1_norm(gaussian_profile(1), 1.5)


class TestMomentBound:
    GRID = np.geomspace(1e-2, 30.0, 40)

    def test_gamma_one_cap(self):
        m = moment_bound_check(gaussian_profile(1), 1.0, self.GRID)
        assert 0 < m <= 2.0

    def test_analytic_ceiling(self):
        for gamma in (0.3, 0.7, 1.0):
            m = moment_bound_check(gaussian_profile(2), gamma, self.GRID)
            assert m <= 2.0 ** (1.0 - gamma) + 1.0

    def test_narrow_bump_constant_vanishes(self):
        narrow = gaussian_profile(1, a=1e6)  # width ~ 1e-3
        m = moment_bound_check(narrow, 1.0, np.geomspace(1e-3, 1e-1, 10))
        assert m <= 1e-2

    def test_scaling_invariance(self):
        base = gaussian_profile(1)
        scaled = gaussian_profile(1, amplitude=37.5)
        m1 = moment_bound_check(base, 1.0, self.GRID)
        m2 = moment_bound_check(scaled, 1.0, self.GRID)
        assert m2 == pytest.approx(m1, rel=1e-12)

    def test_rejects_zero_in_grid(self):
        with pytest.raises(InputDomainError):
            moment_bound_check(gaussian_profile(1), 1.0, np.array([0.0, 1.0, 2.0, 3.0, 4.0]))


class TestDecomposition:
    def test_norm_chain(self):
        dec = MomentDecomposition.from_profile(gaussian_profile(1), 1.0)
        assert dec.weighted_norm >= dec.l1 >= abs(dec.p_moment)

    def test_annular_profile_mass(self):
        profile = annular_profile(2, r0=2.0, width=1.0)
        # omega_2 * integral (1-s^2)^3 r dr over [1, 3]: closed form via substitution
        s = np.polynomial.legendre.leggauss(64)
        nodes = 2.0 + s[0]
        mass = 2 * math.pi * float(np.sum(s[1] * (1 - (nodes - 2.0) ** 2) ** 3 * nodes))
        assert zeroth_moment(profile) == pytest.approx(mass, rel=1e-10)

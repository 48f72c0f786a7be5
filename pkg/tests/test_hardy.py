import math

import numpy as np
import pytest

from rosenau import (
    InputDomainError,
    IntegrabilityError,
    ModelParams,
    PreconditionError,
    WeightFunction,
    blowup_scan,
    capacity_family,
    dilation_family,
    energy_identity_check,
    gaussian_velocity_data,
    rayleigh_quotient,
    rellich_quotient,
)
from rosenau.evolution import cosc, sinc
from rosenau.hardy import gaussian_bump, gradient_norm_sq, write_quotient_csv

R_GRID = np.exp(np.array([3.0, 5.0, 8.0, 12.0, 16.0]))


class TestWeights:
    def test_a1_weight_positive_everywhere(self):
        w = WeightFunction("a1_weight", 2)
        r = np.linspace(0.0, 50.0, 101)
        assert np.all(w.evaluate(r) > 0)
        assert w.evaluate(0.0) == 1.0

    def test_vanishing_weights_reject_origin(self):
        for kind in ("plain_abs", "abs_log_weight", "abs_squared"):
            with pytest.raises(InputDomainError):
                WeightFunction(kind, 2).evaluate(np.array([0.0, 1.0]))

    def test_unknown_kind_rejected(self):
        with pytest.raises(InputDomainError):
            WeightFunction("bogus", 2)


class TestCapacityFamily:
    def test_gradient_norm_closed_form(self):
        for log_r in (5.0, 10.0):
            u = capacity_family(math.exp(log_r), 2)
            assert gradient_norm_sq(u, 2) == pytest.approx(
                2 * math.pi / log_r, rel=1e-8
            )

    def test_plateau_and_support(self):
        R = math.exp(5.0)
        u = capacity_family(R, 2)
        assert float(u.value(np.array([1.0]))[0]) == 1.0
        assert float(u.value(np.array([R]))[0]) == 0.0
        assert float(u.value(np.array([0.5]))[0]) == 1.0

    def test_needs_large_parameter(self):
        with pytest.raises(InputDomainError):
            capacity_family(2.0, 2)

    def test_numerator_floor_from_unit_disk(self):
        # u = 1 on the unit disk bounds the weighted norm from below, R-free
        from rosenau.hardy import weighted_norm_sq

        w = WeightFunction("a1_weight", 2)
        floor = None
        for R in (math.e**4, math.e**8):
            u = capacity_family(R, 2)
            val = weighted_norm_sq(u, w, 2)
            disk = weighted_norm_sq(capacity_family(math.e**4, 2), w, 2)
            if floor is None:
                floor = disk
            assert val >= 0.5  # unit-disk mass alone is about 0.8
        assert floor > 0


class TestRayleighQuotient:
    def test_hardy_constant_3d(self):
        # classical constant (2/(n-2))^2 = 4 in three dimensions
        q = rayleigh_quotient(gaussian_bump(), WeightFunction("plain_abs", 3), 3)
        assert q <= 4.0

    def test_scale_invariance_of_quotient(self):
        w = WeightFunction("a1_weight", 2)
        u = capacity_family(math.e**6, 2)
        base = rayleigh_quotient(u, w, 2)
        # scaling u by a constant changes nothing
        from rosenau.hardy import RadialTestFunction

        scaled = RadialTestFunction(
            value=lambda r: 5.0 * u.value(r),
            deriv=lambda r: 5.0 * u.deriv(r),
            support=u.support,
            kinks=u.kinks,
        )
        assert rayleigh_quotient(scaled, w, 2) == pytest.approx(base, rel=1e-9)

    def test_capacity_quotient_grows(self):
        w = WeightFunction("a1_weight", 2)
        q = rayleigh_quotient(capacity_family(math.e**10, 2), w, 2)
        # numerator retains at least the unit-disk floor; denominator is 2 pi / 10
        from rosenau.hardy import weighted_norm_sq

        floor = weighted_norm_sq(capacity_family(math.e**10, 2), w, 2)
        assert q >= 0.1 * floor * (10.0 / (2 * math.pi))

    def test_divergent_numerator_rejected(self):
        with pytest.raises(IntegrabilityError):
            rayleigh_quotient(gaussian_bump(), WeightFunction("plain_abs", 1), 1)

    def test_degenerate_gradient_rejected(self):
        from rosenau.hardy import RadialTestFunction

        flat = RadialTestFunction(
            value=lambda r: np.ones_like(np.asarray(r, dtype=float)),
            deriv=lambda r: np.zeros_like(np.asarray(r, dtype=float)),
            support=1.0,
        )
        with pytest.raises(InputDomainError):
            rayleigh_quotient(flat, WeightFunction("constant_one", 1), 1)


class TestBlowupScan:
    @pytest.mark.parametrize(
        "kind,dim",
        [
            ("a1_weight", 2),
            ("abs_log_weight", 2),
            ("plain_abs", 1),
            ("constant_one", 1),
            ("constant_one", 2),
        ],
    )
    def test_unbounded_verdicts(self, kind, dim):
        scan = blowup_scan(WeightFunction(kind, dim), R_GRID, dim)
        assert scan.verdict == "unbounded"

    def test_a1_linear_in_log_parameter(self):
        scan = blowup_scan(WeightFunction("a1_weight", 2), R_GRID, 2)
        assert scan.slope > 0
        assert scan.r_squared >= 0.95

    def test_poincare_failure_rate_1d(self):
        # dilation quotient for the constant weight scales like R^2
        scan = blowup_scan(WeightFunction("constant_one", 1), R_GRID, 1)
        q = scan.trace.quotients
        growth = q[-1] / q[0]
        expected = (R_GRID[-1] / R_GRID[0]) ** 2
        assert growth == pytest.approx(expected, rel=1e-6)

    def test_plain_abs_bounded_3d_exactly_constant(self):
        scan = blowup_scan(WeightFunction("plain_abs", 3), R_GRID, 3)
        assert scan.verdict == "bounded"
        q = scan.trace.quotients
        assert np.max(q) / np.min(q) - 1.0 <= 1e-9

    def test_grid_validation(self):
        with pytest.raises(InputDomainError):
            blowup_scan(WeightFunction("a1_weight", 2), np.array([1.0, 2.0, 3.0]), 2)
        with pytest.raises(InputDomainError):
            blowup_scan(
                WeightFunction("a1_weight", 2), np.array([5.0, 4.0, 6.0, 7.0, 8.0]), 2
            )

    def test_quotient_csv(self, tmp_path):
        scan = blowup_scan(WeightFunction("a1_weight", 2), R_GRID, 2)
        path = tmp_path / "quotients.csv"
        write_quotient_csv(scan.trace, path)
        lines = path.read_bytes().split(b"\r\n")
        assert lines[0] == b"R,quotient,grad_norm_sq"
        assert len([l for l in lines[1:] if l]) == R_GRID.size


class TestEnergyIdentity:
    P = ModelParams(1.0, 1.0, 1.0, 1.0, 2)

    def test_per_mode_identity_algebra(self):
        # with theta = 1 the factor mu r^4 + kappa r^2 equals f^2 (1 + delta r^2),
        # collapsing the accumulated energy density to the source pairing exactly
        from rosenau.model import eval_dispersion

        rng = np.random.default_rng(11)
        for _ in range(50):
            r = float(rng.uniform(0.01, 6.0))
            t = float(rng.uniform(0.1, 50.0))
            w1 = complex(rng.standard_normal(), rng.standard_normal())
            f = eval_dispersion(self.P, r)
            phase = t * f
            v = t * t * float(cosc(phase)) * w1
            v_t = t * float(sinc(phase)) * w1
            lhs = 0.5 * (1 + r**2) * abs(v_t) ** 2 + 0.5 * (r**4 + r**2) * abs(v) ** 2
            rhs = (1 + r**2) * (t * t * float(cosc(phase))) * abs(w1) ** 2
            assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_zero_time(self):
        out = energy_identity_check(self.P, gaussian_velocity_data(2), 0.0)
        assert out.lhs == 0.0 and out.rhs == 0.0

    @pytest.mark.parametrize("t", [10.0, 1e3])
    def test_residual_tiny(self, t):
        out = energy_identity_check(self.P, gaussian_velocity_data(2), t)
        assert out.residual <= 1e-8

    def test_accumulated_energy_outgrows_solution_norm(self):
        early = energy_identity_check(self.P, gaussian_velocity_data(2), 1e2)
        late = energy_identity_check(self.P, gaussian_velocity_data(2), 1e3)
        assert late.lhs > early.lhs
        # the solution-norm share grows only logarithmically
        ratio_late = late.solution_norm_sq_half / math.log(1e3)
        ratio_early = early.solution_norm_sq_half / math.log(1e2)
        assert ratio_late <= 1.6 * ratio_early

    def test_requires_theta_one(self):
        p_bad = ModelParams(1.0, 1.0, 1.0, 2.0, 2)
        with pytest.raises(PreconditionError):
            energy_identity_check(p_bad, gaussian_velocity_data(2), 1.0)

    def test_requires_zero_position_datum(self):
        from rosenau import gaussian_position_data

        with pytest.raises(PreconditionError):
            energy_identity_check(self.P, gaussian_position_data(2), 1.0)


class TestRellich:
    def test_gaussian_under_classical_constant(self):
        q = rellich_quotient(gaussian_bump(), 5)
        assert q <= (4.0 / 5.0) ** 2 * 1.01

    def test_scale_invariance(self):
        vals = [rellich_quotient(dilation_family(R), 5) for R in (1.0, 4.0, 16.0)]
        assert max(vals) / min(vals) - 1.0 <= 1e-12

    def test_low_dimension_rejected(self):
        with pytest.raises(PreconditionError):
            rellich_quotient(gaussian_bump(), 4)

"""Tests of the verification checks themselves."""

import numpy as np
import pytest

from aquafilter.discretize import GridSpec
from aquafilter.verification import (SUITES, CheckReport, check_extension,
                                     check_ghost_identity,
                                     check_pole_geometry,
                                     check_selfadjointness, convergence_study,
                                     default_manufactured_case,
                                     extension_operator, pole_modulus,
                                     run_suite)


class TestGhostIdentity:
    def test_passes_at_machine_precision(self):
        rep = check_ghost_identity(samples=500, seed=1)
        assert rep.passed
        assert rep.measured <= 1e-13

    def test_deterministic_given_seed(self):
        a = check_ghost_identity(samples=100, seed=5)
        b = check_ghost_identity(samples=100, seed=5)
        assert a.measured == b.measured

    def test_rejects_empty_sample(self):
        with pytest.raises(ValueError):
            check_ghost_identity(samples=0)


class TestPoleGeometry:
    def test_moduli_exactly_one(self):
        # hand-derived: |(1 + ai)/(a + i)| = sqrt(1+a^2)/sqrt(a^2+1) = 1
        for theta in (0.0, 0.3, 0.5, 0.9, 1.0):
            mp, mm = pole_modulus(theta)
            assert mp == pytest.approx(1.0, abs=1e-14)
            assert mm == pytest.approx(1.0, abs=1e-14)

    def test_check_passes(self):
        rep = check_pole_geometry()
        assert rep.passed
        assert rep.measured <= 1e-12


class TestSelfAdjointness:
    @pytest.mark.parametrize("theta", [0.25, 0.5, 1.0])
    def test_defects_decay_second_order_or_exact(self, theta):
        rep = check_selfadjointness(theta, seed=2)
        assert rep.passed
        assert rep.measured >= 1.8

    def test_periodic_theta_rejected(self):
        with pytest.raises(ValueError):
            check_selfadjointness(0.0)


class TestExtension:
    def test_value_identity_exact_at_nodes(self):
        rng = np.random.default_rng(8)
        for alpha in (0.25, 1.0, 4.0):
            grid = GridSpec(32)
            u = rng.normal(size=33)
            v = extension_operator(u, alpha, grid)
            assert abs(alpha * v[-1] - v[0] - u[-1]) < 1e-13 * max(
                1.0, np.max(np.abs(u)))

    def test_linearity(self):
        rng = np.random.default_rng(9)
        grid = GridSpec(16)
        u, w = rng.normal(size=(2, 17))
        va = extension_operator(u + 2 * w, 0.5, grid)
        vb = extension_operator(u, 0.5, grid) \
            + 2 * extension_operator(w, 0.5, grid)
        assert np.allclose(va, vb, atol=1e-13)

    def test_check_passes_with_alpha_uniform_bound(self):
        rep = check_extension(seed=3)
        assert rep.passed
        assert rep.measured >= 1.8

    def test_shape_and_alpha_validation(self):
        with pytest.raises(ValueError):
            extension_operator(np.zeros(10), 1.0, GridSpec(16))
        with pytest.raises(ValueError):
            extension_operator(np.zeros(17), np.inf, GridSpec(16))


class TestConvergence:
    def test_manufactured_profile_satisfies_boundary_conditions(self):
        case = default_manufactured_case(theta=0.5)
        q = case.q
        dq = q.deriv()
        a = 1.0 - case.theta
        assert a * q(1.0) - q(0.0) == pytest.approx(0.0, abs=1e-14)
        assert dq(1.0) - a * dq(0.0) == pytest.approx(0.0, abs=1e-14)

    def test_spacetime_second_order(self):
        rep = convergence_study(mode="spacetime")
        assert rep.passed
        assert rep.measured >= 1.8

    def test_time_only_second_order(self):
        rep = convergence_study(mode="time")
        assert rep.passed
        assert rep.measured >= 1.8

    def test_unknown_mode_rejected(self):
        with pytest.raises(ValueError):
            convergence_study(mode="space")

    def test_too_few_refinements_rejected(self):
        with pytest.raises(ValueError):
            convergence_study(refinements=1)


class TestSuiteDriver:
    def test_all_runs_every_suite(self):
        reports = run_suite("all", seed=0)
        assert len(reports) >= len(SUITES)
        assert all(isinstance(r, CheckReport) for r in reports)

    def test_single_suite_by_name(self):
        reports = run_suite("poles")
        assert len(reports) == 1
        assert reports[0].name == "pole_geometry"

    def test_unknown_suite_rejected(self):
        with pytest.raises(ValueError):
            run_suite("bogus")

    def test_report_string_format(self):
        rep = CheckReport("demo", True, 1e-14, 1e-12, "note")
        s = str(rep)
        assert s.startswith("[pass] demo:")
        assert "measured=" in s and "tolerance=" in s
        assert "[FAIL]" in str(CheckReport("demo", False, 1.0, 0.5))

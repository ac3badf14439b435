"""Tests for the numerical self-check battery, including its negative controls."""

from __future__ import annotations

from conicsmc.validation import (
    CheckResult,
    check_decay_slopes,
    check_equivalent_control_transverse,
    check_f_inverse,
    check_frame_orthonormality,
    check_gain_bounds_monte_carlo,
    check_lyapunov_decrease,
    check_two_body_conservation,
    measure_decay_slope,
    run_all_checks,
)


class TestAlgebraicChecks:
    def test_frame_orthonormality_passes(self):
        result = check_frame_orthonormality(n=300)
        assert result.passed, result.detail

    def test_two_body_conservation_passes(self):
        result = check_two_body_conservation()
        assert result.passed, result.detail

    def test_f_inverse_passes(self):
        result = check_f_inverse(n=300)
        assert result.passed, result.detail

    def test_gain_bounds_passes(self):
        result = check_gain_bounds_monte_carlo(n=2000)
        assert result.passed, result.detail

    def test_gain_bounds_reports_counts(self):
        result = check_gain_bounds_monte_carlo(n=50)
        assert "0/50 violations" in result.detail


class TestEquivalentControl:
    def test_transverse_component_vanishes(self):
        result = check_equivalent_control_transverse(n=1000)
        assert result.passed, result.detail

    def test_injected_coupling_fault_is_caught(self):
        result = check_equivalent_control_transverse(n=1000, flip_f13=True)
        assert not result.passed


class TestLyapunovDecrease:
    def test_full_gains_never_increase_energy(self):
        result = check_lyapunov_decrease(n=500)
        assert result.passed, result.detail

    def test_halved_gains_are_caught(self):
        result = check_lyapunov_decrease(n=500, k_scale=0.5)
        assert not result.passed


class TestDecaySlopes:
    def test_measured_slope_tracks_radial_weight(self):
        slope = measure_decay_slope(1.0)
        assert abs(slope + 1.0) < 0.05

    def test_check_passes_for_single_weight(self):
        result = check_decay_slopes(lambdas=(2.0,))
        assert result.passed, result.detail

    def test_check_fails_under_tight_tolerance(self):
        result = check_decay_slopes(lambdas=(2.0,), rel_tol=1e-9)
        assert not result.passed


class TestBattery:
    def test_results_are_named_and_typed(self):
        quick = [
            check_frame_orthonormality(n=20),
            check_f_inverse(n=20),
            check_gain_bounds_monte_carlo(n=20),
        ]
        names = [r.name for r in quick]
        assert names == ["frame_orthonormality", "f_inverse", "gain_bounds_monte_carlo"]
        assert all(isinstance(r, CheckResult) for r in quick)
        assert all(isinstance(r.detail, str) and r.detail for r in quick)

    def test_run_all_checks_order(self, monkeypatch):
        # Order and naming only; the expensive defaults are exercised by the
        # acceptance suite.
        import conicsmc.validation as validation

        expected = [
            "frame_orthonormality",
            "two_body_conservation",
            "f_inverse",
            "equivalent_control_transverse",
            "decay_slopes",
            "gain_bounds_monte_carlo",
            "lyapunov_decrease",
        ]
        for name in expected:
            monkeypatch.setattr(
                validation,
                f"check_{name}",
                lambda name=name, **kw: CheckResult(name, True, "stub"),
            )
        results = run_all_checks()
        assert [r.name for r in results] == expected

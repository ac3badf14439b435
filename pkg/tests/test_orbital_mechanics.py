"""Invariant algebra: h, e_vec, energy, element conversions."""

from __future__ import annotations

import numpy as np
import pytest
from numpy.testing import assert_allclose

from conicsmc.errors import DegenerateState, InvalidTarget
from conicsmc.orbital_mechanics import (
    ConicElements,
    OrbitTarget,
    eccentricity_rtn,
    eccentricity_rtn_rate,
    eccentricity_vector,
    elements_from_target,
    mu_from_period,
    specific_angular_momentum,
    specific_energy,
    state_from_target,
    target_from_elements,
)
from conicsmc.rtn_frame import StateVector, build_frame, project_to_rtn, rtn_component_rates

from conftest import (
    propagate,
    random_bound_state,
    rk4_step,
    state_from_vis_viva,
    two_body_accel,
)


class TestAngularMomentum:
    def test_hand_cross_product(self):
        h = specific_angular_momentum(
            StateVector(np.array([0, 1000.0, 0]), np.array([0, 3.0, 4.0]))
        )
        assert_allclose(h, [4000.0, 0.0, 0.0])

    def test_parallel_gives_zero(self):
        h = specific_angular_momentum(
            StateVector(np.array([1.0, 2.0, 3.0]), np.array([2.0, 4.0, 6.0]))
        )
        assert_allclose(h, np.zeros(3), atol=1e-12)

    def test_conserved_over_one_period(self):
        mu = 1.7
        state = state_from_vis_viva(mu, 1.1, 0.4, 0.3)
        a = 1.1 / (1 - 0.4**2)
        period = 2 * np.pi * np.sqrt(a**3 / mu)
        h0 = specific_angular_momentum(state)
        final = propagate(state, two_body_accel(mu), period, 10_000)
        h1 = specific_angular_momentum(final)
        assert np.linalg.norm(h1 - h0) / np.linalg.norm(h0) < 1e-9


class TestEccentricityVector:
    def test_circular_is_zero(self):
        mu, R = 2.0, 1.3
        v = np.sqrt(mu / R)
        e = eccentricity_vector(
            StateVector(np.array([R, 0, 0]), np.array([0, v, 0])), mu
        )
        assert np.linalg.norm(e) < 1e-14

    def test_periapsis_construction_vis_viva(self):
        # Periapsis of an e = 0.5 conic with semi-latus rectum p: radius
        # p / (1 + e), speed sqrt(mu (1 + e)^2 / p), velocity transverse.
        mu, p, e = 1.9, 1.4, 0.5
        r_p = p / (1 + e)
        v_p = np.sqrt(mu * (1 + e) ** 2 / p)
        e_vec = eccentricity_vector(
            StateVector(np.array([r_p, 0, 0]), np.array([0, v_p, 0])), mu
        )
        assert_allclose(e_vec, [0.5, 0.0, 0.0], atol=1e-12)

    def test_conserved_over_one_period(self):
        mu = 0.8
        state = state_from_vis_viva(mu, 0.9, 0.55, -1.2)
        a = 0.9 / (1 - 0.55**2)
        period = 2 * np.pi * np.sqrt(a**3 / mu)
        e0 = eccentricity_vector(state, mu)
        final = propagate(state, two_body_accel(mu), period, 10_000)
        e1 = eccentricity_vector(final, mu)
        assert np.linalg.norm(e1 - e0) < 1e-9

    def test_closed_form_matches_projection_random(self, rng):
        for _ in range(1000):
            state, mu = random_bound_state(rng)
            frame = build_frame(state)
            via_frame = eccentricity_rtn(frame, mu)
            via_projection = project_to_rtn(eccentricity_vector(state, mu), frame)
            assert_allclose(via_frame, via_projection, atol=1e-10)
            assert via_frame[2] == 0.0

    def test_degenerate_radius(self):
        with pytest.raises(DegenerateState):
            eccentricity_vector(
                StateVector(np.array([1e-9, 0, 0]), np.array([0, 1.0, 0])), 1.0
            )


class TestEccentricityRate:
    def test_unforced_circular(self):
        mu, R = 1.0, 1.0
        v = np.sqrt(mu / R)
        frame = build_frame(StateVector(np.array([R, 0, 0]), np.array([0, v, 0])))
        rate = eccentricity_rtn_rate(frame, np.zeros(3), mu)
        assert_allclose(rate, [0.0, -frame.h / R**2, 0.0], atol=1e-14)

    def test_transverse_accel_first_component(self):
        mu = 1.3
        state = state_from_vis_viva(mu, 1.0, 0.2, 0.5)
        frame = build_frame(state)
        a_t = 0.07
        rate = eccentricity_rtn_rate(frame, np.array([0.0, a_t, 0.0]), mu)
        assert rate[0] == pytest.approx(2 * frame.h * a_t / mu, rel=1e-14)

    def test_unforced_two_body_vector_is_constant(self):
        # With only inverse-square gravity (a_R = -mu/r^2) the inertial
        # derivative of e_vec must vanish.
        for nu in (-2.0, -0.5, 0.4, 1.7):
            mu = 1.1
            state = state_from_vis_viva(mu, 1.3, 0.45, nu)
            frame = build_frame(state)
            gravity_rtn = np.array([-mu / frame.r**2, 0.0, 0.0])
            rate = eccentricity_rtn_rate(frame, gravity_rtn, mu)
            assert_allclose(rate, np.zeros(3), atol=1e-12)

    def test_component_rates_match_finite_difference(self):
        # Forced trajectory: reconstruct d/dt of the RTN components of e_vec
        # by chaining the vector rate through the frame rotation, then check
        # against central differences with second-order convergence.
        mu = 1.2
        push = np.array([0.03, -0.05, 0.08])

        def accel(t, state):
            return two_body_accel(mu)(t, state) + push

        state0 = state_from_vis_viva(mu, 1.1, 0.3, 0.9)
        frame0 = build_frame(state0)
        a_rtn = project_to_rtn(accel(0.0, state0), frame0)
        vec_rate = eccentricity_rtn_rate(frame0, a_rtn, mu)
        got = rtn_component_rates(
            eccentricity_rtn(frame0, mu), vec_rate, frame0, float(a_rtn[2])
        )

        def fd_error(dt):
            plus = propagate(state0, accel, dt, 8)
            f_plus = build_frame(plus)
            minus = propagate(
                StateVector(state0.r, -state0.v),
                lambda t, s: accel(-t, StateVector(s.r, -s.v, -t)),
                dt,
                8,
            )
            f_minus = build_frame(StateVector(minus.r, -minus.v))
            num = (eccentricity_rtn(f_plus, mu) - eccentricity_rtn(f_minus, mu)) / (
                2 * dt
            )
            return np.max(np.abs(num - got))

        e1 = fd_error(1e-3)
        e2 = fd_error(5e-4)
        assert e1 < 1e-5
        assert e2 < e1 / 3.0


class TestEnergy:
    def test_circular(self):
        mu, R = 3.0, 2.0
        v = np.sqrt(mu / R)
        E = specific_energy(StateVector(np.array([R, 0, 0]), np.array([0, v, 0])), mu)
        assert E == pytest.approx(-mu / (2 * R), rel=1e-14)

    def test_parabolic_is_zero(self):
        mu, p = 1.6, 1.2
        state = state_from_vis_viva(mu, p, 1.0, 0.8)
        assert abs(specific_energy(state, mu)) < 1e-9

    def test_conserved_over_one_period(self):
        mu = 1.4
        state = state_from_vis_viva(mu, 1.0, 0.3, 2.0)
        a = 1.0 / (1 - 0.09)
        period = 2 * np.pi * np.sqrt(a**3 / mu)
        E0 = specific_energy(state, mu)
        final = propagate(state, two_body_accel(mu), period, 10_000)
        assert abs(specific_energy(final, mu) - E0) / abs(E0) < 1e-9


class TestMuFromPeriod:
    def test_canonical_unit_orbit(self):
        assert mu_from_period(2 * np.pi, 1.0, 0.0) == pytest.approx(1.0, rel=1e-14)

    def test_round_trip_period(self, rng):
        for _ in range(50):
            mu = rng.uniform(0.3, 3.0)
            p = rng.uniform(0.5, 2.0)
            e = rng.uniform(0.0, 0.9)
            h = np.sqrt(mu * p)
            a = p / (1 - e * e)
            period = 2 * np.pi * np.sqrt(a**3 / mu)
            assert mu_from_period(period, h, e) == pytest.approx(mu, rel=1e-12)

    def test_open_orbit_rejected(self):
        with pytest.raises(InvalidTarget):
            mu_from_period(100.0, 1.0, 1.0)
        with pytest.raises(InvalidTarget):
            mu_from_period(100.0, 1.0, 1.5)


class TestTargetsAndElements:
    def test_equatorial_canonical(self):
        tgt = target_from_elements(ConicElements(p=1.0, e=0.3), mu=1.0)
        assert_allclose(tgt.h_d_vec, [0, 0, 1.0], atol=1e-15)
        assert_allclose(tgt.e_d_vec, [0.3, 0, 0], atol=1e-15)
        assert tgt.p == pytest.approx(1.0, rel=1e-14)

    def test_perpendicular_by_construction(self, rng):
        for _ in range(200):
            el = ConicElements(
                p=rng.uniform(0.5, 2),
                e=rng.uniform(0, 2.5),
                raan=rng.uniform(-np.pi, np.pi),
                inc=rng.uniform(0, np.pi),
                argp=rng.uniform(-np.pi, np.pi),
            )
            tgt = target_from_elements(el, mu=rng.uniform(0.5, 2))
            assert abs(tgt.h_d_vec @ tgt.e_d_vec) < 1e-9 * tgt.h_d

    def test_element_round_trip(self, rng):
        for _ in range(200):
            el = ConicElements(
                p=rng.uniform(0.5, 2),
                e=rng.uniform(0.05, 2.5),
                raan=rng.uniform(-np.pi, np.pi),
                inc=rng.uniform(0.05, np.pi - 0.05),
                argp=rng.uniform(-np.pi, np.pi),
            )
            tgt = target_from_elements(el, mu=1.3)
            back = elements_from_target(tgt)
            assert back.p == pytest.approx(el.p, rel=1e-10)
            assert back.e == pytest.approx(el.e, rel=1e-10)
            assert back.inc == pytest.approx(el.inc, rel=1e-8, abs=1e-10)
            for got, want in ((back.raan, el.raan), (back.argp, el.argp)):
                delta = (got - want + np.pi) % (2 * np.pi) - np.pi
                assert abs(delta) < 1e-8

    def test_invalid_inputs(self):
        with pytest.raises(InvalidTarget):
            ConicElements(p=-1.0, e=0.2)
        with pytest.raises(InvalidTarget):
            ConicElements(p=1.0, e=-0.2)
        with pytest.raises(InvalidTarget):
            OrbitTarget(np.zeros(3), np.array([0.1, 0, 0]), 1.0)
        with pytest.raises(InvalidTarget):
            OrbitTarget(np.array([0, 0, 1.0]), np.array([0, 0, 0.5]), 1.0)
        with pytest.raises(InvalidTarget):
            OrbitTarget(np.array([0, 0, 1.0]), np.array([0.1, 0, 0]), -1.0)


class TestStateFromTarget:
    def test_invariants_match_target(self, rng):
        for _ in range(200):
            e = rng.uniform(0, 2.0)
            el = ConicElements(
                p=rng.uniform(0.5, 2),
                e=e,
                raan=rng.uniform(-np.pi, np.pi),
                inc=rng.uniform(0, np.pi),
                argp=rng.uniform(-np.pi, np.pi),
            )
            tgt = target_from_elements(el, mu=rng.uniform(0.5, 2))
            nu_max = np.pi if e < 1 else np.arccos(-1 / e) - 0.1
            nu = rng.uniform(-nu_max, nu_max)
            state = state_from_target(tgt, nu)
            assert_allclose(
                specific_angular_momentum(state), tgt.h_d_vec, rtol=1e-10, atol=1e-12
            )
            assert_allclose(
                eccentricity_vector(state, tgt.mu), tgt.e_d_vec, rtol=1e-9, atol=1e-10
            )

    def test_circular_target_any_anomaly(self):
        tgt = OrbitTarget(np.array([0, 0, 2.0]), np.zeros(3), 1.5)
        state = state_from_target(tgt, 1.1)
        assert np.linalg.norm(state.r) == pytest.approx(tgt.p, rel=1e-12)
        assert np.linalg.norm(eccentricity_vector(state, 1.5)) < 1e-12

    def test_hyperbolic_branch_guard(self):
        tgt = target_from_elements(ConicElements(p=1.0, e=2.0), mu=1.0)
        with pytest.raises(InvalidTarget):
            state_from_target(tgt, np.pi)

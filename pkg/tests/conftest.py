"""Shared fixtures and oracle helpers for the test suite.

Numerical oracles here are deliberately written from primitive formulas
(cross products, vis-viva, finite differences) rather than through the
library code paths they are meant to check.
"""

from __future__ import annotations

import numpy as np
import pytest

from conicsmc.rtn_frame import StateVector


@pytest.fixture
def rng():
    return np.random.default_rng(20260822)


def two_body_accel(mu):
    """Pure inverse-square acceleration field, independent of the library."""

    def accel(t, state):
        r = state.r
        rn = np.linalg.norm(r)
        return -mu * r / rn**3

    return accel


def rk4_step(state: StateVector, accel_fn, dt: float) -> StateVector:
    """Reference classical RK4 step used to manufacture test trajectories."""
    t, r, v = state.t, state.r, state.v
    a1 = accel_fn(t, state)
    r2, v2 = r + 0.5 * dt * v, v + 0.5 * dt * a1
    a2 = accel_fn(t + 0.5 * dt, StateVector(r2, v2, t + 0.5 * dt))
    r3, v3 = r + 0.5 * dt * v2, v + 0.5 * dt * a2
    a3 = accel_fn(t + 0.5 * dt, StateVector(r3, v3, t + 0.5 * dt))
    r4, v4 = r + dt * v3, v + dt * a3
    a4 = accel_fn(t + dt, StateVector(r4, v4, t + dt))
    r_new = r + dt / 6.0 * (v + 2 * v2 + 2 * v3 + v4)
    v_new = v + dt / 6.0 * (a1 + 2 * a2 + 2 * a3 + a4)
    return StateVector(r_new, v_new, t + dt)


def propagate(state: StateVector, accel_fn, t_end: float, n_steps: int) -> StateVector:
    dt = t_end / n_steps
    for _ in range(n_steps):
        state = rk4_step(state, accel_fn, dt)
    return state


def state_from_vis_viva(mu, p, e, nu, e_hat=None, h_hat=None):
    """Conic state built from first principles (vis-viva and conic geometry).

    Position at true anomaly nu on the conic with semi-latus rectum p and
    eccentricity e; periapsis along e_hat, orbit normal along h_hat.
    """
    e_hat = np.array([1.0, 0.0, 0.0]) if e_hat is None else np.asarray(e_hat, float)
    h_hat = np.array([0.0, 0.0, 1.0]) if h_hat is None else np.asarray(h_hat, float)
    q_hat = np.cross(h_hat, e_hat)
    r = p / (1.0 + e * np.cos(nu))
    h = np.sqrt(mu * p)
    r_vec = r * (np.cos(nu) * e_hat + np.sin(nu) * q_hat)
    v_r = mu / h * e * np.sin(nu)
    v_t = h / r
    r_hat = r_vec / r
    t_hat = np.cross(h_hat, r_hat)
    return StateVector(r_vec, v_r * r_hat + v_t * t_hat, 0.0)


def random_bound_state(rng, mu_range=(0.5, 2.0)):
    """Random elliptic state in near-canonical units; returns (state, mu)."""
    mu = rng.uniform(*mu_range)
    p = rng.uniform(0.5, 2.0)
    e = rng.uniform(0.0, 0.8)
    nu = rng.uniform(-np.pi, np.pi)
    z_axis = random_unit(rng)
    x_axis = perpendicular_unit(rng, z_axis)
    return state_from_vis_viva(mu, p, e, nu, e_hat=x_axis, h_hat=z_axis), mu


def random_unit(rng):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def perpendicular_unit(rng, axis):
    v = rng.normal(size=3)
    v -= (v @ axis) * axis
    return v / np.linalg.norm(v)

"""Numerical self-checks runnable as a release gate.

Each check returns a :class:`CheckResult` rather than raising, so the CLI
can print a table and the full battery always runs.  Two checks accept a
deliberate-fault switch (``flip_f13``, ``k_scale``) used as negative
controls: a run with the fault injected must fail, proving the check has
teeth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .orbital_mechanics import (
    OrbitTarget,
    eccentricity_rtn,
    eccentricity_rtn_rate,
    state_from_target,
)
from .plant_sim import PlantModels, PointMassGravity, SimConfig, run_simulation
from .rtn_frame import StateVector, build_frame, project_to_rtn, rtn_component_rates
from .scenarios import build_scenario, run_scenario
from .sliding_controller import (
    ControllerConfig,
    build_F_G,
    gains_from_bounds,
    solve_upper_triangular,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _random_state_and_target(rng: np.random.Generator, max_tilt: float = 0.6):
    """Generic bound state plus a nearby hyperbola-or-ellipse target."""
    mu = 10.0 ** rng.uniform(2.0, 6.5)
    r_mag = 10.0 ** rng.uniform(1.0, 3.5)
    r = r_mag * _random_unit(rng)
    t_dir = np.cross(r, _random_unit(rng))
    while np.linalg.norm(t_dir) < 1e-6:
        t_dir = np.cross(r, _random_unit(rng))
    t_hat = t_dir / np.linalg.norm(t_dir)
    v_circ = math.sqrt(mu / r_mag)
    v = v_circ * (rng.uniform(0.7, 1.3) * t_hat + rng.uniform(-0.3, 0.3) * r / r_mag)
    state = StateVector(r, v)

    h_vec = np.cross(r, v)
    h_hat = h_vec / np.linalg.norm(h_vec)
    tilt_axis = np.cross(h_hat, _random_unit(rng))
    tilt_axis /= np.linalg.norm(tilt_axis)
    ang = rng.uniform(0.0, max_tilt)
    n_hat = (
        math.cos(ang) * h_hat
        + math.sin(ang) * np.cross(tilt_axis, h_hat)
    )
    n_hat /= np.linalg.norm(n_hat)
    e_dir = np.cross(n_hat, _random_unit(rng))
    e_dir /= np.linalg.norm(e_dir)
    e_mag = rng.uniform(0.05, 0.8)
    h_d = np.linalg.norm(h_vec) * rng.uniform(0.7, 1.3)
    return state, OrbitTarget(h_d * n_hat, e_mag * e_dir, mu)


def _random_unit(rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(3)
    return v / np.linalg.norm(v)


def check_frame_orthonormality(n: int = 2000, seed: int = 1) -> CheckResult:
    """Unit lengths and right-handedness of the orbit-local frame."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        state, _ = _random_state_and_target(rng)
        f = build_frame(state)
        worst = max(
            worst,
            abs(np.linalg.norm(f.r_hat) - 1.0),
            abs(np.linalg.norm(f.theta_hat) - 1.0),
            abs(np.linalg.norm(f.h_hat) - 1.0),
            float(np.max(np.abs(np.cross(f.r_hat, f.theta_hat) - f.h_hat))),
        )
    return CheckResult(
        "frame_orthonormality", worst < 1e-12, f"worst deviation {worst:.2e}"
    )


def check_two_body_conservation() -> CheckResult:
    """Inverse-square propagation must conserve both orbit invariants."""
    mu = 1000.0
    target = OrbitTarget(
        np.array([0.0, 0.0, math.sqrt(mu * 10.0)]),
        np.array([0.3, 0.0, 0.0]),
        mu,
    )
    state = state_from_target(target, 0.3)
    a = (target.h_d**2 / mu) / (1.0 - 0.3**2)
    period = 2.0 * math.pi * math.sqrt(a**3 / mu)
    sim = SimConfig(dt=period / 1e4, duration=period)
    config = ControllerConfig(D_R=0.0, D_T=0.0, D_N=0.0)
    log = run_simulation(
        state,
        [target],
        config,
        sim,
        PlantModels(known=(PointMassGravity(mu),)),
    )
    h0, hN = log.h_vec[0], log.h_vec[-1]
    e0, eN = log.e_vec[0], log.e_vec[-1]
    E0, EN = log.energy[0], log.energy[-1]
    drift = max(
        float(np.linalg.norm(hN - h0)) / float(np.linalg.norm(h0)),
        float(np.linalg.norm(eN - e0)),
        abs((EN - E0) / E0),
    )
    return CheckResult(
        "two_body_conservation", drift < 1e-9, f"max invariant drift {drift:.2e}"
    )


def check_f_inverse(n: int = 2000, seed: int = 2) -> CheckResult:
    """Triangular solve against the dense inverse, plus the determinant."""
    rng = np.random.default_rng(seed)
    config = ControllerConfig(D_R=1.0, D_T=1.0, D_N=1.0)
    worst = 0.0
    for _ in range(n):
        state, target = _random_state_and_target(rng)
        frame = build_frame(state)
        F, G = build_F_G(frame, target, config)
        y = rng.standard_normal(3)
        x = solve_upper_triangular(F, y)
        ref = np.linalg.solve(F, y)
        scale = max(1.0, float(np.max(np.abs(ref))))
        worst = max(worst, float(np.max(np.abs(x - ref))) / scale)
        h_dn = float(target.h_d_vec @ frame.h_hat) / target.h_d
        det_expected = -(frame.r**2) * h_dn / target.mu
        worst = max(
            worst,
            abs(np.linalg.det(F) - det_expected)
            / max(abs(det_expected), 1e-300),
        )
    return CheckResult("f_inverse", worst < 1e-9, f"worst residual {worst:.2e}")


def _surface_rate_from_primitives(frame, target, config, a_rtn) -> np.ndarray:
    """Surface derivative assembled from the component-rate primitives.

    Independent of the controller's matrix route: eccentricity-error and
    plane rates come from the rotating-component rules, the momentum rate
    from the torque cross product.
    """
    mu = target.mu
    a_rtn = np.asarray(a_rtn, float)
    a_n = float(a_rtn[2])
    e_rtn = eccentricity_rtn(frame, mu)
    e_dot = rtn_component_rates(
        e_rtn, eccentricity_rtn_rate(frame, a_rtn, mu), frame, a_n
    )
    e_d_dot = rtn_component_rates(
        project_to_rtn(target.e_d_vec, frame), np.zeros(3), frame, a_n
    )
    et_dot = e_dot - e_d_dot
    hd_dot = rtn_component_rates(
        project_to_rtn(target.h_d_hat, frame), np.zeros(3), frame, a_n
    )
    r_vec = frame.r * frame.r_hat
    a_vec = (
        a_rtn[0] * frame.r_hat
        + a_rtn[1] * frame.theta_hat
        + a_rtn[2] * frame.h_hat
    )
    h_mag_dot = float(frame.h_hat @ np.cross(r_vec, a_vec))
    return np.array(
        [
            float(et_dot[1]) + config.lambda_R * float(et_dot[0]),
            h_mag_dot,
            float(hd_dot[1]) + config.lambda_N * float(hd_dot[0]),
        ]
    )


def check_equivalent_control_transverse(
    n: int = 10000, seed: int = 3, flip_f13: bool = False
) -> CheckResult:
    """The drift-cancelling command must freeze all three surfaces.

    The command solved from the surface-dynamics matrices is fed back into
    the independent component-rate primitives; all three resulting rates
    must vanish, and the transverse command component must be exactly zero.
    ``flip_f13`` negates the first-row coupling term before solving, a
    deliberate fault that must make this check fail.
    """
    rng = np.random.default_rng(seed)
    config = ControllerConfig(D_R=1.0, D_T=1.0, D_N=1.0)
    worst_t = 0.0
    worst_rate = 0.0
    for _ in range(n):
        state, target = _random_state_and_target(rng)
        frame = build_frame(state)
        F, G = build_F_G(frame, target, config)
        if flip_f13:
            F = F.copy()
            F[0, 2] = -F[0, 2]
        a_eq = -solve_upper_triangular(F, G)
        worst_t = max(worst_t, abs(float(a_eq[1])))
        rate = _surface_rate_from_primitives(frame, target, config, a_eq)
        scale = max(1.0, float(np.max(np.abs(G))))
        worst_rate = max(worst_rate, float(np.max(np.abs(rate))) / scale)
    return CheckResult(
        "equivalent_control_transverse",
        worst_t < 1e-12 and worst_rate < 1e-9,
        f"worst |transverse| {worst_t:.2e}; worst frozen-rate {worst_rate:.2e}",
    )


def check_decay_slopes(
    lambdas: tuple = (0.5, 1.0, 2.0, 4.0), rel_tol: float = 0.05
) -> CheckResult:
    """Closed-loop error decay per swept radian must match the surface slope."""
    worst_rel = 0.0
    details = []
    for lam in lambdas:
        slope = measure_decay_slope(lam)
        rel = abs(slope + lam) / lam
        worst_rel = max(worst_rel, rel)
        details.append(f"lam={lam:g}: slope={slope:.4f}")
    return CheckResult(
        "decay_slopes", worst_rel < rel_tol, "; ".join(details)
    )


def measure_decay_slope(lambda_R: float) -> float:
    """Regression slope of log radial error against swept polar angle."""
    scenario = build_scenario("decay", {"lambda_R": lambda_R})
    log, _ = run_scenario(scenario)
    target = scenario.targets[0]
    r_mag = np.linalg.norm(log.r, axis=1)
    rate = np.linalg.norm(log.h_vec, axis=1) / r_mag**2
    theta = np.concatenate(
        [[0.0], np.cumsum(0.5 * (rate[1:] + rate[:-1]) * np.diff(log.t))]
    )
    r_hat = log.r / r_mag[:, None]
    e_tilde_r = np.einsum("ij,ij->i", log.e_vec - target.e_d_vec, r_hat)
    mask = np.abs(e_tilde_r) > 1e-10
    A = np.vstack([theta[mask], np.ones(int(mask.sum()))]).T
    slope, _ = np.linalg.lstsq(A, np.log(np.abs(e_tilde_r[mask])), rcond=None)[0]
    return float(slope)


def check_gain_bounds_monte_carlo(n: int = 10000, seed: int = 4) -> CheckResult:
    """Row gains must dominate every in-bounds disturbance projection."""
    rng = np.random.default_rng(seed)
    bounds = np.array([2.0, 3.0, 1.5])
    config = ControllerConfig(
        D_R=bounds[0], D_T=bounds[1], D_N=bounds[2], switching="sign"
    )
    violations = 0
    worst_margin = np.inf
    for _ in range(n):
        state, target = _random_state_and_target(rng)
        frame = build_frame(state)
        F, _ = build_F_G(frame, target, config)
        K = gains_from_bounds(frame, target, config)
        d = rng.uniform(-1.0, 1.0, 3) * bounds
        proj = np.abs(F @ d)
        margin = float(np.min(K - proj))
        worst_margin = min(worst_margin, margin)
        if np.any(proj > K * (1.0 + 1e-12)):
            violations += 1
    return CheckResult(
        "gain_bounds_monte_carlo",
        violations == 0,
        f"{violations}/{n} violations; worst margin {worst_margin:.2e}",
    )


def check_lyapunov_decrease(
    n: int = 4000, seed: int = 5, k_scale: float = 1.0
) -> CheckResult:
    """Worst-case disturbance must never push the surface energy uphill.

    With sign switching the closed-loop surface rate is ``F d - K sgn(s)``;
    against the adversarial ``d_j = D_j sgn((F^T s)_j)`` the energy rate
    ``s . ds`` must stay nonpositive.  ``k_scale`` scales the gains; passing
    0.5 is a negative control that must produce violations.
    """
    rng = np.random.default_rng(seed)
    bounds = np.array([2.0, 3.0, 1.5])
    config = ControllerConfig(
        D_R=bounds[0], D_T=bounds[1], D_N=bounds[2], switching="sign"
    )
    violations = 0
    worst = -np.inf
    for _ in range(n):
        state, target = _random_state_and_target(rng)
        frame = build_frame(state)
        F, G = build_F_G(frame, target, config)
        K = k_scale * gains_from_bounds(frame, target, config)
        s = rng.standard_normal(3) * 10.0 ** rng.uniform(-3, 1)
        d = bounds * np.sign(F.T @ s)
        v_dot = float(s @ (F @ d - K * np.sign(s)))
        worst = max(worst, v_dot)
        if v_dot > 1e-12 * max(1.0, float(np.abs(s).sum())):
            violations += 1
    return CheckResult(
        "lyapunov_decrease",
        violations == 0,
        f"{violations}/{n} violations; worst rate {worst:.2e}",
    )


def run_all_checks() -> list[CheckResult]:
    """The full battery in a stable order."""
    return [
        check_frame_orthonormality(),
        check_two_body_conservation(),
        check_f_inverse(),
        check_equivalent_control_transverse(),
        check_decay_slopes(),
        check_gain_bounds_monte_carlo(),
        check_lyapunov_decrease(),
    ]


__all__ = [
    "CheckResult",
    "check_decay_slopes",
    "check_equivalent_control_transverse",
    "check_f_inverse",
    "check_frame_orthonormality",
    "check_gain_bounds_monte_carlo",
    "check_lyapunov_decrease",
    "check_two_body_conservation",
    "measure_decay_slope",
    "run_all_checks",
]

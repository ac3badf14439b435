"""Acceptance suite: the twelve guarantees this package commits to.

Each test checks one end-to-end criterion at its stated tolerance and
prints a single PASS/FAIL summary line on the live terminal.  Long runs
are shared through module-scoped fixtures.
"""

from __future__ import annotations

import json
import math
import time

import numpy as np
import pytest

from conicsmc.cli import EXIT_OK, main
from conicsmc.errors import DegenerateState, NumericalBlowup
from conicsmc.orbital_mechanics import (
    OrbitTarget,
    eccentricity_vector,
    specific_energy,
    state_from_target,
)
from conicsmc.plant_sim import (
    ConstantAccel,
    PlantModels,
    PointMassGravity,
    SimConfig,
    run_simulation,
    step_rk4,
)
from conicsmc.rtn_frame import StateVector
from conicsmc.scenarios import build_scenario, run_scenario
from conicsmc.sliding_controller import ControllerConfig
from conicsmc.validation import (
    check_decay_slopes,
    check_equivalent_control_transverse,
    check_gain_bounds_monte_carlo,
    check_lyapunov_decrease,
)


def _report(capsys, num: int, name: str, ok: bool, detail: str) -> None:
    with capsys.disabled():
        print(f"[AC-{num:02d}] {'PASS' if ok else 'FAIL'} {name}: {detail}")
    assert ok, f"{name}: {detail}"


def _timed_run(name: str, overrides: dict | None = None):
    scenario = build_scenario(name, overrides or {})
    start = time.perf_counter()
    log, report = run_scenario(scenario)
    return scenario, log, report, time.perf_counter() - start


@pytest.fixture(scope="module")
def mpf_sat():
    return _timed_run("mpf")


@pytest.fixture(scope="module")
def mpf_sign():
    return _timed_run("mpf", {"switching": "sign"})


@pytest.fixture(scope="module")
def hyper_sat():
    return _timed_run("hyperbolas")


@pytest.fixture(scope="module")
def hyper_sign():
    return _timed_run("hyperbolas", {"switching": "sign"})


@pytest.fixture(scope="module")
def ito_sat():
    return _timed_run("itokawa")


@pytest.fixture(scope="module")
def ito_sign():
    return _timed_run("itokawa", {"switching": "sign", "duration": 3600.0})


@pytest.fixture(scope="module")
def ito_uncontrolled():
    """Same start with thrust disabled for the whole window; six hours."""
    scenario = build_scenario(
        "itokawa", {"duration": 21600.0, "blackout": [0.0, 21600.0]}
    )
    start = time.perf_counter()
    try:
        log, _ = run_scenario(scenario)
        outcome = ("completed", log)
    except (DegenerateState, NumericalBlowup) as exc:
        outcome = ("crashed", exc)
    return scenario, outcome, time.perf_counter() - start


def _two_body_case():
    mu = 1e5
    a, ecc = 150.0, 0.3
    target = OrbitTarget(
        np.array([0.0, 0.0, math.sqrt(mu * a * (1.0 - ecc**2))]),
        np.array([ecc, 0.0, 0.0]),
        mu,
    )
    state = state_from_target(target, 0.3)
    period = 2.0 * math.pi * math.sqrt(a**3 / mu)

    def accel(t, st):
        r_mag = float(np.linalg.norm(st.r))
        return -mu / r_mag**3 * st.r

    return mu, state, period, accel


def _propagate_period(state, period, accel, n_steps: int) -> StateVector:
    dt = period / n_steps
    current = StateVector(state.r, state.v, 0.0)
    for _ in range(n_steps):
        current = step_rk4(current, accel, dt)
    return current


def _first_sustained_rows(ok_rows: np.ndarray, need: int) -> int | None:
    run = 0
    for i, ok in enumerate(ok_rows):
        run = run + 1 if ok else 0
        if run >= need:
            return i - need + 1
    return None


class TestAcceptance:
    def test_criterion_01_two_body_conservation(self, capsys):
        mu, state, period, accel = _two_body_case()
        start = time.perf_counter()
        final = _propagate_period(state, period, accel, 10000)
        elapsed = time.perf_counter() - start
        h0, hN = np.cross(state.r, state.v), np.cross(final.r, final.v)
        dh = float(np.linalg.norm(hN - h0) / np.linalg.norm(h0))
        de = float(
            np.linalg.norm(
                eccentricity_vector(final, mu) - eccentricity_vector(state, mu)
            )
        )
        dE = abs(
            (specific_energy(final, mu) - specific_energy(state, mu))
            / specific_energy(state, mu)
        )
        ok = dh < 1e-9 and de < 1e-9 and dE < 1e-9 and elapsed < 1.0
        _report(
            capsys, 1, "two-body conservation", ok,
            f"dh={dh:.1e} de={de:.1e} dE={dE:.1e} ({elapsed:.2f}s)",
        )

    def test_criterion_02_radial_error_decay_slopes(self, capsys):
        start = time.perf_counter()
        result = check_decay_slopes(lambdas=(0.5, 1.0, 2.0, 4.0), rel_tol=0.05)
        elapsed = time.perf_counter() - start
        ok = result.passed and elapsed < 30.0
        _report(
            capsys, 2, "error decay slopes", ok,
            f"{result.detail} ({elapsed:.1f}s)",
        )

    def test_criterion_03_plane_capture(self, capsys):
        # Normal-only control, switching gain set exactly at the normal
        # disturbance bound, initial plane error of 60 degrees.
        mu = 1e5
        r0 = np.array([150.0, 0.0, 0.0])
        v0 = np.array([0.0, math.sqrt(mu / 150.0), 0.0])
        beta0 = math.radians(60.0)
        target = OrbitTarget(
            150.0 * v0[1] * np.array([math.sin(beta0), 0.0, math.cos(beta0)]),
            np.zeros(3),
            mu,
        )
        config = ControllerConfig(
            D_R=1e-3, D_T=1e-3, D_N=0.2,
            mode="plane_only", switching="saturation", lambda_N=2.0,
        )
        log = run_simulation(
            StateVector(r0, v0),
            [target],
            config,
            SimConfig(dt=0.02, duration=300.0),
            PlantModels(
                known=(PointMassGravity(mu),),
                disturbances=(ConstantAccel((0.0024, 0.0, -0.0032)),),
            ),
        )
        beta_deg = np.degrees(log.beta)
        in_band = np.abs(log.s[:, 2]) <= log.phi[:, 2]
        cap = _first_sustained_rows(in_band, 10)
        ripple = float("inf")
        if cap is not None:
            tail = beta_deg[cap:]
            ripple = float((tail - np.minimum.accumulate(tail)).max())
        ok = (
            abs(beta_deg[0] - 60.0) < 1e-9
            and float(beta_deg[-1]) < 0.5
            and cap is not None
            and ripple <= 0.5
        )
        _report(
            capsys, 3, "plane capture", ok,
            f"beta end={beta_deg[-1]:.4f} deg, ripple={ripple:.4f} deg",
        )

    def test_criterion_04_equivalent_control_transverse(self, capsys):
        result = check_equivalent_control_transverse(n=10000)
        _report(
            capsys, 4, "equivalent control transverse", result.passed,
            result.detail,
        )

    def test_criterion_05_gain_bounds_with_negative_control(self, capsys):
        positive = check_gain_bounds_monte_carlo(n=10000)
        negative = check_lyapunov_decrease(k_scale=0.5)
        ok = positive.passed and not negative.passed
        _report(
            capsys, 5, "gain bounds + negative control", ok,
            f"{positive.detail}; halved gains -> {negative.detail}",
        )

    def test_criterion_06_lyapunov_decrease_outside_layer(
        self, capsys, mpf_sign, hyper_sign, ito_sign
    ):
        details = []
        ok = True
        for label, bundle in (
            ("mpf", mpf_sign), ("hyperbolas", hyper_sign), ("itokawa", ito_sign)
        ):
            _, log, _, _ = bundle
            V = log.lyapunov
            outside = (np.abs(log.s) > log.phi).all(axis=1)
            # Clamped ticks deliver a different command than the law under
            # test, so the decrease guarantee does not cover them.
            usable = outside & ~log.blackout & ~log.saturated.any(axis=1)
            same_target = log.active_target[1:] == log.active_target[:-1]
            pairs = usable[:-1] & usable[1:] & same_target
            pairs[-1] = False
            count = int(pairs.sum())
            bad = int(np.sum(V[1:][pairs] >= V[:-1][pairs]))
            ok &= count > 0 and bad == 0
            details.append(f"{label}: {bad}/{count} non-decreasing pairs")
        _report(capsys, 6, "surface energy decrease", ok, "; ".join(details))

    def test_criterion_07_moving_point_end_to_end(self, capsys, mpf_sat):
        scenario, log, report, elapsed = mpf_sat
        target = scenario.targets[0]
        h_d = float(np.linalg.norm(target.h_d_vec))
        h_vec_err = float(np.linalg.norm(log.h_vec[-1] - target.h_d_vec)) / h_d
        blackout_start, blackout_end = scenario.sim.blackout
        cap = report.capture_time["all"]
        recap = report.recapture_time_after_blackout
        ok = (
            cap is not None
            and cap < blackout_start
            and recap is not None
            and recap <= blackout_end + 60.0
            and report.terminal_h_error_rel < 0.01
            and h_vec_err < 0.01
            and report.terminal_e_error < 0.01
            and report.terminal_beta_deg < 1.0
            and elapsed < 60.0
        )
        _report(
            capsys, 7, "moving-point end-to-end", ok,
            f"capture={cap}s recapture={recap}s h_err={h_vec_err:.4f} "
            f"e_err={report.terminal_e_error:.4f} "
            f"beta={report.terminal_beta_deg:.3f} deg ({elapsed:.1f}s)",
        )

    def test_criterion_08_chattering_mitigation(self, capsys, mpf_sat, mpf_sign):
        sat_index = mpf_sat[2].chattering_index
        sign_index = mpf_sign[2].chattering_index
        ok = (
            sat_index is not None
            and sign_index is not None
            and sat_index <= 2.0
            and sign_index >= 10.0 * sat_index
        )
        _report(
            capsys, 8, "chattering mitigation", ok,
            f"saturation={sat_index:.3f}/100 sign={sign_index:.1f}/100",
        )

    def test_criterion_09_hyperbola_legs(self, capsys, hyper_sat):
        scenario, log, _, _ = hyper_sat
        active = log.active_target.astype(int)
        visited = [int(active[0])]
        for value in active[1:]:
            if value != visited[-1]:
                visited.append(int(value))
        ok = visited == [0, 1, 2]
        mins = []
        for leg, target in enumerate(scenario.targets):
            ok &= float(np.linalg.norm(target.e_d_vec)) > 1.0
            rows = active == leg
            err = np.linalg.norm(
                log.e_vec[rows] - target.e_d_vec, axis=1
            )
            best = float(err.min()) if rows.any() else float("inf")
            mins.append(best)
            ok &= best < 0.02
        _report(
            capsys, 9, "hyperbola checkpoint legs", ok,
            "min errors " + ", ".join(f"{m:.4f}" for m in mins)
            + f"; order {visited}",
        )

    def test_criterion_10_small_body_station_keeping(
        self, capsys, ito_sat, ito_uncontrolled
    ):
        scenario, log, report, elapsed = ito_sat
        target = scenario.targets[0]
        h_d = float(np.linalg.norm(target.h_d_vec))
        cap = report.capture_time["all"]
        ok = cap is not None and cap < 300.0
        h_err = e_err = float("nan")
        if cap is not None:
            rows = log.t >= cap
            h_err = float(
                np.linalg.norm(log.h_vec[rows] - target.h_d_vec, axis=1).max()
            ) / h_d
            e_err = float(
                np.linalg.norm(log.e_vec[rows] - target.e_d_vec, axis=1).max()
            )
            ok &= h_err < 0.02 and e_err < 0.02
        ok &= 0.4 <= report.delta_v_total <= 5.0

        unc_scenario, outcome, unc_elapsed = ito_uncontrolled
        kind, payload = outcome
        if kind == "crashed":
            diverged = f"crashed ({payload})"
        else:
            unc_log = payload
            dumbbell = next(
                m.dumbbell for m in unc_scenario.disturbances
                if getattr(m, "kind", "") == "dumbbell_residual"
            )
            hit_t = None
            for t, r in zip(unc_log.t, unc_log.r):
                p1, p2 = dumbbell.lobe_positions(t)
                if min(
                    np.linalg.norm(r - p1), np.linalg.norm(r - p2)
                ) <= 110.0:
                    hit_t = t
                    break
            r_end = float(np.linalg.norm(unc_log.r[-1]))
            escaped = r_end > 5000.0 and float(unc_log.energy[-1]) > 0.0
            if hit_t is not None:
                diverged = f"surface hit at {hit_t / 3600.0:.2f} h"
            elif escaped:
                diverged = "escaped"
            else:
                diverged = None
        ok &= diverged is not None
        ok &= elapsed + unc_elapsed < 300.0
        _report(
            capsys, 10, "small-body station keeping", ok,
            f"capture={cap}s dv={report.delta_v_total:.3f} m/s "
            f"h_err={h_err:.4f} e_err={e_err:.4f}; uncontrolled "
            f"{diverged or 'stayed bound'} "
            f"({elapsed:.0f}s+{unc_elapsed:.0f}s)",
        )

    def test_criterion_11_integrator_order(self, capsys):
        _, state, period, accel = _two_body_case()
        err_coarse = float(
            np.linalg.norm(_propagate_period(state, period, accel, 1600).r - state.r)
        )
        err_fine = float(
            np.linalg.norm(_propagate_period(state, period, accel, 3200).r - state.r)
        )
        ratio = err_coarse / err_fine
        ok = 16.0 * 0.8 <= ratio <= 16.0 * 1.2
        _report(
            capsys, 11, "integrator order", ok,
            f"halving error ratio {ratio:.2f}",
        )

    def test_criterion_12_manifest_determinism(self, capsys, tmp_path):
        first = tmp_path / "first"
        second = tmp_path / "second"
        third = tmp_path / "third"
        rc = main(["run", "decay", "--out", str(first),
                   "--override", "duration=5"])
        ok = rc == EXIT_OK
        manifest = first / "manifest.json"
        for out in (second, third):
            ok &= main(["run", "--config", str(manifest),
                        "--out", str(out)]) == EXIT_OK
        identical = True
        for name in ("decay_metrics.json", "decay_trajectory.csv"):
            identical &= (
                (second / name).read_bytes() == (third / name).read_bytes()
            )
            identical &= (
                (first / name).read_bytes() == (second / name).read_bytes()
            )
        ok &= identical
        metrics = json.loads((second / "decay_metrics.json").read_text())
        _report(
            capsys, 12, "manifest determinism", ok,
            f"bit-identical={identical} "
            f"(dv={metrics['delta_v_total']:.6f} m/s)",
        )

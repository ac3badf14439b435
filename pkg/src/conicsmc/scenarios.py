"""Built-in closed-loop scenarios, metrics, and their serialization.

Four reference setups exercise the controller across conic families:

* ``mpf``: ellipse around a point moving on a sinusoidal path, with a
  command blackout and per-axis actuator saturation.
* ``hyperbolas``: patched hyperbolic legs relative to three fixed
  checkpoints, switching to whichever checkpoint is closest.
* ``itokawa``: slow orbit about a small lumpy body; only the point-mass
  part of gravity is known to the controller.
* ``decay``: clean single-knob setup whose initial state sits exactly on
  the sliding surface, used to measure the on-surface error decay rate
  against the configured gain.

Scenario objects serialize to plain dictionaries (JSON-friendly) and back,
so a run manifest fully reproduces a run.
"""

from __future__ import annotations

import inspect
import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .errors import ConfigError
from .orbital_mechanics import (
    OrbitTarget,
    mu_from_period,
    state_from_target,
)
from .plant_sim import (
    ConstantAccel,
    DumbbellResidual,
    ForceModel,
    MovingPoint,
    PlantModels,
    PointMassGravity,
    RotatingDumbbell,
    SimConfig,
    SinusoidalAccel,
    SrpCannonball,
    TrajectoryLog,
    force_model_from_dict,
    run_simulation,
)
from .rtn_frame import StateVector
from .sliding_controller import ControllerConfig

# Consecutive in-band control ticks required before a surface counts as
# captured.
CAPTURE_TICKS = 10

# Relative hysteresis band of the checkpoint switch: the active checkpoint
# is kept unless another one is closer by more than this fraction.
SWITCH_HYSTERESIS = 0.01


@dataclass(frozen=True, eq=False)
class Scenario:
    """Complete, serializable description of one closed-loop run."""

    name: str
    description: str
    initial_r: np.ndarray
    initial_v: np.ndarray
    targets: tuple[OrbitTarget, ...]
    controller: ControllerConfig
    sim: SimConfig
    checkpoints: np.ndarray | None = None
    known: tuple[ForceModel, ...] = ()
    disturbances: tuple[ForceModel, ...] = ()
    moving_point: dict | None = None

    def __post_init__(self):
        object.__setattr__(self, "initial_r", np.asarray(self.initial_r, float))
        object.__setattr__(self, "initial_v", np.asarray(self.initial_v, float))
        object.__setattr__(self, "targets", tuple(self.targets))
        object.__setattr__(self, "known", tuple(self.known))
        object.__setattr__(self, "disturbances", tuple(self.disturbances))
        if self.checkpoints is not None:
            cps = np.atleast_2d(np.asarray(self.checkpoints, float))
            object.__setattr__(self, "checkpoints", cps)
            if len(self.targets) not in (1, cps.shape[0]):
                raise ConfigError("need one target total or one per checkpoint")
        elif len(self.targets) != 1:
            raise ConfigError("multiple targets require checkpoints")

    def to_dict(self) -> dict:
        ctl = self.controller
        controller = {
            "lambda_R": ctl.lambda_R,
            "lambda_N": ctl.lambda_N,
            "D_R": ctl.D_R,
            "D_T": ctl.D_T,
            "D_N": ctl.D_N,
            "switching": ctl.switching,
            "phi_mode": ctl.phi_mode,
            "phi_value": np.asarray(ctl.phi_value, float).tolist()
            if np.ndim(ctl.phi_value)
            else float(ctl.phi_value),
            "beta_safe_max_deg": math.degrees(ctl.beta_safe_max),
            "mode": ctl.mode,
            "plane_variant": ctl.plane_variant,
        }
        if ctl.K_override is not None:
            controller["K_override"] = np.asarray(ctl.K_override, float).tolist()
        sim = {
            "dt": self.sim.dt,
            "control_dt": self.sim.control_dt,
            "duration": self.sim.duration,
            "actuator_limit": self.sim.actuator_limit,
            "blackout": list(self.sim.blackout) if self.sim.blackout else None,
            "blowup_factor": self.sim.blowup_factor,
        }
        return {
            "name": self.name,
            "description": self.description,
            "initial_state": {
                "r": self.initial_r.tolist(),
                "v": self.initial_v.tolist(),
            },
            "targets": [
                {
                    "h_d_vec": t.h_d_vec.tolist(),
                    "e_d_vec": t.e_d_vec.tolist(),
                    "mu": t.mu,
                }
                for t in self.targets
            ],
            "checkpoints": self.checkpoints.tolist()
            if self.checkpoints is not None
            else None,
            "controller": controller,
            "sim": sim,
            "known": [m.to_dict() for m in self.known],
            "disturbances": [m.to_dict() for m in self.disturbances],
            "moving_point": dict(self.moving_point) if self.moving_point else None,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Scenario":
        try:
            ctl_d = dict(d["controller"])
            ctl_kwargs = {
                "lambda_R": ctl_d["lambda_R"],
                "lambda_N": ctl_d["lambda_N"],
                "D_R": ctl_d["D_R"],
                "D_T": ctl_d["D_T"],
                "D_N": ctl_d["D_N"],
                "switching": ctl_d.get("switching", "saturation"),
                "phi_mode": ctl_d.get("phi_mode", "fraction_of_K"),
                "phi_value": ctl_d.get("phi_value", 0.05),
                "beta_safe_max": math.radians(
                    ctl_d.get("beta_safe_max_deg", 80.0)
                ),
                "mode": ctl_d.get("mode", "full"),
                "plane_variant": ctl_d.get("plane_variant", "asymptotic"),
            }
            if np.ndim(ctl_kwargs["phi_value"]):
                ctl_kwargs["phi_value"] = np.asarray(
                    ctl_kwargs["phi_value"], float
                )
            if ctl_d.get("K_override") is not None:
                ctl_kwargs["K_override"] = np.asarray(
                    ctl_d["K_override"], float
                )
            sim_d = dict(d["sim"])
            blackout = sim_d.get("blackout")
            return cls(
                name=d["name"],
                description=d.get("description", ""),
                initial_r=np.asarray(d["initial_state"]["r"], float),
                initial_v=np.asarray(d["initial_state"]["v"], float),
                targets=tuple(
                    OrbitTarget(
                        np.asarray(t["h_d_vec"], float),
                        np.asarray(t["e_d_vec"], float),
                        float(t["mu"]),
                    )
                    for t in d["targets"]
                ),
                checkpoints=np.asarray(d["checkpoints"], float)
                if d.get("checkpoints") is not None
                else None,
                controller=ControllerConfig(**ctl_kwargs),
                sim=SimConfig(
                    dt=float(sim_d["dt"]),
                    duration=float(sim_d["duration"]),
                    control_dt=sim_d.get("control_dt"),
                    actuator_limit=sim_d.get("actuator_limit"),
                    blackout=tuple(blackout) if blackout else None,
                    blowup_factor=float(sim_d.get("blowup_factor", 1e6)),
                ),
                known=tuple(
                    force_model_from_dict(m) for m in d.get("known", [])
                ),
                disturbances=tuple(
                    force_model_from_dict(m) for m in d.get("disturbances", [])
                ),
                moving_point=d.get("moving_point"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad scenario dictionary: {exc}") from exc


def build_moving_point(cfg: dict) -> MovingPoint:
    """Reference point with velocity ``v0_j + amp_j cos(freq_j t + phase_j)``."""
    p0 = np.asarray(cfg.get("position", (0.0, 0.0, 0.0)), float)
    v0 = np.asarray(cfg.get("v0", (0.0, 0.0, 0.0)), float)
    amp = np.asarray(cfg.get("amp", (0.0, 0.0, 0.0)), float)
    freq = np.asarray(cfg.get("freq", (0.0, 0.0, 0.0)), float)
    phase = np.asarray(cfg.get("phase", (0.0, 0.0, 0.0)), float)
    return MovingPoint(
        position=p0,
        velocity_law=lambda t: v0 + amp * np.cos(freq * t + phase),
        acceleration_law=lambda t: -amp * freq * np.sin(freq * t + phase),
    )


def switch_checkpoint(
    r: np.ndarray, checkpoints: np.ndarray, current: int | None = None
) -> int:
    """Index of the checkpoint to track from position ``r``.

    Nearest checkpoint by Euclidean distance, ties to the lowest index.  A
    non-None ``current`` is kept unless some other checkpoint is closer by
    more than the hysteresis fraction, which suppresses flip-flopping on
    bisector crossings.
    """
    cps = np.atleast_2d(np.asarray(checkpoints, float))
    dists = np.linalg.norm(cps - np.asarray(r, float), axis=1)
    best = int(np.argmin(dists))
    if current is None or not 0 <= current < cps.shape[0]:
        return best
    if dists[best] < (1.0 - SWITCH_HYSTERESIS) * dists[current]:
        return best
    return current


# ---------------------------------------------------------------------------
# Built-in scenario definitions.


def _kicked_velocity(
    r: np.ndarray, v: np.ndarray, tilt: float, scale: float
) -> np.ndarray:
    """On-conic velocity rotated about the radial direction, then rescaled.

    The rotation tilts the orbit plane by exactly ``tilt`` while the scale
    factor offsets momentum and eccentricity together, so a run starts
    outside all three surface bands at once and capture is demonstrated
    rather than granted by the initial state.
    """
    r_hat = np.asarray(r, float) / np.linalg.norm(r)
    v = np.asarray(v, float)
    rotated = (
        math.cos(tilt) * v
        + math.sin(tilt) * np.cross(r_hat, v)
        + (1.0 - math.cos(tilt)) * float(r_hat @ v) * r_hat
    )
    return scale * rotated


def scenario_mpf(nu0_deg: float = 115.0) -> Scenario:
    """Ellipse around a sinusoidally translating point, with a blackout.

    The design conic is fully specified by its two invariant vectors plus a
    gravitational parameter derived from a 100 s orbit period; no real
    gravity exists in this setup, so the closed loop must generate the whole
    centripetal acceleration while rejecting a constant disturbance and the
    reference point's own acceleration.  The initial relative velocity is
    tilted 2 degrees and scaled 5 percent off the conic value so all three
    surfaces start outside their bands.

    Args:
        nu0_deg: True anomaly of the initial relative position, deg.
    """
    h_d_vec = np.array([0.0, -8885.8, 8885.8])
    e_d_vec = np.array([0.0, -0.4243, -0.4243])
    h = float(np.linalg.norm(h_d_vec))
    e = float(np.linalg.norm(e_d_vec))
    mu = mu_from_period(100.0, h, e)
    target = OrbitTarget(h_d_vec, e_d_vec, mu)
    rel0 = state_from_target(target, math.radians(nu0_deg))
    point = {
        "position": [0.0, 0.0, 0.0],
        "v0": [5.0, 0.0, 0.0],
        "amp": [0.0, 5.0 / 3.0, 50.0],
        "freq": [0.0, 1.0 / 6.0, 1.0 / 7.0],
        "phase": [0.0, 0.0, 0.0],
    }
    v_point0 = np.array([5.0, 5.0 / 3.0, 50.0])
    return Scenario(
        name="mpf",
        description=(
            "ellipse around a sinusoidally moving point with actuator "
            "saturation and a 15 s command blackout"
        ),
        initial_r=rel0.r,
        initial_v=_kicked_velocity(rel0.r, rel0.v, math.radians(2.0), 1.05)
        + v_point0,
        targets=(target,),
        controller=ControllerConfig(
            lambda_R=2.0,
            lambda_N=2.0,
            D_R=10.0,
            D_T=10.0,
            D_N=10.0,
            switching="saturation",
            phi_mode="fraction_of_K",
            phi_value=0.05,
        ),
        sim=SimConfig(
            dt=0.01,
            control_dt=0.01,
            duration=600.0,
            actuator_limit=20.0,
            blackout=(360.0, 375.0),
        ),
        disturbances=(ConstantAccel(np.array([0.0, 0.0, -3.0])),),
        moving_point=point,
    )


# Hyperbolic-leg geometry.  Each leg is one close passage past its
# checkpoint; the exit asymptote of each leg was aimed (by choice of
# periapsis angle and checkpoint placement) to hand the particle to the
# next leg at a small eccentricity-vector mismatch, with passage sides
# alternating so the orbit normal flips sign at every switch.
HYPERBOLA_MU = 4.0e6
HYPERBOLA_LEGS = (
    {"p": 600.0, "e": 3.0, "peri_deg": -98.0, "normal": 1.0},
    {"p": 530.0, "e": 2.8, "peri_deg": 81.0, "normal": -1.0},
    {"p": 530.0, "e": 2.8, "peri_deg": -99.0, "normal": 1.0},
)
HYPERBOLA_CHECKPOINTS = np.array(
    [[0.0, 0.0, 0.0], [2000.0, 0.0, 0.0], [4000.0, -700.0, 0.0]]
)
HYPERBOLA_NU0 = math.radians(-95.0)


def hyperbola_leg_target(leg: dict) -> OrbitTarget:
    """Planar hyperbolic target from one leg's geometry entry."""
    h = math.sqrt(HYPERBOLA_MU * leg["p"])
    peri = math.radians(leg["peri_deg"])
    return OrbitTarget(
        np.array([0.0, 0.0, leg["normal"] * h]),
        leg["e"] * np.array([math.cos(peri), math.sin(peri), 0.0]),
        HYPERBOLA_MU,
    )


def scenario_hyperbolas() -> Scenario:
    """Patched hyperbolic legs chained across three fixed checkpoints.

    All legs lie in one plane and share a design gravitational parameter;
    the active leg is whichever checkpoint is closest.  The disturbance
    mixes a constant bias with three incommensurate sinusoids.  The initial
    velocity is tilted and scaled slightly off the first leg's conic so the
    opening pass starts with all three surfaces outside their bands.
    """
    targets = tuple(hyperbola_leg_target(leg) for leg in HYPERBOLA_LEGS)
    rel0 = state_from_target(targets[0], HYPERBOLA_NU0)
    return Scenario(
        name="hyperbolas",
        description=(
            "three coplanar hyperbolic passes relative to fixed "
            "checkpoints, switching to the nearest one"
        ),
        initial_r=rel0.r + HYPERBOLA_CHECKPOINTS[0],
        initial_v=_kicked_velocity(rel0.r, rel0.v, math.radians(1.5), 1.03),
        targets=targets,
        checkpoints=HYPERBOLA_CHECKPOINTS,
        controller=ControllerConfig(
            lambda_R=2.0,
            lambda_N=2.0,
            D_R=10.0,
            D_T=10.0,
            D_N=10.0,
            switching="saturation",
            phi_mode="fraction_of_K",
            phi_value=0.05,
        ),
        sim=SimConfig(dt=0.01, control_dt=0.01, duration=40.0),
        disturbances=(
            ConstantAccel(np.array([0.0, 0.0, -3.0])),
            SinusoidalAccel(
                amplitude=np.array([5.0, 5.0, 5.0]),
                frequency=np.array([1.0, 1.0 / 3.0, 1.0 / 5.0]),
                phase=np.array([0.0, math.pi / 2.0, 0.0]),
            ),
        ),
    )


ITOKAWA_MU = 2.36
ITOKAWA_SPIN_PERIOD = 12.132 * 3600.0
ITOKAWA_SUN_DIR = np.array([1.0, 0.3, 0.2])


def scenario_itokawa(
    phase0: float = 0.0, v_scale: float = 0.98, separation: float = 250.0
) -> Scenario:
    """Day-long station keeping about a small lumpy rotating body.

    The controller knows only the point-mass part of gravity; the lumpy
    remainder (modeled as a rotating dumbbell minus the matched point mass)
    and solar radiation pressure act as disturbances.  The initial velocity
    is tilted 2 degrees out of plane and scaled a few percent below the
    conic value, which exercises capture on every surface and, when control
    is disabled, lets the lumpy field bring the particle down within hours.

    Args:
        phase0: Initial lobe angle of the dumbbell, rad.
        v_scale: Factor applied to the on-conic initial velocity.
        separation: Distance between the two dumbbell mass points, m.
    """
    target = OrbitTarget(
        np.array([28.4818, 0.0, 0.0]), np.array([0.0, 0.0, 0.1]), ITOKAWA_MU
    )
    rel0 = state_from_target(target, 0.0)
    dumbbell = RotatingDumbbell(
        mu_total=ITOKAWA_MU,
        separation=separation,
        spin_period=ITOKAWA_SPIN_PERIOD,
        phase0=phase0,
    )
    return Scenario(
        name="itokawa",
        description=(
            "24 h orbit keeping about a small rotating two-lobe body with "
            "solar pressure, knowing only the point-mass gravity"
        ),
        initial_r=rel0.r,
        initial_v=_kicked_velocity(rel0.r, rel0.v, math.radians(2.0), v_scale),
        targets=(target,),
        controller=ControllerConfig(
            lambda_R=2.0,
            lambda_N=2.0,
            D_R=1e-4,
            D_T=1e-4,
            D_N=1e-4,
            switching="saturation",
            phi_mode="multiple_of_K",
            phi_value=5.0,
        ),
        sim=SimConfig(dt=1.0, control_dt=1.0, duration=86400.0),
        known=(PointMassGravity(ITOKAWA_MU),),
        disturbances=(
            SrpCannonball(s_au=1.695, b_sc=20.0, rho=1.0, sun_dir=ITOKAWA_SUN_DIR),
            DumbbellResidual(dumbbell),
        ),
    )


DECAY_MU = 1.0e5
DECAY_A = 150.0
DECAY_E = 0.3


def scenario_decay(lambda_R: float = 2.0, e_tilde0: float = 0.08) -> Scenario:
    """On-surface decay measurement for the radial eccentricity error.

    The initial state is constructed so that all three sliding variables are
    exactly zero while the eccentricity error is not: the transverse error
    component is set to ``-lambda_R`` times the radial one.  With no
    disturbances the closed loop then rides the surface, and the radial
    error must decay by ``exp(-lambda_R)`` per radian of swept angle.

    Args:
        lambda_R: Surface slope; also baked into the initial state.
        e_tilde0: Initial radial eccentricity error component.
    """
    p = DECAY_A * (1.0 - DECAY_E**2)
    h = math.sqrt(DECAY_MU * p)
    e_d_vec = np.array([DECAY_E, 0.0, 0.0])
    target = OrbitTarget(h * np.array([0.0, 0.0, 1.0]), e_d_vec, DECAY_MU)

    # Initial in-plane direction; the osculating eccentricity vector is the
    # target's plus the surface-aligned error expressed in that local frame.
    r_hat = np.array([1.0, 0.0, 0.0])
    t_hat = np.array([0.0, 1.0, 0.0])
    e_vec = e_d_vec + e_tilde0 * r_hat - lambda_R * e_tilde0 * t_hat
    e_r = float(e_vec @ r_hat)
    e_t = float(e_vec @ t_hat)
    r = h**2 / (DECAY_MU * (1.0 + e_r))
    r_dot = -DECAY_MU * e_t / h
    rel0 = StateVector(r * r_hat, r_dot * r_hat + (h / r) * t_hat)

    return Scenario(
        name="decay",
        description=(
            "disturbance-free run started exactly on the sliding surface to "
            "measure the on-surface error decay per swept radian"
        ),
        initial_r=rel0.r,
        initial_v=rel0.v,
        targets=(target,),
        controller=ControllerConfig(
            lambda_R=lambda_R,
            lambda_N=2.0,
            D_R=2e-3,
            D_T=2e-3,
            D_N=2e-3,
            switching="saturation",
            phi_mode="fraction_of_K",
            phi_value=0.05,
        ),
        sim=SimConfig(dt=0.005, control_dt=0.005, duration=73.0),
        known=(PointMassGravity(DECAY_MU),),
    )


SCENARIO_BUILDERS: dict[str, Callable[..., Scenario]] = {
    "mpf": scenario_mpf,
    "hyperbolas": scenario_hyperbolas,
    "itokawa": scenario_itokawa,
    "decay": scenario_decay,
}


def list_scenarios() -> dict[str, str]:
    """Names and one-line descriptions of the built-in scenarios."""
    out = {}
    for name, builder in SCENARIO_BUILDERS.items():
        doc = inspect.getdoc(builder) or ""
        out[name] = doc.splitlines()[0] if doc else ""
    return out


def build_scenario(name: str, overrides: dict | None = None) -> Scenario:
    """Built-in scenario by name, with overrides applied.

    Overrides whose keys match the builder's own parameters are passed at
    build time (they can shape the initial state); keys matching controller
    or sim fields replace those after building.  Unknown keys raise.
    """
    if name not in SCENARIO_BUILDERS:
        raise ConfigError(
            f"unknown scenario {name!r}; available: "
            + ", ".join(sorted(SCENARIO_BUILDERS))
        )
    builder = SCENARIO_BUILDERS[name]
    overrides = dict(overrides or {})
    params = inspect.signature(builder).parameters
    builder_kwargs = {k: overrides.pop(k) for k in list(overrides) if k in params}
    scenario = builder(**builder_kwargs)
    return apply_overrides(scenario, overrides)


_CONTROLLER_KEYS = {
    "lambda_R", "lambda_N", "D_R", "D_T", "D_N",
    "switching", "phi_mode", "phi_value", "mode", "plane_variant",
}
_SIM_KEYS = {"dt", "control_dt", "duration", "actuator_limit", "blackout", "blowup_factor"}


def apply_overrides(scenario: Scenario, overrides: dict) -> Scenario:
    """New scenario with controller/sim fields replaced by the overrides."""
    if not overrides:
        return scenario
    ctl_kwargs = {}
    sim_kwargs = {}
    for key, value in overrides.items():
        if key in _CONTROLLER_KEYS:
            ctl_kwargs[key] = value
        elif key == "beta_safe_max_deg":
            ctl_kwargs["beta_safe_max"] = math.radians(float(value))
        elif key in _SIM_KEYS:
            sim_kwargs[key] = value
        else:
            raise ConfigError(f"unknown override key: {key!r}")
    new = scenario
    if ctl_kwargs:
        new = replace(new, controller=replace(new.controller, **ctl_kwargs))
    if sim_kwargs:
        sim = new.sim
        merged = {
            "dt": sim.dt,
            "control_dt": sim.control_dt,
            "duration": sim.duration,
            "actuator_limit": sim.actuator_limit,
            "blackout": sim.blackout,
            "blowup_factor": sim.blowup_factor,
        }
        # A dt override carries control_dt along when they were in lockstep.
        if "dt" in sim_kwargs and "control_dt" not in sim_kwargs:
            if sim.control_dt == sim.dt:
                sim_kwargs = {**sim_kwargs, "control_dt": sim_kwargs["dt"]}
        merged.update(sim_kwargs)
        if merged["blackout"] is not None:
            merged["blackout"] = tuple(merged["blackout"])
        new = replace(new, sim=SimConfig(**merged))
    return new


# ---------------------------------------------------------------------------
# Metrics.


@dataclass
class MetricsReport:
    """Quantitative summary of one run, JSON-serializable via to_dict."""

    scenario: str
    duration: float
    delta_v_total: float
    captured: dict
    capture_time: dict
    recapture_time_after_blackout: float | None
    terminal_h_error_rel: float
    terminal_e_error: float
    terminal_beta_deg: float
    max_s_over_phi_after_capture: list | None
    chattering_index: float | None

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "duration": self.duration,
            "delta_v_total": self.delta_v_total,
            "captured": self.captured,
            "capture_time": self.capture_time,
            "recapture_time_after_blackout": self.recapture_time_after_blackout,
            "terminal_h_error_rel": self.terminal_h_error_rel,
            "terminal_e_error": self.terminal_e_error,
            "terminal_beta_deg": self.terminal_beta_deg,
            "max_s_over_phi_after_capture": self.max_s_over_phi_after_capture,
            "chattering_index": self.chattering_index,
        }


def _first_sustained(ok: np.ndarray, run: int, start: int = 0) -> int | None:
    """First index >= start where ``ok`` holds for ``run`` consecutive samples."""
    n = ok.shape[0]
    count = 0
    for i in range(start, n):
        count = count + 1 if ok[i] else 0
        if count >= run:
            return i - run + 1
    return None


def compute_metrics(log: TrajectoryLog, scenario: Scenario) -> MetricsReport:
    """Summarize a trajectory log against its scenario definition."""
    t = log.t
    n = len(log)
    in_band = np.abs(log.s) <= log.phi
    all_band = in_band.all(axis=1)

    surfaces = ("s1", "s2", "s3")
    capture_time: dict[str, float | None] = {}
    captured: dict[str, bool] = {}
    for j, name in enumerate(surfaces):
        idx = _first_sustained(in_band[:, j], CAPTURE_TICKS)
        capture_time[name] = float(t[idx]) if idx is not None else None
        captured[name] = idx is not None
    idx_all = _first_sustained(all_band, CAPTURE_TICKS)
    capture_time["all"] = float(t[idx_all]) if idx_all is not None else None
    captured["all"] = idx_all is not None

    recapture = None
    blackout = scenario.sim.blackout
    if blackout is not None:
        after = int(np.searchsorted(t, blackout[1]))
        idx_re = _first_sustained(all_band, CAPTURE_TICKS, start=after)
        recapture = float(t[idx_re]) if idx_re is not None else None

    u_mag = np.linalg.norm(log.u_inertial, axis=1)
    delta_v = float(np.trapezoid(u_mag, t))

    target = scenario.targets[int(log.active_target[-1])]
    h_mag = float(np.linalg.norm(log.h_vec[-1]))
    h_err = abs(h_mag - target.h_d) / target.h_d
    e_err = float(np.linalg.norm(log.e_vec[-1] - target.e_d_vec))
    beta_deg = math.degrees(float(log.beta[-1]))

    max_ratio = None
    chattering = None
    if idx_all is not None:
        include = np.zeros(n, dtype=bool)
        include[idx_all:] = True
        if blackout is not None:
            stop = blackout[0]
            resume = recapture if recapture is not None else scenario.sim.duration
            include &= ~((t >= stop) & (t < resume))
        include[-1] = False
        ratios = np.abs(log.s) / log.phi
        max_ratio = [
            float(ratios[include, j].max()) if include.any() else float("nan")
            for j in range(3)
        ]
        # Sign alternations per 100 included ticks, averaged over the three
        # command axes.  Zeroing the excluded samples keeps pairs spanning
        # an excluded window (blackout) from counting as alternations.
        flips_per_100 = []
        pairs = max(int(include.sum()) - 1, 1)
        for j in range(3):
            sign = np.sign(log.u_rtn[:, j])
            sign[~include] = 0.0
            alternations = int(np.sum(sign[1:] * sign[:-1] < 0))
            flips_per_100.append(100.0 * alternations / pairs)
        chattering = float(np.mean(flips_per_100))

    return MetricsReport(
        scenario=scenario.name,
        duration=float(scenario.sim.duration),
        delta_v_total=delta_v,
        captured=captured,
        capture_time=capture_time,
        recapture_time_after_blackout=recapture,
        terminal_h_error_rel=float(h_err),
        terminal_e_error=e_err,
        terminal_beta_deg=beta_deg,
        max_s_over_phi_after_capture=max_ratio,
        chattering_index=chattering,
    )


def run_scenario(scenario: Scenario) -> tuple[TrajectoryLog, MetricsReport]:
    """Execute a scenario and return its log plus computed metrics."""
    models = PlantModels(
        known=scenario.known,
        disturbances=scenario.disturbances,
        moving_point=build_moving_point(scenario.moving_point)
        if scenario.moving_point
        else None,
    )
    policy = None
    if scenario.checkpoints is not None and scenario.checkpoints.shape[0] > 1:
        cps = scenario.checkpoints

        def policy(r, current):
            return switch_checkpoint(r, cps, current)

    log = run_simulation(
        StateVector(scenario.initial_r, scenario.initial_v),
        list(scenario.targets),
        scenario.controller,
        scenario.sim,
        models,
        checkpoints=scenario.checkpoints,
        switch_policy=policy,
    )
    return log, compute_metrics(log, scenario)


__all__ = [
    "CAPTURE_TICKS",
    "MetricsReport",
    "SCENARIO_BUILDERS",
    "SWITCH_HYSTERESIS",
    "Scenario",
    "apply_overrides",
    "build_moving_point",
    "build_scenario",
    "compute_metrics",
    "list_scenarios",
    "run_scenario",
    "scenario_decay",
    "scenario_hyperbolas",
    "scenario_itokawa",
    "scenario_mpf",
    "switch_checkpoint",
]

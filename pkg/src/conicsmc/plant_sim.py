"""Fixed-step closed-loop simulation of a controlled particle.

The plant is the double integrator ``r_ddot = f + d + u`` in inertial
coordinates: known dynamics ``f``, disturbances ``d``, applied control ``u``.
The particle needs no central body; the controller shapes the trajectory of
the state relative to a reference point (fixed checkpoint, moving point, or
the origin) into a conic by regulating the invariants of that relative
state.

The loop uses a zero-order hold: the control command is computed once per
control period from the relative state, clamped per inertial axis, possibly
zeroed by a blackout window, then held constant while the plant integrates
with classical RK4 substeps.  Everything is deterministic; identical inputs
produce bit-identical logs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigError, DegenerateState, NumericalBlowup
from .orbital_mechanics import OrbitTarget, eccentricity_vector, specific_energy
from .rtn_frame import StateVector, build_frame, project_from_rtn, project_to_rtn
from .sliding_controller import (
    ControllerConfig,
    beta_safeguard,
    control_full,
    control_normal,
    evaluate_controller,
    lyapunov_value,
    plane_gain_and_layer,
)

# Solar radiation pressure at 1 au, N/m^2.
SOLAR_PRESSURE_1AU = 4.56e-6

# Minimum distance to a gravitating point before the field is considered
# singular for simulation purposes, m.
GRAVITY_R_MIN = 1e-6


@dataclass(frozen=True)
class SimConfig:
    """Timing and actuator description of one simulation run.

    Attributes:
        dt: Integration substep, s.
        duration: Total simulated time, s.
        control_dt: Zero-order-hold period, s; defaults to ``dt`` and must be
            an integer multiple of it.
        actuator_limit: Optional per-inertial-axis acceleration clamp, m/s^2.
        blackout: Optional ``(t_start, t_end)`` window during which every
            control command is lost (zeroed), s.
        blowup_factor: Abort when the relative radius exceeds this multiple
            of its initial value.
    """

    dt: float
    duration: float
    control_dt: float | None = None
    actuator_limit: float | None = None
    blackout: tuple[float, float] | None = None
    blowup_factor: float = 1e6

    def __post_init__(self):
        if not (self.dt > 0.0 and math.isfinite(self.dt)):
            raise ConfigError("dt must be positive and finite")
        if not (self.duration > 0.0 and math.isfinite(self.duration)):
            raise ConfigError("duration must be positive and finite")
        if self.control_dt is None:
            object.__setattr__(self, "control_dt", self.dt)
        if self.control_dt < self.dt - 1e-12:
            raise ConfigError("control_dt must be >= dt")
        ratio = self.control_dt / self.dt
        if abs(ratio - round(ratio)) > 1e-9 * max(ratio, 1.0):
            raise ConfigError("control_dt must be an integer multiple of dt")
        if self.actuator_limit is not None and self.actuator_limit <= 0.0:
            raise ConfigError("actuator_limit must be positive when present")
        if self.blackout is not None:
            t0, t1 = self.blackout
            if not t0 < t1:
                raise ConfigError("blackout window must satisfy t_start < t_end")
            object.__setattr__(self, "blackout", (float(t0), float(t1)))
        _ = self.n_ticks

    @property
    def substeps(self) -> int:
        return int(round(self.control_dt / self.dt))

    @property
    def n_ticks(self) -> int:
        n = self.duration / self.control_dt
        if abs(n - round(n)) > 1e-9 * max(n, 1.0):
            raise ConfigError("duration must be an integer number of control periods")
        return int(round(n))


def _unit(vector: np.ndarray) -> np.ndarray:
    """Unit vector, iterated to an exact normalization fixed point.

    Stopping only when dividing by the norm changes nothing makes
    serialize/deserialize cycles reproduce the stored direction
    bit-identically.
    """
    u = np.asarray(vector, float)
    n = float(np.linalg.norm(u))
    if not np.isfinite(n) or n == 0.0:
        raise ConfigError("direction vector must be nonzero and finite")
    for _ in range(4):
        u_next = u / n
        if np.array_equal(u_next, u):
            break
        u = u_next
        n = float(np.linalg.norm(u))
    return u


class ForceModel:
    """Acceleration contribution with a serializable parameter set."""

    kind = "abstract"

    def accel(self, t: float, r: np.ndarray, v: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class ConstantAccel(ForceModel):
    """Spatially and temporally constant acceleration, m/s^2."""

    vector: np.ndarray
    kind = "constant"

    def __post_init__(self):
        object.__setattr__(self, "vector", np.asarray(self.vector, float))

    def accel(self, t, r, v):
        return self.vector

    def to_dict(self):
        return {"kind": self.kind, "vector": self.vector.tolist()}


@dataclass(frozen=True)
class SinusoidalAccel(ForceModel):
    """Per-axis sinusoid ``a_j = A_j sin(w_j t + p_j)``, m/s^2."""

    amplitude: np.ndarray
    frequency: np.ndarray
    phase: np.ndarray
    kind = "sinusoidal"

    def __post_init__(self):
        for name in ("amplitude", "frequency", "phase"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), float))

    def accel(self, t, r, v):
        return self.amplitude * np.sin(self.frequency * t + self.phase)

    def to_dict(self):
        return {
            "kind": self.kind,
            "amplitude": self.amplitude.tolist(),
            "frequency": self.frequency.tolist(),
            "phase": self.phase.tolist(),
        }


@dataclass(frozen=True)
class PointMassGravity(ForceModel):
    """Inverse-square attraction toward the origin."""

    mu: float
    kind = "point_mass"

    def accel(self, t, r, v):
        d = float(np.linalg.norm(r))
        if d < GRAVITY_R_MIN:
            raise DegenerateState("state at the gravitating point")
        return -self.mu * r / d**3

    def to_dict(self):
        return {"kind": self.kind, "mu": self.mu}


@dataclass(frozen=True)
class SrpCannonball(ForceModel):
    """Constant-direction solar radiation pressure on a cannonball body.

    Magnitude ``(1 + rho) P0 / (B_sc S_au^2)`` with the 1 au solar pressure
    ``P0``; the push points away from the sun along the fixed ``sun_dir``
    (unit vector from the particle toward the sun).

    Attributes:
        s_au: Heliocentric distance, au.
        b_sc: Mass-to-area ballistic coefficient, kg/m^2.
        rho: Reflectivity in [-1, 1]; -1 models a perfectly transparent
            body (zero force).
        sun_dir: Direction toward the sun, normalized at construction.
    """

    s_au: float
    b_sc: float
    rho: float = 1.0
    sun_dir: np.ndarray = field(
        default_factory=lambda: np.array([1.0, 0.0, 0.0])
    )
    kind = "srp_cannonball"

    def __post_init__(self):
        if self.s_au <= 0.0 or self.b_sc <= 0.0:
            raise ConfigError("s_au and b_sc must be positive")
        object.__setattr__(self, "sun_dir", _unit(self.sun_dir))

    @property
    def magnitude(self) -> float:
        return (1.0 + self.rho) * SOLAR_PRESSURE_1AU / (self.b_sc * self.s_au**2)

    def accel(self, t, r, v):
        return -self.magnitude * self.sun_dir

    def to_dict(self):
        return {
            "kind": self.kind,
            "s_au": self.s_au,
            "b_sc": self.b_sc,
            "rho": self.rho,
            "sun_dir": self.sun_dir.tolist(),
        }


def _plane_basis(axis: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic orthonormal pair spanning the plane normal to axis."""
    axis = np.asarray(axis, float)
    axis = axis / np.linalg.norm(axis)
    ref = (
        np.array([0.0, 0.0, 1.0])
        if abs(axis[2]) < 0.9
        else np.array([0.0, 1.0, 0.0])
    )
    b1 = ref - (ref @ axis) * axis
    b1 /= np.linalg.norm(b1)
    return b1, np.cross(axis, b1)


@dataclass(frozen=True)
class RotatingDumbbell(ForceModel):
    """Two point masses spinning uniformly about a fixed axis.

    The mass points sit at ``+- separation/2`` from the origin inside the
    plane normal to ``spin_axis``; at ``t = 0`` the first lobe lies at angle
    ``phase0`` from the deterministic in-plane reference direction.

    Attributes:
        mu_total: Combined gravitational parameter, m^3/s^2.
        separation: Distance between the two mass points, m.
        spin_period: Rotation period, s.
        phase0: Initial lobe angle, rad.
        mass_fraction: Fraction of ``mu_total`` carried by the first lobe.
        r_min: Distance to either lobe below which the field is treated as
            singular, m.
    """

    mu_total: float
    separation: float
    spin_period: float
    phase0: float = 0.0
    mass_fraction: float = 0.5
    r_min: float = 1.0
    kind = "rotating_dumbbell"

    def __post_init__(self):
        if self.mu_total <= 0.0 or self.separation < 0.0 or self.spin_period <= 0.0:
            raise ConfigError("dumbbell parameters out of range")
        if not 0.0 < self.mass_fraction < 1.0:
            raise ConfigError("mass_fraction must be inside (0, 1)")

    def lobe_positions(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        b1, b2 = _plane_basis(np.array([1.0, 0.0, 0.0]))
        angle = 2.0 * math.pi * t / self.spin_period + self.phase0
        direction = math.cos(angle) * b1 + math.sin(angle) * b2
        offset = 0.5 * self.separation * direction
        return offset, -offset

    def accel(self, t, r, v):
        p1, p2 = self.lobe_positions(t)
        mu1 = self.mass_fraction * self.mu_total
        mu2 = self.mu_total - mu1
        total = np.zeros(3)
        for mu_i, p_i in ((mu1, p1), (mu2, p2)):
            rel = r - p_i
            d = float(np.linalg.norm(rel))
            if d < self.r_min:
                raise DegenerateState(
                    f"state within {self.r_min} m of a mass point"
                )
            total -= mu_i * rel / d**3
        return total

    def to_dict(self):
        return {
            "kind": self.kind,
            "mu_total": self.mu_total,
            "separation": self.separation,
            "spin_period": self.spin_period,
            "phase0": self.phase0,
            "mass_fraction": self.mass_fraction,
            "r_min": self.r_min,
        }


@dataclass(frozen=True)
class DumbbellResidual(ForceModel):
    """Dumbbell field minus the matched point mass at the origin.

    Models the part of a lumpy gravity field that a controller treating the
    body as a point mass does not know about.
    """

    dumbbell: RotatingDumbbell
    kind = "dumbbell_residual"

    def accel(self, t, r, v):
        d = float(np.linalg.norm(r))
        if d < GRAVITY_R_MIN:
            raise DegenerateState("state at the gravitating point")
        return self.dumbbell.accel(t, r, v) + self.dumbbell.mu_total * r / d**3

    def to_dict(self):
        return {"kind": self.kind, "dumbbell": self.dumbbell.to_dict()}


@dataclass(frozen=True)
class MovingPoint:
    """Reference point translating under a known velocity law.

    Attributes:
        position: Current position, m.
        velocity_law: ``t -> (3,)`` velocity, m/s.
        acceleration_law: ``t -> (3,)`` analytic derivative of the velocity
            law, m/s^2.
    """

    position: np.ndarray
    velocity_law: Callable[[float], np.ndarray]
    acceleration_law: Callable[[float], np.ndarray]

    def __post_init__(self):
        object.__setattr__(self, "position", np.asarray(self.position, float))


@dataclass(frozen=True)
class MovingPointFeedthrough(ForceModel):
    """Reference-point acceleration seen as a disturbance.

    When the plant is propagated directly in coordinates relative to a
    moving point, the point's own acceleration enters the relative dynamics
    with a minus sign.  The built-in runner propagates absolute coordinates
    instead (the transformation to the relative state carries the same
    physics), so this model is provided for relative-coordinate setups and
    disturbance budgeting.
    """

    point: MovingPoint
    kind = "moving_point_feedthrough"

    def accel(self, t, r, v):
        return -np.asarray(self.point.acceleration_law(t), float)

    def to_dict(self):
        return {"kind": self.kind}


def moving_point_update(point: MovingPoint, t: float, dt: float) -> MovingPoint:
    """Advance the reference point by one step of the integrator scheme.

    For a pure time-dependent velocity the classical RK4 update reduces to
    Simpson quadrature of the law over the step.
    """
    v1 = np.asarray(point.velocity_law(t), float)
    v_mid = np.asarray(point.velocity_law(t + 0.5 * dt), float)
    v4 = np.asarray(point.velocity_law(t + dt), float)
    new_pos = point.position + dt / 6.0 * (v1 + 4.0 * v_mid + v4)
    return replace(point, position=new_pos)


def step_rk4(
    state: StateVector, accel_fn: Callable[[float, StateVector], np.ndarray], dt: float
) -> StateVector:
    """One classical RK4 step of ``r_ddot = accel_fn(t, state)``.

    Raises:
        NumericalBlowup: If any component of the new state is non-finite.
    """
    t, r, v = state.t, state.r, state.v
    a1 = accel_fn(t, state)
    v2 = v + 0.5 * dt * a1
    a2 = accel_fn(t + 0.5 * dt, StateVector(r + 0.5 * dt * v, v2, t + 0.5 * dt))
    v3 = v + 0.5 * dt * a2
    a3 = accel_fn(t + 0.5 * dt, StateVector(r + 0.5 * dt * v2, v3, t + 0.5 * dt))
    v4 = v + dt * a3
    a4 = accel_fn(t + dt, StateVector(r + dt * v3, v4, t + dt))
    r_new = r + dt / 6.0 * (v + 2.0 * v2 + 2.0 * v3 + v4)
    v_new = v + dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
    if not (np.isfinite(r_new).all() and np.isfinite(v_new).all()):
        raise NumericalBlowup(f"non-finite state after step from t = {t!r}")
    return StateVector(r_new, v_new, t + dt)


def compose_acceleration(
    t: float,
    state: StateVector,
    known: Sequence[ForceModel],
    disturbances: Sequence[ForceModel],
    u_inertial: np.ndarray,
) -> np.ndarray:
    """Total plant acceleration: known terms + disturbances + applied control."""
    total = np.asarray(u_inertial, float).copy()
    for model in known:
        total = total + model.accel(t, state.r, state.v)
    for model in disturbances:
        total = total + model.accel(t, state.r, state.v)
    return total


def apply_actuator_limits(
    u_inertial: np.ndarray, limit: float | None, blackout_active: bool
) -> tuple[np.ndarray, np.ndarray, bool]:
    """Clamp the inertial command per axis and zero it during blackout.

    Returns:
        ``(u_applied, saturated_flags, blackout_flag)``.
    """
    u = np.asarray(u_inertial, float)
    if blackout_active:
        return np.zeros(3), np.zeros(3, dtype=bool), True
    if limit is None:
        return u.copy(), np.zeros(3, dtype=bool), False
    clamped = np.clip(u, -limit, limit)
    return clamped, np.abs(u) > limit, False


# Column order of the serialized trajectory log.  Fixed: downstream tools
# index by this schema.
CSV_COLUMNS = (
    "t",
    "rx", "ry", "rz", "vx", "vy", "vz",
    "rel_rx", "rel_ry", "rel_rz", "rel_vx", "rel_vy", "rel_vz",
    "uR", "uT", "uN", "ux", "uy", "uz",
    "s1", "s2", "s3", "K1", "K2", "K3", "phi1", "phi2", "phi3",
    "h", "ex", "ey", "ez", "beta_deg", "V", "dv_cum",
    "sat_x", "sat_y", "sat_z", "blackout",
)


@dataclass
class TrajectoryLog:
    """Per-control-tick history of one run, in memory as column arrays.

    Rows 0..n-2 describe the state at the start of each control period along
    with the command held over that period; the final row is the terminal
    state with a zero command.  ``u_rtn`` is the commanded acceleration
    before actuator effects, ``u_inertial`` the applied one after clamping
    and blackout.
    """

    t: np.ndarray
    r: np.ndarray
    v: np.ndarray
    rel_r: np.ndarray
    rel_v: np.ndarray
    u_rtn: np.ndarray
    u_inertial: np.ndarray
    s: np.ndarray
    K: np.ndarray
    phi: np.ndarray
    h_vec: np.ndarray
    e_vec: np.ndarray
    energy: np.ndarray
    beta: np.ndarray
    lyapunov: np.ndarray
    dv_cum: np.ndarray
    saturated: np.ndarray
    blackout: np.ndarray
    active_target: np.ndarray

    @classmethod
    def empty(cls, n: int) -> "TrajectoryLog":
        return cls(
            t=np.zeros(n),
            r=np.zeros((n, 3)),
            v=np.zeros((n, 3)),
            rel_r=np.zeros((n, 3)),
            rel_v=np.zeros((n, 3)),
            u_rtn=np.zeros((n, 3)),
            u_inertial=np.zeros((n, 3)),
            s=np.zeros((n, 3)),
            K=np.zeros((n, 3)),
            phi=np.zeros((n, 3)),
            h_vec=np.zeros((n, 3)),
            e_vec=np.zeros((n, 3)),
            energy=np.zeros(n),
            beta=np.zeros(n),
            lyapunov=np.zeros(n),
            dv_cum=np.zeros(n),
            saturated=np.zeros((n, 3), dtype=bool),
            blackout=np.zeros(n, dtype=bool),
            active_target=np.zeros(n, dtype=int),
        )

    def __len__(self) -> int:
        return self.t.shape[0]

    def as_table(self) -> np.ndarray:
        """Dense float table in the serialized column order."""
        return np.column_stack(
            [
                self.t,
                self.r, self.v,
                self.rel_r, self.rel_v,
                self.u_rtn, self.u_inertial,
                self.s, self.K, self.phi,
                np.linalg.norm(self.h_vec, axis=1),
                self.e_vec,
                np.degrees(self.beta),
                self.lyapunov,
                self.dv_cum,
                self.saturated.astype(float),
                self.blackout.astype(float),
            ]
        )

    def to_csv(self, path, decimate: int = 1) -> None:
        """Write the log; keeps every ``decimate``-th row plus the last."""
        if decimate < 1:
            raise ConfigError("decimate must be >= 1")
        table = self.as_table()
        idx = np.arange(0, len(self), decimate)
        if idx[-1] != len(self) - 1:
            idx = np.append(idx, len(self) - 1)
        np.savetxt(
            path,
            table[idx],
            fmt="%.17g",
            delimiter=",",
            header=",".join(CSV_COLUMNS),
            comments="",
        )

    @staticmethod
    def read_csv(path) -> dict[str, np.ndarray]:
        """Columns of a written log, keyed by the schema names."""
        with open(path) as fh:
            header = fh.readline().strip().split(",")
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        return {name: data[:, i] for i, name in enumerate(header)}


@dataclass(frozen=True)
class PlantModels:
    """Force content of the plant.

    Attributes:
        known: Models the controller is told about (cancelled through f).
        disturbances: Models acting on the plant but unknown to the
            controller.
        moving_point: Optional translating reference point; when present the
            controller regulates the state relative to it.
    """

    known: tuple[ForceModel, ...] = ()
    disturbances: tuple[ForceModel, ...] = ()
    moving_point: MovingPoint | None = None

    def __post_init__(self):
        object.__setattr__(self, "known", tuple(self.known))
        object.__setattr__(self, "disturbances", tuple(self.disturbances))


def force_model_from_dict(d: dict) -> ForceModel:
    """Rebuild a force model from its ``to_dict`` form."""
    kind = d.get("kind")
    if kind == "constant":
        return ConstantAccel(np.asarray(d["vector"], float))
    if kind == "sinusoidal":
        return SinusoidalAccel(
            np.asarray(d["amplitude"], float),
            np.asarray(d["frequency"], float),
            np.asarray(d["phase"], float),
        )
    if kind == "point_mass":
        return PointMassGravity(float(d["mu"]))
    if kind == "srp_cannonball":
        return SrpCannonball(
            s_au=float(d["s_au"]),
            b_sc=float(d["b_sc"]),
            rho=float(d["rho"]),
            sun_dir=np.asarray(d["sun_dir"], float),
        )
    if kind == "rotating_dumbbell":
        return RotatingDumbbell(
            mu_total=float(d["mu_total"]),
            separation=float(d["separation"]),
            spin_period=float(d["spin_period"]),
            phase0=float(d.get("phase0", 0.0)),
            mass_fraction=float(d.get("mass_fraction", 0.5)),
            r_min=float(d.get("r_min", 1.0)),
        )
    if kind == "dumbbell_residual":
        inner = force_model_from_dict(d["dumbbell"])
        return DumbbellResidual(inner)
    raise ConfigError(f"unknown force model kind: {kind!r}")


def _blackout_active(blackout: tuple[float, float] | None, t: float) -> bool:
    if blackout is None:
        return False
    return blackout[0] <= t < blackout[1]


def run_simulation(
    initial: StateVector,
    targets: OrbitTarget | Sequence[OrbitTarget],
    controller: ControllerConfig,
    sim: SimConfig,
    models: PlantModels | None = None,
    checkpoints: np.ndarray | None = None,
    switch_policy: Callable[[np.ndarray, int | None], int] | None = None,
) -> TrajectoryLog:
    """Run the closed loop and return the full tick-by-tick log.

    Args:
        initial: Absolute inertial state at t = 0.
        targets: One target conic, or one per checkpoint.
        controller: Sliding-controller settings.
        sim: Timing, actuator limit, blackout.
        models: Plant force content; defaults to force-free.
        checkpoints: Optional (n, 3) fixed reference positions.  The state
            fed to the controller is relative to the active checkpoint,
            selected by ``switch_policy``.
        switch_policy: ``(r_absolute, current_index) -> index``; required
            when more than one checkpoint is given.

    Returns:
        TrajectoryLog with ``n_ticks + 1`` rows.

    Raises:
        NumericalBlowup: On non-finite states or runaway relative radius,
            with the failing time in the message.
        DegenerateState, AntiParallel, PlaneSingularity: Propagated from the
            frame, safeguard, or force models with the failing time.
    """
    models = models or PlantModels()
    target_list = (
        [targets] if isinstance(targets, OrbitTarget) else list(targets)
    )
    if checkpoints is not None:
        checkpoints = np.atleast_2d(np.asarray(checkpoints, float))
        if len(target_list) not in (1, checkpoints.shape[0]):
            raise ConfigError("need one target total or one per checkpoint")
        if checkpoints.shape[0] > 1 and switch_policy is None:
            raise ConfigError("switch_policy required with multiple checkpoints")
    elif len(target_list) != 1:
        raise ConfigError("multiple targets require checkpoints")
    if models.moving_point is not None and checkpoints is not None:
        raise ConfigError("moving point and checkpoints are exclusive")

    n_ticks = sim.n_ticks
    substeps = sim.substeps
    log = TrajectoryLog.empty(n_ticks + 1)
    state = StateVector(initial.r, initial.v, 0.0)
    point = models.moving_point
    active = 0
    dv = 0.0
    r_rel0 = None

    def reference(t: float) -> tuple[np.ndarray, np.ndarray]:
        if point is not None:
            return point.position, np.asarray(point.velocity_law(t), float)
        if checkpoints is not None:
            return checkpoints[active], np.zeros(3)
        return np.zeros(3), np.zeros(3)

    def stamp(exc: Exception, t: float) -> Exception:
        exc.args = (f"{exc.args[0] if exc.args else exc}" + f" (t = {t:.6g} s)",)
        return exc

    for k in range(n_ticks + 1):
        t = k * sim.control_dt
        if checkpoints is not None and switch_policy is not None:
            active = switch_policy(state.r, active if k > 0 else None)
        ref_pos, ref_vel = reference(t)
        rel = StateVector(state.r - ref_pos, state.v - ref_vel, t)
        target = target_list[active if len(target_list) > 1 else 0]

        r_rel = float(np.linalg.norm(rel.r))
        if r_rel0 is None:
            r_rel0 = max(r_rel, 1.0)
        if not np.isfinite(r_rel) or r_rel > sim.blowup_factor * r_rel0:
            raise NumericalBlowup(
                f"relative radius {r_rel:.3e} m exceeds "
                f"{sim.blowup_factor:g} x initial (t = {t:.6g} s)"
            )

        try:
            frame = build_frame(rel)
            h_d_safe = beta_safeguard(
                frame.h_hat, target.h_d_hat, controller.beta_safe_max
            )
            ss = evaluate_controller(frame, target, controller, h_d_hat=h_d_safe)
        except Exception as exc:
            raise stamp(exc, t)

        blackout_now = _blackout_active(sim.blackout, t)
        f_inertial = np.zeros(3)
        for model in models.known:
            f_inertial = f_inertial + model.accel(t, state.r, state.v)
        f_rtn = project_to_rtn(f_inertial, frame)

        if k == n_ticks:
            u_rtn = np.zeros(3)
            u_applied, sat_flags, bo_flag = np.zeros(3), np.zeros(3, bool), False
        elif blackout_now:
            u_rtn = np.zeros(3)
            u_applied, sat_flags, bo_flag = apply_actuator_limits(
                np.zeros(3), sim.actuator_limit, True
            )
        else:
            try:
                if controller.mode == "plane_only":
                    k_n, phi_n = plane_gain_and_layer(controller)
                    u_n = control_normal(
                        frame,
                        project_to_rtn(h_d_safe, frame),
                        f_n=float(f_rtn[2]),
                        k_n=k_n,
                        lambda_n=controller.lambda_N,
                        variant=controller.plane_variant,
                        switching=controller.switching,
                        phi=phi_n,
                    )
                    u_rtn = np.array([0.0, 0.0, u_n])
                    u_inertial = project_from_rtn(u_rtn, frame)
                else:
                    cmd = control_full(
                        frame, target, f_rtn, controller, sliding=ss
                    )
                    u_rtn, u_inertial = cmd.u_rtn, cmd.u_inertial
            except Exception as exc:
                raise stamp(exc, t)
            u_applied, sat_flags, bo_flag = apply_actuator_limits(
                u_inertial, sim.actuator_limit, False
            )

        log.t[k] = t
        log.r[k] = state.r
        log.v[k] = state.v
        log.rel_r[k] = rel.r
        log.rel_v[k] = rel.v
        log.u_rtn[k] = u_rtn
        log.u_inertial[k] = u_applied
        log.s[k] = ss.s
        log.K[k] = ss.K_diag
        log.phi[k] = ss.phi
        log.h_vec[k] = np.cross(rel.r, rel.v)
        log.e_vec[k] = eccentricity_vector(rel, target.mu)
        log.energy[k] = specific_energy(rel, target.mu)
        log.beta[k] = ss.beta
        log.lyapunov[k] = lyapunov_value(ss.s)
        log.dv_cum[k] = dv
        log.saturated[k] = sat_flags
        log.blackout[k] = bo_flag
        log.active_target[k] = active

        if k == n_ticks:
            break

        dv += float(np.linalg.norm(u_applied)) * sim.control_dt

        def plant_accel(tt, st, u=u_applied):
            return compose_acceleration(
                tt, st, models.known, models.disturbances, u
            )

        for j in range(substeps):
            t_sub = t + j * sim.dt
            try:
                state = step_rk4(
                    StateVector(state.r, state.v, t_sub), plant_accel, sim.dt
                )
            except Exception as exc:
                raise stamp(exc, t_sub)
            if point is not None:
                point = moving_point_update(point, t_sub, sim.dt)

    return log


__all__ = [
    "CSV_COLUMNS",
    "ConstantAccel",
    "DumbbellResidual",
    "ForceModel",
    "GRAVITY_R_MIN",
    "MovingPoint",
    "MovingPointFeedthrough",
    "PlantModels",
    "PointMassGravity",
    "RotatingDumbbell",
    "SOLAR_PRESSURE_1AU",
    "SimConfig",
    "SinusoidalAccel",
    "SrpCannonball",
    "TrajectoryLog",
    "apply_actuator_limits",
    "compose_acceleration",
    "force_model_from_dict",
    "moving_point_update",
    "run_simulation",
    "step_rk4",
]

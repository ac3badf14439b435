"""Sliding-mode control laws that regulate conic invariants.

The controller drives three sliding variables to zero:

* ``s1 = et_T + lambda_R * et_R`` where ``et = e_vec - e_d_vec`` is the
  eccentricity error expressed in the current RTN frame,
* ``s2 = h - h_d`` the angular momentum magnitude error,
* ``s3 = hd_T + lambda_N * hd_R`` built from the RTN components of the
  desired plane normal.

On ``s1 = 0`` (resp. ``s3 = 0``) the radial component of the corresponding
error vector decays like ``exp(-lambda * delta_theta)`` with the swept angle
``theta`` of the orbit, so the two lambda gains set decay per radian rather
than per second.  ``s = 0`` with ``s2 = 0`` pins the particle's osculating
conic to the target conic.

The surface dynamics are affine in the total RTN acceleration ``a``:
``s_dot = F a + G``, with ``F`` upper triangular and invertible whenever the
desired plane normal keeps a positive component ``hd_N`` along the current
one.  The full control law inverts that relation and adds a switching term
sized by the disturbance bounds (``gains_from_bounds``), yielding
``u = -F^{-1} (G + K sw(s)) - f`` for known dynamics ``f``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AntiParallel, ConfigError, PlaneSingularity
from .orbital_mechanics import OrbitTarget, eccentricity_rtn
from .rtn_frame import RtnFrame, project_from_rtn, project_to_rtn

# The two switching-term shapes supported by the control laws.
SWITCHING_MODES = ("sign", "saturation")
PHI_MODES = ("fraction_of_K", "multiple_of_K", "absolute")


@dataclass(frozen=True)
class ControllerConfig:
    """Gains, bounds, and switching options for the sliding controller.

    Attributes:
        lambda_R: Decay rate (per radian of swept angle) of the radial
            eccentricity error on the surface; > 0.
        lambda_N: Same for the plane error; > 0.
        D_R, D_T, D_N: Bounds on the RTN components of the unknown
            disturbance acceleration, m/s^2.
        switching: "sign" for ideal switching, "saturation" for a boundary
            layer of width phi.
        phi_mode: How the boundary layer width is derived: a fraction of each
            gain ("fraction_of_K"), a multiple of each gain ("multiple_of_K"),
            or fixed values ("absolute").
        phi_value: Scale factor for the K-relative modes, or a length-3 array
            of widths for "absolute".
        beta_safe_max: Plane-error angle (rad) beyond which the desired
            normal fed to the controller is pulled toward the current normal;
            must stay below pi/2 to keep F invertible.
        K_override: Optional fixed switching gains (3,), replacing the
            Corollary-style bound computation.
        mode: "full" for the three-channel law, "plane_only" to command only
            the normal channel.
        plane_variant: Normal-channel law flavor, "asymptotic" or
            "finite_time".
    """

    lambda_R: float = 2.0
    lambda_N: float = 2.0
    D_R: float = 0.0
    D_T: float = 0.0
    D_N: float = 0.0
    switching: str = "saturation"
    phi_mode: str = "fraction_of_K"
    phi_value: float | np.ndarray = 0.05
    beta_safe_max: float = math.radians(80.0)
    K_override: np.ndarray | None = None
    mode: str = "full"
    plane_variant: str = "asymptotic"

    def __post_init__(self):
        if self.lambda_R <= 0.0 or self.lambda_N <= 0.0:
            raise ConfigError("lambda_R and lambda_N must be positive")
        if min(self.D_R, self.D_T, self.D_N) < 0.0:
            raise ConfigError("disturbance bounds must be non-negative")
        if self.switching not in SWITCHING_MODES:
            raise ConfigError(f"switching must be one of {SWITCHING_MODES}")
        if self.phi_mode not in PHI_MODES:
            raise ConfigError(f"phi_mode must be one of {PHI_MODES}")
        if not 0.0 < self.beta_safe_max < math.pi / 2:
            raise ConfigError("beta_safe_max must lie in (0, pi/2)")
        if self.mode not in ("full", "plane_only"):
            raise ConfigError("mode must be 'full' or 'plane_only'")
        if self.plane_variant not in ("asymptotic", "finite_time"):
            raise ConfigError("plane_variant must be 'asymptotic' or 'finite_time'")
        if self.K_override is not None:
            object.__setattr__(
                self, "K_override", np.asarray(self.K_override, float)
            )


@dataclass(frozen=True)
class SlidingState:
    """Everything the control law needs at one instant.

    Attributes:
        s: Sliding variables (3,).
        K_diag: Switching gains (3,).
        phi: Boundary layer widths (3,); meaningful for saturation switching
            but always populated so logs and capture tests can use them.
        F: Surface input matrix (3, 3), upper triangular.
        G: Surface drift vector (3,).
        beta: Angle between current and desired plane normals, rad
            (unsafeguarded, for telemetry).
    """

    s: np.ndarray
    K_diag: np.ndarray
    phi: np.ndarray
    F: np.ndarray
    G: np.ndarray
    beta: float


@dataclass(frozen=True)
class ControlCommand:
    """Commanded acceleration before/after actuator effects.

    Attributes:
        u_rtn: Commanded acceleration in RTN, m/s^2.
        u_inertial: Inertial acceleration actually applied, m/s^2.  Equals
            the projection of ``u_rtn`` unless clamped or blacked out.
        saturated: Per-inertial-axis clamp flags.
        blackout: True when the command was zeroed by a communication gap.
    """

    u_rtn: np.ndarray
    u_inertial: np.ndarray
    saturated: np.ndarray = field(
        default_factory=lambda: np.zeros(3, dtype=bool)
    )
    blackout: bool = False


def sat(s: float, phi: float) -> float:
    """Saturation switching shape: linear inside the layer, +-1 outside."""
    if s > phi:
        return 1.0
    if s < -phi:
        return -1.0
    return s / phi


def switch_value(s: float, phi: float, switching: str) -> float:
    """Switching term value for one channel; ``sign(0) = 0`` by convention."""
    if switching == "sign":
        return float(np.sign(s))
    return sat(s, phi)


def surface_scalar(component_r: float, component_t: float, lam: float) -> float:
    """Generic sliding variable ``A_T + lambda A_R`` for one error vector."""
    return component_t + lam * component_r


def surface_sN(h_d_hat_rtn: np.ndarray, lambda_n: float) -> float:
    """Plane-error sliding variable from the desired normal's RTN components."""
    return surface_scalar(float(h_d_hat_rtn[0]), float(h_d_hat_rtn[1]), lambda_n)


def beta_angle(h_hat: np.ndarray, h_d_hat: np.ndarray) -> float:
    """Angle between current and desired orbit normals, rad."""
    c = float(np.clip(h_hat @ h_d_hat, -1.0, 1.0))
    return math.acos(c)


def beta_safeguard(
    h_hat: np.ndarray, h_d_hat: np.ndarray, beta_safe_max: float
) -> np.ndarray:
    """Desired plane normal, pulled toward the current one when too far.

    The control laws require a positive component of the desired normal
    along the current one (plane error below 90 degrees).  When the true
    desired normal violates ``beta < beta_safe_max``, the controller is fed
    an intermediate normal rotated to exactly ``beta_safe_max`` away from the
    current normal, inside the plane spanned by the two.  As the plane error
    shrinks, the intermediate target continuously merges into the true one.

    Args:
        h_hat: Current orbit normal (unit).
        h_d_hat: Desired orbit normal (unit).
        beta_safe_max: Threshold angle, rad, in (0, pi/2).

    Returns:
        Unit vector to use as the desired normal for control purposes.

    Raises:
        AntiParallel: If the normals are exactly opposed (rotation plane
            undefined); perturb the target instead.
    """
    dot = float(np.clip(h_hat @ h_d_hat, -1.0, 1.0))
    if dot <= -1.0 + 1e-12:
        raise AntiParallel("current and desired plane normals are opposed")
    if math.acos(dot) < beta_safe_max:
        return np.asarray(h_d_hat, float)
    axis = np.cross(h_hat, h_d_hat)
    axis = axis / np.linalg.norm(axis)
    toward = np.cross(axis, h_hat)
    return math.cos(beta_safe_max) * h_hat + math.sin(beta_safe_max) * toward


def control_normal(
    frame: RtnFrame,
    h_d_hat_rtn: np.ndarray,
    f_n: float,
    k_n: float,
    lambda_n: float,
    variant: str = "asymptotic",
    switching: str = "sign",
    phi: float = 1.0,
) -> float:
    """Normal-channel acceleration that regulates the orbit plane alone.

    Two variants of the plane-only law:

        asymptotic:  u_N = h^2 / (r^3 hd_N) * (hd_R - lambda_N hd_T)
                           - K_N sw(s_N) - f_N
        finite_time: u_N = h^2 / (r^3 hd_N) * (hd_R - lambda_N hd_T
                           - K_N sw(s_N) - f_N)

    Args:
        frame: Current RTN frame.
        h_d_hat_rtn: Desired plane normal in RTN components (safeguarded by
            the caller if necessary).
        f_n: Known normal acceleration to cancel, m/s^2.
        k_n: Switching gain, m/s^2; at least the normal disturbance bound.
        lambda_n: Plane-error decay rate per radian.
        variant: "asymptotic" or "finite_time".
        switching: "sign" or "saturation".
        phi: Boundary layer width for saturation switching.

    Returns:
        Normal acceleration command, m/s^2.

    Raises:
        PlaneSingularity: If ``hd_N <= 0``; apply :func:`beta_safeguard`
            before calling.
    """
    hd_r, hd_t, hd_n = (float(x) for x in h_d_hat_rtn)
    if hd_n <= 0.0:
        raise PlaneSingularity(
            f"desired normal has hd_N = {hd_n:.3e} <= 0; plane error >= 90 deg"
        )
    gain = frame.h**2 / (frame.r**3 * hd_n)
    s_n = surface_sN(h_d_hat_rtn, lambda_n)
    sw = switch_value(s_n, phi, switching)
    if variant == "asymptotic":
        return gain * (hd_r - lambda_n * hd_t) - k_n * sw - f_n
    return gain * (hd_r - lambda_n * hd_t - k_n * sw - f_n)


def surface_vector(
    frame: RtnFrame,
    target: OrbitTarget,
    config: ControllerConfig,
    h_d_hat: np.ndarray | None = None,
) -> np.ndarray:
    """The three sliding variables at the current state.

    Args:
        frame: Current RTN frame.
        target: Conic to converge to.
        config: Gains (only the lambdas are used here).
        h_d_hat: Optional replacement desired normal (already safeguarded);
            defaults to the target's own.

    Returns:
        ``[s1, s2, s3]`` with units ``[-, m^2/s, -]``.
    """
    e_rtn = eccentricity_rtn(frame, target.mu)
    e_d_rtn = project_to_rtn(target.e_d_vec, frame)
    et = e_rtn - e_d_rtn
    hd_rtn = project_to_rtn(
        target.h_d_hat if h_d_hat is None else h_d_hat, frame
    )
    return np.array(
        [
            surface_scalar(float(et[0]), float(et[1]), config.lambda_R),
            frame.h - target.h_d,
            surface_sN(hd_rtn, config.lambda_N),
        ]
    )


def build_F_G(
    frame: RtnFrame,
    target: OrbitTarget,
    config: ControllerConfig,
    h_d_hat: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Surface dynamics matrices: ``s_dot = F a_rtn + G``.

    ``F`` is upper triangular with diagonal ``(-h/mu, r, r hd_N / h)``, so it
    is invertible whenever ``hd_N > 0``.  ``G`` collects the drift of the
    surfaces under zero applied acceleration.

    Args:
        frame: Current RTN frame.
        target: Conic to converge to.
        config: Lambda gains.
        h_d_hat: Optional safeguarded desired normal.

    Returns:
        Tuple ``(F, G)`` with shapes (3, 3) and (3,).

    Raises:
        PlaneSingularity: If the desired normal's N component is <= 0.
    """
    r, h, r_dot = frame.r, frame.h, frame.r_dot
    mu = target.mu
    lam_r, lam_n = config.lambda_R, config.lambda_N
    e_rtn = eccentricity_rtn(frame, mu)
    e_d_rtn = project_to_rtn(target.e_d_vec, frame)
    et = e_rtn - e_d_rtn
    hd_rtn = project_to_rtn(
        target.h_d_hat if h_d_hat is None else h_d_hat, frame
    )
    hd_n = float(hd_rtn[2])
    if hd_n <= 0.0:
        raise PlaneSingularity(
            f"desired normal has hd_N = {hd_n:.3e} <= 0; apply beta_safeguard first"
        )
    e_d_n = float(e_d_rtn[2])
    F = np.array(
        [
            [-h / mu, (2.0 * lam_r * h - r_dot * r) / mu, -r * e_d_n / h],
            [0.0, r, 0.0],
            [0.0, 0.0, r * hd_n / h],
        ]
    )
    G = (h / r**2) * np.array(
        [
            lam_r * float(et[1]) - float(et[0]) - 1.0,
            0.0,
            lam_n * float(hd_rtn[1]) - float(hd_rtn[0]),
        ]
    )
    return F, G


def solve_upper_triangular(F: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Solve ``F x = y`` for the controller's 3x3 upper-triangular ``F``."""
    x2 = y[2] / F[2, 2]
    x1 = y[1] / F[1, 1]
    x0 = (y[0] - F[0, 1] * x1 - F[0, 2] * x2) / F[0, 0]
    return np.array([x0, x1, x2])


def gains_from_bounds(
    frame: RtnFrame,
    target: OrbitTarget,
    config: ControllerConfig,
    h_d_hat: np.ndarray | None = None,
) -> np.ndarray:
    """Switching gains that dominate any disturbance within the bounds.

    The surface drift injected by a disturbance ``d`` is ``F d``, so taking
    row-wise worst cases over ``|d_j| <= D_j`` gives

        K1 = (h / mu) D_R + |2 lambda_R h - r_dot r| / mu * D_T
             + (r |e_dN| / h) D_N
        K2 = r D_T
        K3 = r (hd_N / h) D_N

    Equalities are used; any scaling up preserves the decrease property.

    Returns:
        Diagonal gains (3,), in the mixed units of the surfaces per second.
    """
    if config.K_override is not None:
        return np.asarray(config.K_override, float).copy()
    r, h, r_dot = frame.r, frame.h, frame.r_dot
    mu = target.mu
    e_d_n = float(project_to_rtn(target.e_d_vec, frame)[2])
    hd_n = float(
        project_to_rtn(target.h_d_hat if h_d_hat is None else h_d_hat, frame)[2]
    )
    return np.array(
        [
            (h / mu) * config.D_R
            + abs(2.0 * config.lambda_R * h - r_dot * r) / mu * config.D_T
            + (r * abs(e_d_n) / h) * config.D_N,
            r * config.D_T,
            r * (hd_n / h) * config.D_N,
        ]
    )


def boundary_layer(K_diag: np.ndarray, config: ControllerConfig) -> np.ndarray:
    """Boundary layer widths for the configured phi mode."""
    if config.phi_mode == "absolute":
        phi = np.broadcast_to(np.asarray(config.phi_value, float), (3,)).copy()
    else:
        phi = float(config.phi_value) * np.asarray(K_diag, float)
    return np.maximum(phi, 1e-300)


def plane_gain_and_layer(config: ControllerConfig) -> tuple[float, float]:
    """Switching gain and layer width for the plane-only law.

    Unlike the full law's third gain (surface-rate units), the plane-only
    law subtracts its switching term directly in acceleration units, so the
    gain that dominates the disturbance is the normal bound itself.
    """
    k_n = (
        float(config.K_override[2])
        if config.K_override is not None
        else config.D_N
    )
    if config.phi_mode == "absolute":
        phi = float(
            np.broadcast_to(np.asarray(config.phi_value, float), (3,))[2]
        )
    else:
        phi = float(config.phi_value) * k_n
    return k_n, max(phi, 1e-300)


def evaluate_controller(
    frame: RtnFrame,
    target: OrbitTarget,
    config: ControllerConfig,
    h_d_hat: np.ndarray | None = None,
) -> SlidingState:
    """Assemble surfaces, gains, layer widths and dynamics matrices."""
    s = surface_vector(frame, target, config, h_d_hat)
    F, G = build_F_G(frame, target, config, h_d_hat)
    K = gains_from_bounds(frame, target, config, h_d_hat)
    phi = boundary_layer(K, config)
    return SlidingState(
        s=s,
        K_diag=K,
        phi=phi,
        F=F,
        G=G,
        beta=beta_angle(frame.h_hat, target.h_d_hat),
    )


def control_full(
    frame: RtnFrame,
    target: OrbitTarget,
    f_rtn: np.ndarray,
    config: ControllerConfig,
    h_d_hat: np.ndarray | None = None,
    sliding: SlidingState | None = None,
    blackout: bool = False,
) -> ControlCommand:
    """Three-channel law ``u = -F^{-1} (G + K sw(s)) - f``.

    Args:
        frame: Current RTN frame.
        target: Conic to converge to.
        f_rtn: Known (non-disturbance) acceleration in RTN, m/s^2.
        config: Gains and switching options.
        h_d_hat: Optional safeguarded desired normal.
        sliding: Optional precomputed :func:`evaluate_controller` output.
        blackout: When True the command is zero and flagged.

    Returns:
        Command with both RTN and inertial components filled in (no actuator
        clamping applied here).
    """
    if blackout:
        return ControlCommand(
            u_rtn=np.zeros(3), u_inertial=np.zeros(3), blackout=True
        )
    ss = sliding if sliding is not None else evaluate_controller(
        frame, target, config, h_d_hat
    )
    sw = np.array(
        [
            switch_value(float(ss.s[i]), float(ss.phi[i]), config.switching)
            for i in range(3)
        ]
    )
    u_rtn = -solve_upper_triangular(ss.F, ss.G + ss.K_diag * sw) - np.asarray(
        f_rtn, float
    )
    return ControlCommand(u_rtn=u_rtn, u_inertial=project_from_rtn(u_rtn, frame))


def equivalent_accel(
    frame: RtnFrame,
    target: OrbitTarget,
    config: ControllerConfig,
    h_d_hat: np.ndarray | None = None,
) -> np.ndarray:
    """Continuous acceleration that keeps the surfaces frozen: ``-F^{-1} G``.

    This is the total RTN acceleration the closed loop applies on average
    once sliding; its transverse component is structurally zero because the
    second row of ``G`` vanishes while ``F`` is upper triangular.
    """
    F, G = build_F_G(frame, target, config, h_d_hat)
    return -solve_upper_triangular(F, G)


def lyapunov_value(s: np.ndarray) -> float:
    """Quadratic Lyapunov function ``V = s . s / 2`` of the surface vector."""
    s = np.asarray(s, float)
    return 0.5 * float(s @ s)


__all__ = [
    "ControlCommand",
    "ControllerConfig",
    "SlidingState",
    "beta_angle",
    "beta_safeguard",
    "boundary_layer",
    "build_F_G",
    "control_full",
    "control_normal",
    "equivalent_accel",
    "evaluate_controller",
    "gains_from_bounds",
    "lyapunov_value",
    "sat",
    "solve_upper_triangular",
    "surface_sN",
    "surface_scalar",
    "surface_vector",
    "switch_value",
]

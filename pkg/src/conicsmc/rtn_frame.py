"""Radial-transverse-normal (RTN) frame construction and kinematics.

The RTN frame is attached to the instantaneous position and velocity of a
particle orbiting (or steered around) a focus point:

* ``r_hat`` points from the focus to the particle,
* ``h_hat`` points along the instantaneous angular momentum ``r x v``,
* ``theta_hat = h_hat x r_hat`` completes the right-handed triad and points
  along the transverse (in-plane, forward) direction.

The frame rotates as the particle moves.  Its versor rates depend only on the
scalars ``h`` and ``r`` and on the normal component of the total applied
acceleration, which makes them the orbital analogue of the Frenet-Serret
kinematics of a space curve.

All quantities are SI (meters, seconds, radians) unless stated otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateState

# Below these thresholds the triad direction is numerically meaningless.
R_MIN = 1e-6  # m
H_MIN = 1e-6  # m^2/s


@dataclass(frozen=True)
class StateVector:
    """Inertial translational state.

    Attributes:
        r: Position vector (3,) in meters.
        v: Velocity vector (3,) in m/s.
        t: Epoch in seconds relative to simulation start.
    """

    r: np.ndarray
    v: np.ndarray
    t: float = 0.0


@dataclass(frozen=True)
class RtnFrame:
    """Orthonormal RTN triad plus the scalars needed by the frame kinematics.

    Attributes:
        r_hat: Radial versor (3,).
        theta_hat: Transverse versor (3,).
        h_hat: Normal versor (3,), along ``r x v``.
        r: Radius magnitude in meters.
        h: Specific angular momentum magnitude in m^2/s.
        r_dot: Radial velocity ``v . r_hat`` in m/s.
    """

    r_hat: np.ndarray
    theta_hat: np.ndarray
    h_hat: np.ndarray
    r: float
    h: float
    r_dot: float


def build_frame(state: StateVector) -> RtnFrame:
    """Construct the RTN triad from an inertial state.

    Args:
        state: Inertial position and velocity.

    Returns:
        The orthonormal frame together with ``r``, ``h`` and ``r_dot``.

    Raises:
        DegenerateState: If ``|r| < R_MIN`` or ``|r x v| < H_MIN`` (rectilinear
            or undefined orbit geometry).

    Example:
        >>> f = build_frame(StateVector(np.array([1e6, 0, 0]), np.array([0, 7e3, 0])))
        >>> f.h_hat
        array([0., 0., 1.])
    """
    r_vec = np.asarray(state.r, dtype=float)
    v_vec = np.asarray(state.v, dtype=float)
    r = float(np.linalg.norm(r_vec))
    if not np.isfinite(r) or r < R_MIN:
        raise DegenerateState(f"|r| = {r:.3e} m is below R_MIN = {R_MIN:.1e} m")
    h_vec = np.cross(r_vec, v_vec)
    h = float(np.linalg.norm(h_vec))
    if not np.isfinite(h) or h < H_MIN:
        raise DegenerateState(
            f"|r x v| = {h:.3e} m^2/s is below H_MIN = {H_MIN:.1e} m^2/s"
        )
    r_hat = r_vec / r
    h_hat = h_vec / h
    theta_hat = np.cross(h_hat, r_hat)
    return RtnFrame(
        r_hat=r_hat,
        theta_hat=theta_hat,
        h_hat=h_hat,
        r=r,
        h=h,
        r_dot=float(v_vec @ r_hat),
    )


def project_to_rtn(vec: np.ndarray, frame: RtnFrame) -> np.ndarray:
    """Express an inertial vector in RTN components ``[R, T, N]``.

    Args:
        vec: Inertial vector (3,).
        frame: Frame to project onto.

    Returns:
        Array ``[vec . r_hat, vec . theta_hat, vec . h_hat]``.
    """
    vec = np.asarray(vec, dtype=float)
    return np.array(
        [vec @ frame.r_hat, vec @ frame.theta_hat, vec @ frame.h_hat]
    )


def project_from_rtn(vec_rtn: np.ndarray, frame: RtnFrame) -> np.ndarray:
    """Map RTN components back to the inertial frame.

    Inverse of :func:`project_to_rtn` for the same frame.

    Args:
        vec_rtn: Components ``[R, T, N]``.
        frame: Frame the components are expressed in.

    Returns:
        Inertial vector (3,).
    """
    vec_rtn = np.asarray(vec_rtn, dtype=float)
    return (
        vec_rtn[0] * frame.r_hat
        + vec_rtn[1] * frame.theta_hat
        + vec_rtn[2] * frame.h_hat
    )


def frame_rates(
    frame: RtnFrame, a_n: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Inertial time derivatives of the three RTN versors.

    The triad rotates with angular velocity ``(r a_N / h) r_hat + (h / r^2) h_hat``,
    where ``a_N`` is the normal component of the total acceleration acting on
    the particle.  Written out per versor:

        d(r_hat)/dt     =  (h / r^2) theta_hat
        d(theta_hat)/dt =  (r a_N / h) h_hat - (h / r^2) r_hat
        d(h_hat)/dt     = -(r a_N / h) theta_hat

    Args:
        frame: Current frame.
        a_n: Normal component of the total acceleration in m/s^2.

    Returns:
        Tuple ``(dr_hat, dtheta_hat, dh_hat)`` of inertial derivatives (1/s).
    """
    in_plane = frame.h / frame.r**2
    out_of_plane = frame.r * a_n / frame.h
    dr_hat = in_plane * frame.theta_hat
    dtheta_hat = out_of_plane * frame.h_hat - in_plane * frame.r_hat
    dh_hat = -out_of_plane * frame.theta_hat
    return dr_hat, dtheta_hat, dh_hat


def rtn_component_rates(
    vec_rtn: np.ndarray,
    vec_dot_rtn: np.ndarray,
    frame: RtnFrame,
    a_n: float,
) -> np.ndarray:
    """Time derivatives of the RTN components of an arbitrary vector.

    The components of a vector ``A`` change both because ``A`` itself changes
    and because the triad rotates underneath it:

        d(A_R)/dt = Adot_R + (h / r^2) A_T
        d(A_T)/dt = Adot_T + (r a_N / h) A_N - (h / r^2) A_R
        d(A_N)/dt = Adot_N - (r a_N / h) A_T

    where ``Adot_*`` are the RTN components of the inertial derivative of ``A``.
    For a vector fixed in the inertial frame pass ``vec_dot_rtn = 0``.

    Args:
        vec_rtn: RTN components of the vector.
        vec_dot_rtn: RTN components of its inertial time derivative.
        frame: Current frame.
        a_n: Normal component of the total acceleration in m/s^2.

    Returns:
        Array of component rates ``[dA_R/dt, dA_T/dt, dA_N/dt]``.
    """
    vec_rtn = np.asarray(vec_rtn, dtype=float)
    vec_dot_rtn = np.asarray(vec_dot_rtn, dtype=float)
    in_plane = frame.h / frame.r**2
    out_of_plane = frame.r * a_n / frame.h
    return np.array(
        [
            vec_dot_rtn[0] + in_plane * vec_rtn[1],
            vec_dot_rtn[1] + out_of_plane * vec_rtn[2] - in_plane * vec_rtn[0],
            vec_dot_rtn[2] - out_of_plane * vec_rtn[1],
        ]
    )

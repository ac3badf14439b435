"""Two-body invariants: angular momentum, eccentricity vector, energy.

A conic section with focus at the origin is fully described by two vector
invariants of the motion: the specific angular momentum ``h_vec = r x v``
(normal to the plane, magnitude sets the semi-latus rectum) and the
eccentricity vector ``e_vec = (v x h_vec) / mu - r_hat`` (points at periapsis,
magnitude sets the shape).  Regulating both to target values forces the
particle onto the target conic, which is what the sliding-mode controller in
:mod:`conicsmc.sliding_controller` does.

The gravitational parameter ``mu`` is a design quantity here: for a particle
with no natural gravity it simply scales the virtual conic dynamics the
controller enforces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateState, InvalidTarget
from .rtn_frame import R_MIN, RtnFrame, StateVector, build_frame

# Relative tolerance on h_vec . e_vec for a target to count as consistent.
PERP_TOL = 1e-9


@dataclass(frozen=True)
class OrbitTarget:
    """Desired conic, expressed through its two vector invariants.

    Attributes:
        h_d_vec: Desired specific angular momentum vector (3,) in m^2/s.
        e_d_vec: Desired eccentricity vector (3,), dimensionless.
        mu: Gravitational parameter of the (possibly virtual) two-body
            dynamics, m^3/s^2.

    Raises:
        InvalidTarget: If ``|h_d_vec|`` is zero, ``mu <= 0``, or the two
            vectors are not perpendicular to within ``PERP_TOL`` relative to
            their magnitudes.
    """

    h_d_vec: np.ndarray
    e_d_vec: np.ndarray
    mu: float

    def __post_init__(self):
        object.__setattr__(self, "h_d_vec", np.asarray(self.h_d_vec, float))
        object.__setattr__(self, "e_d_vec", np.asarray(self.e_d_vec, float))
        h_d = np.linalg.norm(self.h_d_vec)
        e_d = np.linalg.norm(self.e_d_vec)
        if not np.isfinite(h_d) or h_d <= 0.0:
            raise InvalidTarget("|h_d_vec| must be positive and finite")
        if self.mu <= 0.0 or not np.isfinite(self.mu):
            raise InvalidTarget("mu must be positive and finite")
        scale = h_d * max(e_d, 1.0)
        if abs(float(self.h_d_vec @ self.e_d_vec)) > PERP_TOL * scale:
            raise InvalidTarget(
                "h_d_vec and e_d_vec must be perpendicular "
                f"(dot = {float(self.h_d_vec @ self.e_d_vec):.3e})"
            )

    @property
    def h_d(self) -> float:
        """Magnitude of the desired angular momentum, m^2/s."""
        return float(np.linalg.norm(self.h_d_vec))

    @property
    def h_d_hat(self) -> np.ndarray:
        """Unit normal of the desired orbit plane."""
        return self.h_d_vec / self.h_d

    @property
    def e_d(self) -> float:
        """Desired eccentricity magnitude."""
        return float(np.linalg.norm(self.e_d_vec))

    @property
    def p(self) -> float:
        """Semi-latus rectum of the target conic, m."""
        return self.h_d**2 / self.mu


@dataclass(frozen=True)
class ConicElements:
    """Classical shape and orientation parameters of a conic.

    Attributes:
        p: Semi-latus rectum, m.
        e: Eccentricity magnitude (>= 0; > 1 for hyperbolas).
        raan: Right ascension of the ascending node, rad.
        inc: Inclination, rad.
        argp: Argument of periapsis, rad.
    """

    p: float
    e: float
    raan: float = 0.0
    inc: float = 0.0
    argp: float = 0.0

    def __post_init__(self):
        if self.p <= 0.0 or not np.isfinite(self.p):
            raise InvalidTarget("semi-latus rectum must be positive")
        if self.e < 0.0 or not np.isfinite(self.e):
            raise InvalidTarget("eccentricity must be non-negative")


def specific_angular_momentum(state: StateVector) -> np.ndarray:
    """``r x v`` in m^2/s."""
    return np.cross(np.asarray(state.r, float), np.asarray(state.v, float))


def eccentricity_vector(state: StateVector, mu: float) -> np.ndarray:
    """Eccentricity vector ``(v x h) / mu - r_hat`` of the osculating conic.

    Args:
        state: Inertial state.
        mu: Gravitational parameter, m^3/s^2.

    Returns:
        Dimensionless vector pointing from the focus to periapsis, with
        magnitude equal to the orbit eccentricity.

    Raises:
        DegenerateState: For near-zero radius (direction undefined).
    """
    r_vec = np.asarray(state.r, float)
    r = float(np.linalg.norm(r_vec))
    if not np.isfinite(r) or r < R_MIN:
        raise DegenerateState(f"|r| = {r:.3e} m is below R_MIN = {R_MIN:.1e} m")
    h_vec = specific_angular_momentum(state)
    return np.cross(np.asarray(state.v, float), h_vec) / mu - r_vec / r


def eccentricity_rtn(frame: RtnFrame, mu: float) -> np.ndarray:
    """Eccentricity vector in RTN components, from frame scalars alone.

    In the particle's own RTN frame the eccentricity vector is

        e_RTN = [ (h^2 / r - mu) / mu,  -r_dot h / mu,  0 ]

    The normal component is identically zero because the eccentricity vector
    of the osculating orbit lies in the orbit plane.

    Args:
        frame: RTN frame of the current state.
        mu: Gravitational parameter, m^3/s^2.

    Returns:
        ``[e_R, e_T, 0.0]``.
    """
    return np.array(
        [
            (frame.h**2 / frame.r - mu) / mu,
            -frame.r_dot * frame.h / mu,
            0.0,
        ]
    )


def eccentricity_rtn_rate(frame: RtnFrame, a_rtn: np.ndarray, mu: float) -> np.ndarray:
    """RTN components of the inertial time derivative of the eccentricity vector.

    For a total applied acceleration with RTN components ``(a_R, a_T, a_N)``:

        mu * de/dt = [ 2 h a_T,
                       -h a_R - r_dot r a_T - mu h / r^2,
                       -r_dot r a_N ]

    Note this is the derivative of the vector itself projected onto RTN, not
    the derivative of the RTN components; feed it through
    :func:`conicsmc.rtn_frame.rtn_component_rates` to get component rates.

    Args:
        frame: Current RTN frame.
        a_rtn: Total acceleration in RTN, m/s^2.
        mu: Gravitational parameter, m^3/s^2.

    Returns:
        ``d(e_vec)/dt`` projected on RTN, 1/s.
    """
    a_r, a_t, a_n = (float(x) for x in a_rtn)
    r, h, r_dot = frame.r, frame.h, frame.r_dot
    return (
        np.array(
            [
                2.0 * h * a_t,
                -h * a_r - r_dot * r * a_t - mu * h / r**2,
                -r_dot * r * a_n,
            ]
        )
        / mu
    )


def specific_energy(state: StateVector, mu: float) -> float:
    """Keplerian specific orbital energy ``v^2 / 2 - mu / r`` in m^2/s^2."""
    r = float(np.linalg.norm(state.r))
    if r < R_MIN:
        raise DegenerateState(f"|r| = {r:.3e} m is below R_MIN = {R_MIN:.1e} m")
    v2 = float(np.asarray(state.v, float) @ np.asarray(state.v, float))
    return 0.5 * v2 - mu / r


def mu_from_period(period: float, h: float, e: float) -> float:
    """Gravitational parameter that gives a closed orbit its period.

    Combining Kepler's third law with ``a = h^2 / (mu (1 - e^2))`` yields

        mu = (4 pi^2 h^6 / (T^2 (1 - e^2)^3)) ** (1/4)

    Args:
        period: Orbital period T, s.
        h: Specific angular momentum magnitude, m^2/s.
        e: Eccentricity magnitude; must satisfy ``e < 1``.

    Returns:
        mu in m^3/s^2.

    Raises:
        InvalidTarget: If the orbit is not closed (``e >= 1``) or inputs are
            non-positive.
    """
    if e >= 1.0:
        raise InvalidTarget("a period only constrains mu for closed orbits (e < 1)")
    if period <= 0.0 or h <= 0.0 or e < 0.0:
        raise InvalidTarget("period and h must be positive, e non-negative")
    return (4.0 * math.pi**2 * h**6 / (period**2 * (1.0 - e * e) ** 3)) ** 0.25


def _perifocal_axes(raan: float, inc: float, argp: float):
    """Unit vectors of periapsis, in-plane quadrature, and orbit normal."""
    cO, sO = math.cos(raan), math.sin(raan)
    ci, si = math.cos(inc), math.sin(inc)
    cw, sw = math.cos(argp), math.sin(argp)
    rot = np.array(
        [
            [cO * cw - sO * sw * ci, -cO * sw - sO * cw * ci, sO * si],
            [sO * cw + cO * sw * ci, -sO * sw + cO * cw * ci, -cO * si],
            [sw * si, cw * si, ci],
        ]
    )
    return rot[:, 0], rot[:, 1], rot[:, 2]


def target_from_elements(elements: ConicElements, mu: float) -> OrbitTarget:
    """Build the invariant-vector target matching classical conic elements.

    Args:
        elements: Shape (p, e) and orientation (raan, inc, argp).
        mu: Gravitational parameter, m^3/s^2.

    Returns:
        Target with ``|h_d_vec| = sqrt(mu p)`` along the orbit normal and
        ``|e_d_vec| = e`` along the periapsis direction.
    """
    e_hat, _, n_hat = _perifocal_axes(elements.raan, elements.inc, elements.argp)
    h_mag = math.sqrt(mu * elements.p)
    return OrbitTarget(
        h_d_vec=h_mag * n_hat, e_d_vec=elements.e * e_hat, mu=mu
    )


def elements_from_target(target: OrbitTarget) -> ConicElements:
    """Recover classical elements from an invariant-vector target.

    For zero inclination the node is undefined; the convention here is
    ``raan = 0`` with the argument of periapsis measured from the x axis.
    Likewise a circular target gets ``argp = 0``.
    """
    n_hat = target.h_d_hat
    inc = math.acos(max(-1.0, min(1.0, n_hat[2])))
    node = np.cross([0.0, 0.0, 1.0], n_hat)
    if np.linalg.norm(node) < 1e-12:
        node = np.array([1.0, 0.0, 0.0])
        raan = 0.0
    else:
        node = node / np.linalg.norm(node)
        raan = math.atan2(node[1], node[0])
    e = target.e_d
    if e < 1e-12:
        argp = 0.0
    else:
        e_hat = target.e_d_vec / e
        cos_w = float(node @ e_hat)
        sin_w = float(np.cross(node, e_hat) @ n_hat)
        argp = math.atan2(sin_w, cos_w)
    return ConicElements(p=target.p, e=e, raan=raan, inc=inc, argp=argp)


def state_from_target(target: OrbitTarget, nu: float, t: float = 0.0) -> StateVector:
    """State lying exactly on the target conic at true anomaly ``nu``.

    Args:
        target: Conic to place the state on.
        nu: True anomaly from periapsis, rad.  For hyperbolic targets it must
            keep ``1 + e cos(nu)`` positive.
        t: Epoch attached to the returned state.

    Returns:
        State whose invariants (computed with ``target.mu``) equal the
        target's.

    Raises:
        InvalidTarget: If ``nu`` lies outside the reachable branch of a
            hyperbolic or parabolic conic.
    """
    n_hat = target.h_d_hat
    e = target.e_d
    if e < 1e-12:
        ref = np.array([1.0, 0.0, 0.0])
        if abs(float(ref @ n_hat)) > 0.9:
            ref = np.array([0.0, 1.0, 0.0])
        e_hat = ref - (ref @ n_hat) * n_hat
        e_hat /= np.linalg.norm(e_hat)
    else:
        e_hat = target.e_d_vec / e
    q_hat = np.cross(n_hat, e_hat)
    denom = 1.0 + e * math.cos(nu)
    if denom <= 1e-9:
        raise InvalidTarget(
            f"true anomaly {nu:.3f} rad is outside the conic branch (e = {e:.3f})"
        )
    r = target.p / denom
    h = target.h_d
    r_hat = math.cos(nu) * e_hat + math.sin(nu) * q_hat
    theta_hat = np.cross(n_hat, r_hat)
    v = (target.mu / h * e * math.sin(nu)) * r_hat + (h / r) * theta_hat
    return StateVector(r * r_hat, v, t)


def invariants(state: StateVector, mu: float):
    """Convenience bundle ``(h_vec, e_vec, energy)`` for logging and metrics."""
    return (
        specific_angular_momentum(state),
        eccentricity_vector(state, mu),
        specific_energy(state, mu),
    )


__all__ = [
    "ConicElements",
    "OrbitTarget",
    "eccentricity_rtn",
    "eccentricity_rtn_rate",
    "eccentricity_vector",
    "elements_from_target",
    "invariants",
    "mu_from_period",
    "specific_angular_momentum",
    "specific_energy",
    "state_from_target",
    "target_from_elements",
]

"""Sampling and checking of conic sections from their vector invariants.

A target conic arrives as a pair of vectors, the orbit-normal angular
momentum and the periapsis-pointing eccentricity vector, plus the
gravitational parameter. Those fix plane, orientation, and shape, so the
curve can be traced directly in true anomaly without integrating any
motion.
"""

from __future__ import annotations

import numpy as np

SAMPLES = 720
HYPERBOLA_MARGIN = 0.05


def conic_points(h_vec, e_vec, mu: float, samples: int = SAMPLES) -> np.ndarray:
    """Points on the conic, shape (samples, 3), ordered by true anomaly.

    Closed conics are sampled over the full turn. Open ones stop
    ``HYPERBOLA_MARGIN`` radians short of the asymptote angle on each
    side, where the radius is still finite.
    """
    h_vec = np.asarray(h_vec, float)
    e_vec = np.asarray(e_vec, float)
    h = float(np.linalg.norm(h_vec))
    if h == 0.0 or mu <= 0.0:
        raise ValueError("conic needs a nonzero momentum vector and mu > 0")
    e = float(np.linalg.norm(e_vec))
    p = h * h / mu
    h_hat = h_vec / h
    if e > 1e-12:
        peri = e_vec / e
    else:
        # Circle: periapsis is undefined, any in-plane direction serves.
        trial = np.array([1.0, 0.0, 0.0])
        if abs(float(trial @ h_hat)) > 0.9:
            trial = np.array([0.0, 1.0, 0.0])
        peri = trial - float(trial @ h_hat) * h_hat
        peri /= np.linalg.norm(peri)
    side = np.cross(h_hat, peri)
    if e < 1.0:
        nu = np.linspace(-np.pi, np.pi, samples)
    else:
        nu_max = float(np.arccos(-1.0 / e)) - HYPERBOLA_MARGIN
        nu = np.linspace(-nu_max, nu_max, samples)
    radius = p / (1.0 + e * np.cos(nu))
    return radius[:, None] * (
        np.cos(nu)[:, None] * peri + np.sin(nu)[:, None] * side
    )


def conic_residual(points: np.ndarray, h_vec, e_vec, mu: float) -> float:
    """Worst relative violation of the orbit equation over the points.

    Every point of the conic satisfies r (1 + e cos nu) = p, and with nu
    measured from the eccentricity vector the left side is just
    |r| + r . e, so the check needs no angle bookkeeping at all.
    """
    points = np.asarray(points, float)
    h_vec = np.asarray(h_vec, float)
    e_vec = np.asarray(e_vec, float)
    p = float(h_vec @ h_vec) / mu
    lhs = np.linalg.norm(points, axis=1) + points @ e_vec
    return float(np.max(np.abs(lhs - p)) / p)

"""Exception types raised across the library."""

from __future__ import annotations


class ConicControlError(Exception):
    """Base class for all library-specific errors."""


class DegenerateState(ConicControlError):
    """Position or angular momentum too small to define an orbit frame."""


class InvalidTarget(ConicControlError):
    """Target invariants are inconsistent (non-perpendicular, zero, or unbounded)."""


class PlaneSingularity(ConicControlError):
    """Normal-channel control is singular because the desired plane normal has
    no positive component along the current orbit normal."""


class AntiParallel(ConicControlError):
    """Current and desired orbit normals are exactly opposed; the rotation
    plane used by the plane-error safeguard is undefined."""


class NumericalBlowup(ConicControlError):
    """Integration produced non-finite values or the radius guard tripped."""


class ConfigError(ConicControlError):
    """Invalid run configuration, overrides, or config file contents."""

"""Offline figure generation from trajectory logs.

plotviz turns the CSV log and manifest that the scenario runner writes
into report figures: 3-D trajectories with the target conic dashed over
them, control component traces, and multi-panel orbit projections. It
reads those artifacts only, never the simulation code, so any tool that
produces the same file formats gets the same figures.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .conic import HYPERBOLA_MARGIN, SAMPLES, conic_points, conic_residual
from .figures import FIGURE_KINDS, PlotSpec, plot
from .readers import (
    MissingColumn,
    load_manifest,
    load_table,
    manifest_blackout,
    manifest_targets,
    require_columns,
)

__all__ = [
    "FIGURE_KINDS",
    "HYPERBOLA_MARGIN",
    "MissingColumn",
    "PlotSpec",
    "SAMPLES",
    "conic_points",
    "conic_residual",
    "load_manifest",
    "load_table",
    "manifest_blackout",
    "manifest_targets",
    "plot",
    "require_columns",
    "__version__",
]

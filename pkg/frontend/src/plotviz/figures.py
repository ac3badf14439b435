"""Figure rendering from a trajectory table and an optional manifest.

Each renderer checks the columns it needs up front, draws from plain
arrays, and touches the filesystem only through ``Figure.savefig`` on the
requested output path, so plotting can never modify its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

# Batch tool: select the file-only backend before pyplot binds one.
matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .conic import conic_points
from .readers import load_manifest, load_table, manifest_targets, require_columns

FIGURE_KINDS = (
    "traj3d_inertial",
    "traj3d_relative",
    "control_components",
    "multiview",
)

_AXIS = {"x": 0, "y": 1, "z": 2}


@dataclass(frozen=True)
class PlotSpec:
    """One figure request.

    ``markers`` are (label, time) pairs to annotate, for example the two
    endpoints of a command blackout window. Markers outside the logged
    time span are skipped. ``manifest`` supplies the target conics for
    the dashed overlay; without it the trajectory is drawn alone.
    """

    input: str | Path
    kind: str
    out: str | Path
    manifest: str | Path | None = None
    markers: tuple[tuple[str, float], ...] = ()


def plot(spec: PlotSpec) -> Path:
    """Render one figure and return the written image path."""
    if spec.kind not in FIGURE_KINDS:
        raise ValueError(
            f"unknown figure kind {spec.kind!r} (one of: {', '.join(FIGURE_KINDS)})"
        )
    table = load_table(spec.input)
    manifest = load_manifest(spec.manifest) if spec.manifest else None
    fig = _RENDERERS[spec.kind](table, manifest, spec)
    out = Path(spec.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def _overlays(manifest: dict | None) -> list[np.ndarray]:
    if manifest is None:
        return []
    return [
        conic_points(t["h_d_vec"], t["e_d_vec"], t["mu"])
        for t in manifest_targets(manifest)
    ]


def _in_span(table: dict, time: float) -> bool:
    t = table["t"]
    return float(t[0]) <= time <= float(t[-1])


def _nearest_row(t: np.ndarray, time: float) -> int:
    return int(np.argmin(np.abs(t - time)))


def _positions(table: dict, prefix: str, source: str) -> np.ndarray:
    cols = ("t", f"{prefix}x", f"{prefix}y", f"{prefix}z")
    require_columns(table, cols, source)
    return np.column_stack([table[f"{prefix}{axis}"] for axis in "xyz"])


def _set_equal_3d(ax, clouds: list[np.ndarray]) -> None:
    pts = np.vstack(clouds)
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    center = (lo + hi) / 2.0
    half = float((hi - lo).max()) / 2.0 or 1.0
    ax.set_xlim(center[0] - half, center[0] + half)
    ax.set_ylim(center[1] - half, center[1] + half)
    ax.set_zlim(center[2] - half, center[2] + half)
    ax.set_box_aspect((1.0, 1.0, 1.0))


def _draw_traj3d(ax, table: dict, xyz: np.ndarray, overlays, spec: PlotSpec) -> None:
    ax.plot(*xyz.T, color="C0", lw=1.0, label="trajectory")
    for i, pts in enumerate(overlays):
        ax.plot(
            *pts.T, "--", color="C3", lw=1.2,
            label="target conic" if i == 0 else None,
        )
    for label, time in spec.markers:
        if not _in_span(table, time):
            continue
        row = _nearest_row(table["t"], time)
        ax.scatter(*xyz[row], color="k", s=25, zorder=5)
        ax.text(*xyz[row], f" {label}", fontsize=8)
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.set_zlabel("z [m]")
    ax.legend(loc="upper right", fontsize=8)
    _set_equal_3d(ax, [xyz, *overlays])


def _render_traj3d(table, manifest, spec, prefix: str, title: str):
    xyz = _positions(table, prefix, str(spec.input))
    fig = plt.figure(figsize=(7.5, 6.0))
    ax = fig.add_subplot(projection="3d")
    _draw_traj3d(ax, table, xyz, _overlays(manifest), spec)
    ax.set_title(title)
    return fig


def _render_traj3d_inertial(table, manifest, spec):
    return _render_traj3d(table, manifest, spec, "r", "Trajectory, inertial frame")


def _render_traj3d_relative(table, manifest, spec):
    return _render_traj3d(table, manifest, spec, "rel_r", "Trajectory, relative frame")


def _render_control_components(table, manifest, spec):
    require_columns(table, ("t", "ux", "uy", "uz"), str(spec.input))
    fig, axes = plt.subplots(3, 1, sharex=True, figsize=(7.5, 6.0))
    for ax, name in zip(axes, ("ux", "uy", "uz")):
        ax.plot(table["t"], table[name], color="C0", lw=0.9)
        ax.set_ylabel(f"{name} [m/s$^2$]")
        ax.grid(True, alpha=0.3)
        for _, time in spec.markers:
            if _in_span(table, time):
                ax.axvline(time, color="k", ls=":", lw=0.9)
    for label, time in spec.markers:
        if _in_span(table, time):
            axes[0].annotate(
                label, (time, 1.0), xycoords=("data", "axes fraction"),
                ha="left", va="bottom", fontsize=8, rotation=30,
            )
    axes[-1].set_xlabel("t [s]")
    fig.suptitle("Applied control components")
    return fig


def _render_multiview(table, manifest, spec):
    xyz = _positions(table, "rel_r", str(spec.input))
    overlays = _overlays(manifest)
    fig = plt.figure(figsize=(9.5, 8.0))
    for i, (a, b) in enumerate((("x", "y"), ("x", "z"), ("y", "z"))):
        ax = fig.add_subplot(2, 2, i + 1)
        ax.plot(xyz[:, _AXIS[a]], xyz[:, _AXIS[b]], color="C0", lw=0.8)
        for pts in overlays:
            ax.plot(pts[:, _AXIS[a]], pts[:, _AXIS[b]], "--", color="C3", lw=1.0)
        for label, time in spec.markers:
            if not _in_span(table, time):
                continue
            row = _nearest_row(table["t"], time)
            ax.scatter(xyz[row, _AXIS[a]], xyz[row, _AXIS[b]], color="k", s=20)
        ax.set_xlabel(f"{a} [m]")
        ax.set_ylabel(f"{b} [m]")
        ax.set_aspect("equal", adjustable="datalim")
        ax.grid(True, alpha=0.3)
    ax3d = fig.add_subplot(2, 2, 4, projection="3d")
    _draw_traj3d(ax3d, table, xyz, overlays, spec)
    fig.suptitle("Orbit projections, relative frame")
    return fig


_RENDERERS = {
    "traj3d_inertial": _render_traj3d_inertial,
    "traj3d_relative": _render_traj3d_relative,
    "control_components": _render_control_components,
    "multiview": _render_multiview,
}

"""Parsers for the runner's CSV trajectory logs and JSON manifests.

The reader side is deliberately strict: a log is a rectangular table with
a one-line header, a manifest is a JSON object with a ``scenario`` entry,
and anything else is reported with the offending file in the message
rather than silently coerced.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np


class MissingColumn(ValueError):
    """A figure asked for a CSV column the log does not carry."""

    def __init__(self, column: str, source: str, available: tuple[str, ...]):
        self.column = column
        super().__init__(
            f"column {column!r} missing from {source} "
            f"(has: {', '.join(available)})"
        )


def load_table(path: str | Path) -> dict[str, np.ndarray]:
    """CSV trajectory log as a mapping of column name to 1-D float array."""
    path = Path(path)
    with path.open() as fh:
        header = fh.readline().strip()
        if not header:
            raise ValueError(f"{path} is empty")
        names = header.split(",")
        try:
            data = np.loadtxt(fh, delimiter=",", ndmin=2)
        except ValueError as exc:
            raise ValueError(f"{path} is not a rectangular CSV: {exc}") from exc
    if data.size == 0:
        raise ValueError(f"{path} has a header but no data rows")
    if data.shape[1] != len(names):
        raise ValueError(
            f"{path} rows carry {data.shape[1]} fields, header names {len(names)}"
        )
    return {name: data[:, i] for i, name in enumerate(names)}


def require_columns(
    table: dict[str, np.ndarray], names: tuple[str, ...], source: str
) -> None:
    """Raise :class:`MissingColumn` for the first of ``names`` not present."""
    for name in names:
        if name not in table:
            raise MissingColumn(name, source, tuple(table))


def load_manifest(path: str | Path) -> dict:
    """Run manifest as a dict, rejecting files that are not manifests."""
    path = Path(path)
    with path.open() as fh:
        manifest = json.load(fh)
    if not isinstance(manifest, dict) or "scenario" not in manifest:
        raise ValueError(f"{path} is not a run manifest (no scenario entry)")
    return manifest


def manifest_targets(manifest: dict) -> list[dict]:
    """Target conic dicts stored in a manifest, in mission order."""
    return list(manifest["scenario"]["targets"])


def manifest_blackout(manifest: dict) -> tuple[float, float] | None:
    """Command blackout window as (start, end) seconds, if the run had one."""
    window = manifest["scenario"]["sim"].get("blackout")
    if window is None:
        return None
    start, end = window
    return float(start), float(end)

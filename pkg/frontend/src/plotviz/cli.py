"""Command-line figure renderer.

Exit codes: 0 success, 2 for bad arguments or unusable inputs, with the
offending column or file named in the message.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .figures import FIGURE_KINDS, PlotSpec, plot
from .readers import load_manifest, manifest_blackout

EXIT_OK = 0
EXIT_CONFIG = 2


def parse_markers(pairs: list[str]) -> list[tuple[str, float]]:
    """``label=time`` strings to (label, seconds) pairs."""
    out = []
    for pair in pairs:
        label, sep, raw = pair.partition("=")
        if not sep or not label:
            raise ValueError(f"marker must look like label=time, got {pair!r}")
        try:
            out.append((label, float(raw)))
        except ValueError:
            raise ValueError(f"marker time is not a number: {pair!r}") from None
    return out


def cmd_plot(args) -> int:
    markers = parse_markers(args.marker)
    if args.manifest:
        window = manifest_blackout(load_manifest(args.manifest))
        if window is not None:
            markers.append(("blackout start", window[0]))
            markers.append(("blackout end", window[1]))
    spec = PlotSpec(
        input=args.input,
        kind=args.kind,
        out=args.out,
        manifest=args.manifest,
        markers=tuple(markers),
    )
    out = plot(spec)
    print(f"{spec.kind}: {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plotviz",
        description="Render figures from trajectory logs and run manifests.",
    )
    parser.add_argument(
        "--version", action="version", version=f"plotviz {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pl = sub.add_parser("plot", help="render one figure from a trajectory log")
    pl.add_argument("--input", required=True, help="trajectory CSV path")
    pl.add_argument(
        "--kind", required=True, choices=FIGURE_KINDS, help="figure kind"
    )
    pl.add_argument("--out", required=True, help="output image path")
    pl.add_argument(
        "--manifest",
        help="run manifest; adds the target conic overlay and blackout markers",
    )
    pl.add_argument(
        "--marker",
        action="append",
        default=[],
        metavar="LABEL=TIME",
        help="extra annotated time, repeatable",
    )
    pl.set_defaults(func=cmd_plot)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

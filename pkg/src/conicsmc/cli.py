"""Command-line runner for scenarios, sweeps, and the validation battery.

Exit codes: 0 success, 2 configuration problems (unknown scenario, bad
config file, bad override), 3 simulation blowup, with the failure time in
the message.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

import jsonschema

from . import __version__
from .errors import ConfigError, DegenerateState, NumericalBlowup
from .scenarios import (
    Scenario,
    apply_overrides,
    build_scenario,
    list_scenarios,
    run_scenario,
)
from .validation import run_all_checks

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BLOWUP = 3


def load_schema() -> dict:
    with resources.files("conicsmc").joinpath("config_schema.json").open() as fh:
        return json.load(fh)


def parse_overrides(pairs: list[str]) -> dict:
    """``key=value`` strings to a dict, values parsed as JSON when possible."""
    out = {}
    for pair in pairs:
        key, sep, raw = pair.partition("=")
        if not sep or not key:
            raise ConfigError(f"override must look like key=value, got {pair!r}")
        try:
            out[key] = json.loads(raw)
        except json.JSONDecodeError:
            out[key] = raw
    return out


def scenario_from_config(path: str, overrides: dict) -> tuple[Scenario, int | None]:
    """Scenario from a config or manifest file, plus any stored decimation."""
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    schema = load_schema()
    decimate = None
    if isinstance(cfg, dict) and "scenario" in cfg:
        branch = {**schema, "anyOf": [{"$ref": "#/$defs/manifest"}]}
        _validate(cfg, branch)
        decimate = cfg.get("decimate")
        cfg = cfg["scenario"]
    else:
        branch = {**schema, "anyOf": [{"$ref": "#/$defs/scenario"}]}
        _validate(cfg, branch)
    scenario = Scenario.from_dict(cfg)
    return apply_overrides(scenario, overrides), decimate


def _validate(instance, schema) -> None:
    try:
        jsonschema.validate(instance, schema)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"config invalid at {where}: {exc.message}") from exc


def cmd_run(args) -> int:
    overrides = parse_overrides(args.override)
    if args.config:
        scenario, stored_decimate = scenario_from_config(args.config, overrides)
        decimate = args.decimate or stored_decimate or 1
    else:
        if not args.scenario:
            raise ConfigError("give a scenario name or --config FILE")
        scenario = build_scenario(args.scenario, overrides)
        decimate = args.decimate or 1
    # Serialization is idempotent, so running the deserialized form makes a
    # later manifest-driven rerun follow the exact same float path.
    canonical = scenario.to_dict()
    scenario = Scenario.from_dict(canonical)

    log, metrics = run_scenario(scenario)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{scenario.name}_trajectory.csv"
    log.to_csv(csv_path, decimate=decimate)
    metrics_path = out / f"{scenario.name}_metrics.json"
    metrics_path.write_text(
        json.dumps(metrics.to_dict(), indent=2, sort_keys=True) + "\n"
    )
    manifest = {
        "version": __version__,
        "name": scenario.name,
        "scenario": canonical,
        "overrides": overrides,
        "decimate": decimate,
    }
    (out / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n"
    )
    captured = metrics.captured.get("all")
    print(
        f"{scenario.name}: {len(log)} rows -> {csv_path}; "
        f"captured={'yes' if captured else 'no'} "
        f"delta_v={metrics.delta_v_total:.4f} m/s"
    )
    return EXIT_OK


def cmd_validate(args) -> int:
    results = run_all_checks()
    width = max(len(r.name) for r in results)
    all_ok = True
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        all_ok &= r.passed
        print(f"{mark}  {r.name:<{width}}  {r.detail}")
    print("all checks passed" if all_ok else "CHECKS FAILED")
    return EXIT_OK if all_ok else 1


def cmd_sweep(args) -> int:
    overrides = parse_overrides(args.override)
    values = [_parse_value(v) for v in args.values]
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    runs = []
    failures = 0
    for value in values:
        run_overrides = {**overrides, args.parameter: value}
        tag = f"{args.scenario}_{args.parameter}_{value:g}" if isinstance(
            value, (int, float)
        ) else f"{args.scenario}_{args.parameter}_{value}"
        try:
            scenario = build_scenario(args.scenario, run_overrides)
            scenario = Scenario.from_dict(scenario.to_dict())
            log, metrics = run_scenario(scenario)
            log.to_csv(out / f"{tag}_trajectory.csv", decimate=args.decimate or 1)
            runs.append({"value": value, "metrics": metrics.to_dict()})
            print(f"{tag}: delta_v={metrics.delta_v_total:.4f}")
        except (ConfigError, NumericalBlowup, DegenerateState) as exc:
            failures += 1
            runs.append({"value": value, "error": str(exc)})
            print(f"{tag}: FAILED ({exc})", file=sys.stderr)
    combined = {
        "scenario": args.scenario,
        "parameter": args.parameter,
        "values": values,
        "runs": runs,
    }
    (out / "sweep_metrics.json").write_text(
        json.dumps(combined, indent=2, sort_keys=True) + "\n"
    )
    return EXIT_OK if failures == 0 else 1


def _parse_value(raw: str):
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw


def cmd_list_scenarios(args) -> int:
    for name, desc in list_scenarios().items():
        print(f"{name:12s} {desc}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conicsmc",
        description="Conic-section path following: scenario runner and checks.",
    )
    parser.add_argument(
        "--version", action="version", version=f"conicsmc {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one scenario and write its outputs")
    run.add_argument("scenario", nargs="?", help="built-in scenario name")
    run.add_argument("--config", help="JSON scenario config or run manifest")
    run.add_argument("--out", default=".", help="output directory")
    run.add_argument(
        "--override",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="config override, repeatable",
    )
    run.add_argument(
        "--decimate", type=int, default=None, help="log every Nth tick"
    )
    run.set_defaults(func=cmd_run)

    val = sub.add_parser("validate", help="run the numerical check battery")
    val.set_defaults(func=cmd_validate)

    sweep = sub.add_parser("sweep", help="run a scenario across parameter values")
    sweep.add_argument("scenario")
    sweep.add_argument("parameter")
    sweep.add_argument("values", nargs="+", help="one run per value")
    sweep.add_argument("--out", default=".")
    sweep.add_argument(
        "--override", action="append", default=[], metavar="KEY=VALUE"
    )
    sweep.add_argument("--decimate", type=int, default=None)
    sweep.set_defaults(func=cmd_sweep)

    ls = sub.add_parser("list-scenarios", help="list built-in scenarios")
    ls.set_defaults(func=cmd_list_scenarios)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        if "unknown scenario" in str(exc):
            print(
                "available: " + ", ".join(sorted(list_scenarios())),
                file=sys.stderr,
            )
        return EXIT_CONFIG
    except (NumericalBlowup, DegenerateState) as exc:
        print(f"simulation blowup: {exc}", file=sys.stderr)
        return EXIT_BLOWUP


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface: sweep, sample, equiv, presets.

Scenarios live in JSON files (or bundled presets); individual fields can be
overridden with flags whose names mirror the field paths (--gamma, --tau2,
--gain.steps, ...).  Exit codes: 0 success, 2 configuration error, 3
infeasible equivalent-state solve under --strict.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources

from .scenario import (
    ConfigError,
    ScenarioConfig,
    run_equivalence,
    run_sampling,
    run_scenario,
    write_json_report,
)

PRESET_NAMES = ("lowsqueeze", "losschannel", "figS2a", "figS2b")


def load_preset(name: str) -> dict:
    if name not in PRESET_NAMES:
        raise ConfigError("preset", f"unknown preset {name!r}; choose from {PRESET_NAMES}")
    ref = resources.files("eprdistill").joinpath(f"presets/{name}.json")
    return json.loads(ref.read_text(encoding="utf-8"))


def _add_scenario_arguments(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--config", help="path to a scenario JSON file")
    source.add_argument("--preset", choices=PRESET_NAMES, help="bundled scenario")
    parser.add_argument("--gamma", type=float)
    parser.add_argument("--degrade", choices=("none", "pump_rotation", "loss"))
    parser.add_argument("--theta", type=float, help="pump rotation angle in degrees")
    parser.add_argument("--tau2", type=float, help="intensity transmissivity of the loss")
    parser.add_argument("--gain.g", dest="gain_g", type=float)
    parser.add_argument("--gain.g-min", dest="gain_g_min", type=float)
    parser.add_argument("--gain.g-max", dest="gain_g_max", type=float)
    parser.add_argument("--gain.steps", dest="gain_steps", type=int)
    parser.add_argument(
        "--gain.log-spacing", dest="gain_log_spacing", choices=("true", "false")
    )
    parser.add_argument("--eta-ancilla", type=float)
    parser.add_argument("--eta-a", type=float)
    parser.add_argument("--eta-b", type=float)
    parser.add_argument("--n-max", type=int)
    parser.add_argument("--model", choices=("ideal", "single_photon", "full_numeric"))
    parser.add_argument("--sample-count", type=int)
    parser.add_argument("--seed", type=int)


def _scenario_from_args(args: argparse.Namespace) -> ScenarioConfig:
    if args.config:
        with open(args.config, encoding="utf-8") as handle:
            data = json.load(handle)
    else:
        data = load_preset(args.preset)

    degrade = dict(data.get("degrade", {"mode": "none"}))
    if args.degrade is not None:
        degrade = {"mode": args.degrade}
    if args.theta is not None:
        degrade["theta_deg"] = args.theta
    if args.tau2 is not None:
        degrade["tau2"] = args.tau2
    data["degrade"] = degrade

    gain = dict(data.get("gain", {}))
    if args.gain_g is not None:
        gain = {"g": args.gain_g}
    if args.gain_g_min is not None:
        gain.pop("g", None)
        gain["g_min"] = args.gain_g_min
    if args.gain_g_max is not None:
        gain.pop("g", None)
        gain["g_max"] = args.gain_g_max
    if args.gain_steps is not None:
        gain["steps"] = args.gain_steps
    if args.gain_log_spacing is not None:
        gain["log_spacing"] = args.gain_log_spacing == "true"
    data["gain"] = gain

    for flag, key in (
        ("gamma", "gamma"),
        ("eta_ancilla", "eta_ancilla"),
        ("eta_a", "eta_a"),
        ("eta_b", "eta_b"),
        ("n_max", "n_max"),
        ("model", "model"),
        ("sample_count", "sample_count"),
        ("seed", "seed"),
    ):
        value = getattr(args, flag)
        if value is not None:
            data[key] = value
    return ScenarioConfig.from_dict(data)


def _cmd_sweep(args: argparse.Namespace) -> int:
    config = _scenario_from_args(args)
    result = run_scenario(config)
    for g, reason in result.skipped:
        print(f"warning: skipped g={g:g}: {reason}", file=sys.stderr)
    if args.output:
        result.write_csv(args.output)
    else:
        sys.stdout.write(result.to_csv_text())
    return 0


def _cmd_sample(args: argparse.Namespace) -> int:
    config = _scenario_from_args(args)
    report = run_sampling(config)
    if args.output:
        write_json_report(report, args.output)
    else:
        json.dump(report, sys.stdout, indent=2)
        sys.stdout.write("\n")
    return 0


def _cmd_equiv(args: argparse.Namespace) -> int:
    config = _scenario_from_args(args)
    variances = None
    if (args.v_diff is None) != (args.v_sum is None):
        raise ConfigError("variances", "--v-diff and --v-sum must be given together")
    if args.v_diff is not None:
        variances = (args.v_diff, args.v_sum)
    report = run_equivalence(config, variances)
    if args.output:
        write_json_report(report, args.output)
    else:
        json.dump(report, sys.stdout, indent=2)
        sys.stdout.write("\n")
    if args.strict and any(row["status"] == "infeasible" for row in report["rows"]):
        print("error: infeasible equivalent-state solve (--strict)", file=sys.stderr)
        return 3
    return 0


def _cmd_presets(_args: argparse.Namespace) -> int:
    for name in PRESET_NAMES:
        data = load_preset(name)
        print(f"{name}: {json.dumps(data)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eprdistill",
        description="Fock-basis simulator for heralded distillation of "
        "two-mode squeezed light by noiseless amplification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="gain sweep -> CSV table")
    _add_scenario_arguments(sweep)
    sweep.add_argument("--output", help="CSV path (default: stdout)")
    sweep.set_defaults(func=_cmd_sweep)

    sample = sub.add_parser("sample", help="quadrature samples -> JSON report")
    _add_scenario_arguments(sample)
    sample.add_argument("--output", help="JSON path (default: stdout)")
    sample.set_defaults(func=_cmd_sample)

    equiv = sub.add_parser("equiv", help="equivalent-state table -> JSON report")
    _add_scenario_arguments(equiv)
    equiv.add_argument("--v-diff", type=float, help="externally measured v_diff")
    equiv.add_argument("--v-sum", type=float, help="externally measured v_sum")
    equiv.add_argument("--output", help="JSON path (default: stdout)")
    equiv.add_argument(
        "--strict", action="store_true", help="exit 3 if any row is infeasible"
    )
    equiv.set_defaults(func=_cmd_equiv)

    presets = sub.add_parser("presets", help="list bundled scenario presets")
    presets.set_defaults(func=_cmd_presets)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

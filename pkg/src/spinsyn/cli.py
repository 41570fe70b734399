"""Command-line front end: config files, experiment subcommands, CSV and SVG output.

Subcommands:

* ``train``      run one rule's trials, write learning_curve.csv
* ``sweep``      learning-rate sweep per rule, write sweep.csv
* ``compare``    linear vs power-law comparison, write comparison.csv + stats.csv
* ``device-map`` pulse-train on/off ratio grid, write pulse_map.csv
* ``plot``       render any of the CSVs above in --out to an SVG

Config files are flat ``section.key = value`` lines with ``#`` comments;
sections are device, actor, critic, env, harness. Unknown keys are
rejected with the offending line number. Exit codes: 0 success, 1 runtime
failure, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .actor import ActorConfig, BiasUpdate, GradientProbability, UpdateRule
from .critic import CriticConfig
from .device import SpinValveParams, pulse_map_sweep
from .env import Presentation
from .harness import (
    ComparisonReport,
    ExperimentConfig,
    SweepResult,
    TrialResult,
    compare_rules,
    lr_sweep,
    run_trials,
)
from . import svgplot


class ConfigError(Exception):
    """Invalid config file or invalid option combination (exit code 2)."""


@dataclass
class LoadedConfig:
    """Everything a config file describes: experiment plus device constants."""

    experiment: ExperimentConfig
    device: SpinValveParams


_ENUMS = {
    "actor.update_rule": {r.value: r for r in UpdateRule},
    "actor.gradient_probability": {g.value: g for g in GradientProbability},
    "actor.bias_update": {b.value: b for b in BiasUpdate},
    "env.presentation": {p.value: p for p in Presentation},
}

_BOOLS = {"true": True, "false": False}

# section.key -> (target dataclass kwargs bucket, field name, parser kind)
_SCHEMA = {
    "device.g_min": ("device", "g_min", float),
    "device.g_max": ("device", "g_max", float),
    "device.g_th": ("device", "g_th", float),
    "device.mg_max": ("device", "mg_max", float),
    "device.mg_exponent": ("device", "mg_exponent", float),
    "device.pulse_threshold_v": ("device", "pulse_threshold_v", float),
    "device.pulse_time_constant_tau": ("device", "pulse_time_constant_tau", float),
    "actor.n_in": ("actor", "n_in", int),
    "actor.n_hidden": ("actor", "n_hidden", int),
    "actor.n_out": ("actor", "n_out", int),
    "actor.alpha_flip": ("actor", "alpha_flip", float),
    "actor.lr_hidden": ("actor", "lr_hidden", float),
    "actor.lr_out": ("actor", "lr_out", float),
    "actor.batch_size": ("actor", "batch_size", int),
    "actor.dw_min": ("actor", "dw_min", float),
    "actor.update_rule": ("actor", "update_rule", "enum"),
    "actor.power_exponent": ("actor", "power_exponent", float),
    "actor.gradient_probability": ("actor", "gradient_probability", "enum"),
    "actor.bias_update": ("actor", "bias_update", "enum"),
    "actor.carry_subthreshold": ("actor", "carry_subthreshold", bool),
    "critic.n_in": ("critic", "n_in", int),
    "critic.n_hidden": ("critic", "n_hidden", int),
    "critic.lr": ("critic", "lr", float),
    "critic.l1_coeff": ("critic", "l1_coeff", float),
    "critic.batch_size": ("critic", "batch_size", int),
    "env.presentation": ("harness", "presentation", "enum"),
    "harness.n_trials": ("harness", "n_trials", int),
    "harness.max_epochs": ("harness", "max_epochs", int),
    "harness.goal": ("harness", "goal", float),
    "harness.filter_keep": ("harness", "filter_keep", float),
    "harness.filter_gain": ("harness", "filter_gain", float),
    "harness.filter_init": ("harness", "filter_init", float),
    "harness.lr_sweep_from": ("harness", "lr_sweep_from", float),
    "harness.lr_sweep_to": ("harness", "lr_sweep_to", float),
    "harness.lr_sweep_step": ("harness", "lr_sweep_step", float),
    "harness.lr_powerlaw": ("harness", "lr_powerlaw", float),
    "harness.lr_linear": ("harness", "lr_linear", float),
    "harness.master_seed": ("harness", "master_seed", int),
}

_LINE_RE = re.compile(r"^([a-z_]+)\.([a-z_0-9]+)\s*=\s*(.*)$")


def _parse_value(key: str, raw: str, kind, lineno: int):
    raw = raw.strip()
    try:
        if kind is int:
            return int(raw, 10)
        if kind is float:
            return float(raw)
        if kind is bool:
            if raw.lower() not in _BOOLS:
                raise ValueError(raw)
            return _BOOLS[raw.lower()]
        mapping = _ENUMS[key]
        if raw not in mapping:
            raise ValueError(raw)
        return mapping[raw]
    except ValueError:
        raise ConfigError(
            f"line {lineno}: invalid value {raw!r} for {key}"
        ) from None


def parse_config(path: str | Path | None) -> LoadedConfig:
    """Load a config file; every omitted key keeps its default.

    path=None behaves like an empty file. Raises ConfigError for a missing
    file, a malformed line, an unknown key, an unparsable value, or any
    violated parameter invariant.
    """
    buckets: dict[str, dict] = {"device": {}, "actor": {}, "critic": {}, "harness": {}}
    if path is not None:
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        for lineno, rawline in enumerate(text.splitlines(), start=1):
            line = rawline.split("#", 1)[0].strip()
            if not line:
                continue
            m = _LINE_RE.match(line)
            if m is None:
                raise ConfigError(
                    f"line {lineno}: expected 'section.key = value', got {rawline.strip()!r}"
                )
            key = f"{m.group(1)}.{m.group(2)}"
            if key not in _SCHEMA:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
            bucket, field, kind = _SCHEMA[key]
            buckets[bucket][field] = _parse_value(key, m.group(3), kind, lineno)
    try:
        device = SpinValveParams(**buckets["device"])
        actor = ActorConfig(**buckets["actor"])
        critic = CriticConfig(**buckets["critic"])
        experiment = ExperimentConfig(actor=actor, critic=critic, **buckets["harness"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return LoadedConfig(experiment=experiment, device=device)


def fmt(x: float) -> str:
    """Render a float with 17 significant digits (round-trip exact)."""
    return format(float(x), ".17g")


def _write_text(path: Path, lines: list[str]) -> None:
    path.write_text("\n".join(lines) + "\n")


def write_learning_curve_csv(path: Path, results: list[TrialResult]) -> None:
    """One row per (trial, epoch), trials and epochs 1-indexed."""
    lines = ["trial,epoch,raw_reward,filtered_reward"]
    for t_idx, res in enumerate(results, start=1):
        for e_idx, (raw, filt) in enumerate(
            zip(res.raw_curve, res.filtered_curve), start=1
        ):
            lines.append(f"{t_idx},{e_idx},{fmt(raw)},{fmt(filt)}")
    _write_text(path, lines)


def write_sweep_csv(path: Path, sweeps: list[SweepResult]) -> None:
    lines = ["rule,lr_hidden,mean_epochs,std_epochs,n_converged"]
    for sweep in sweeps:
        for p in sweep.points:
            lines.append(
                f"{p.rule.value},{fmt(p.lr_hidden)},{fmt(p.mean_epochs)},"
                f"{fmt(p.std_epochs)},{p.n_converged}"
            )
    _write_text(path, lines)


def write_comparison_csv(path: Path, report: ComparisonReport) -> None:
    lines = ["rule,mean,std,n_converged"]
    for summary in (report.powerlaw, report.linear):
        lines.append(
            f"{summary.rule.value},{fmt(summary.mean)},{fmt(summary.std)},"
            f"{summary.n_converged}"
        )
    _write_text(path, lines)


def write_stats_csv(path: Path, report: ComparisonReport) -> None:
    _write_text(
        path,
        [
            "t,nu,p_one_sided,p_two_sided",
            f"{fmt(report.t)},{fmt(report.nu)},{fmt(report.p_one_sided)},"
            f"{fmt(report.p_two_sided)}",
        ],
    )


def write_pulse_map_csv(
    path: Path, voltages: list[float], durations: list[float], ratios: np.ndarray
) -> None:
    lines = ["voltage_v,duration_s,onoff_ratio"]
    for i, v in enumerate(voltages):
        for j, t in enumerate(durations):
            lines.append(f"{fmt(v)},{fmt(t)},{fmt(ratios[i, j])}")
    _write_text(path, lines)


# Default device-map protocol: both polarities around the measured pulse
# parameters, 50 pulses per cell (sub-threshold rows stay at ratio 1).
DEVICE_MAP_VOLTAGES = [round(-4.0 + 0.5 * k, 10) for k in range(17)]
DEVICE_MAP_DURATIONS = [0.0005, 0.001, 0.002, 0.005, 0.01, 0.02, 0.05]
DEVICE_MAP_PULSES = 50


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinsyn",
        description="Spin-valve synapse simulator and XOR learning benchmark",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in ("train", "sweep", "compare", "device-map", "plot"):
        p = sub.add_parser(name)
        p.add_argument("--config", default=None, help="config file path")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--seed", type=int, default=None, help="master seed override")
        p.add_argument(
            "--parallelism", type=int, default=1, help="trial worker count"
        )
        if name in ("train", "sweep"):
            p.add_argument(
                "--rule",
                choices=[r.value for r in UpdateRule],
                default=None,
                help="update rule (sweep default: both)",
            )
        if name == "train":
            p.add_argument(
                "--lr", type=float, default=None, help="hidden-layer learning rate"
            )
    return parser


def _rule_lr(config: ExperimentConfig, rule: UpdateRule) -> float:
    return (
        config.lr_powerlaw if rule is UpdateRule.POWER_LAW else config.lr_linear
    )


def run_cli(args: argparse.Namespace) -> int:
    loaded = parse_config(args.config)
    config = loaded.experiment
    if args.seed is not None:
        if args.seed < 0:
            raise ConfigError(f"--seed must be >= 0, got {args.seed}")
        config.master_seed = args.seed
    if args.parallelism < 1:
        raise ConfigError(f"--parallelism must be >= 1, got {args.parallelism}")

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    if args.subcommand == "train":
        rule = UpdateRule(args.rule) if args.rule else config.actor.update_rule
        lr = args.lr if args.lr is not None else _rule_lr(config, rule)
        if lr <= 0:
            raise ConfigError(f"--lr must be > 0, got {lr}")
        results = run_trials(config, rule, lr, parallelism=args.parallelism)
        write_learning_curve_csv(out / "learning_curve.csv", results)
    elif args.subcommand == "sweep":
        rules = [UpdateRule(args.rule)] if args.rule else list(UpdateRule)
        sweeps = [
            lr_sweep(config, rule, parallelism=args.parallelism) for rule in rules
        ]
        write_sweep_csv(out / "sweep.csv", sweeps)
    elif args.subcommand == "compare":
        report = compare_rules(config, parallelism=args.parallelism)
        write_comparison_csv(out / "comparison.csv", report)
        write_stats_csv(out / "stats.csv", report)
    elif args.subcommand == "device-map":
        ratios = pulse_map_sweep(
            DEVICE_MAP_VOLTAGES, DEVICE_MAP_DURATIONS, DEVICE_MAP_PULSES, loaded.device
        )
        write_pulse_map_csv(
            out / "pulse_map.csv", DEVICE_MAP_VOLTAGES, DEVICE_MAP_DURATIONS, ratios
        )
    else:  # plot
        written = svgplot.plot_directory(out)
        if not written:
            raise ConfigError(f"no plottable CSV files in {out}")
    return 0


def main(argv: list[str] | None = None) -> int:
    """Entry point returning the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses exit code 2 for usage errors
        return int(exc.code) if exc.code is not None else 0
    try:
        return run_cli(args)
    except ConfigError as exc:
        print(f"spinsyn: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failure: I/O, statistics, ...
        print(f"spinsyn: failure: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    raise SystemExit(main())

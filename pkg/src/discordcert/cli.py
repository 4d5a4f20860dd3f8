"""Command-line front end: discord computation, certification runs,
parameter sweeps, and the optical POVM export.

All randomness flows from --seed through the counter-based trial stream
(and a keyed bootstrap), so every output is bit-identical for identical
(config, seed) regardless of how the work is scheduled. A plain-text
key=value config file can pre-set any flag; explicit flags override it.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, replace

import numpy as np

from . import rng
from .correlations import discord
from .estimate import (
    DEFAULT_RESAMPLES,
    DEFAULT_Z_THRESHOLD,
    CountTable,
    bootstrap_sigma,
    certify,
    plugin_mi,
    verdict_to_json,
)
from .optics import MismatchModel, effective_bell_povm, FAILURE_LABEL
from .protocol import ChannelModel, channel_mi, i_c_noise, i_q_noise, rates, run_trials, strategy_for
from .protocol import CLASSICAL_ZZ, QUANTUM_BELL
from .qstate import DensityMatrix, bell_projector, depolarize, from_json, matrix_to_document, maximally_mixed, resource_state

BUILTIN_STATES = ("resource", "maximally-mixed", "bell-phi-plus")
STRATEGY_NAMES = {"quantum": QUANTUM_BELL, "classical": CLASSICAL_ZZ}

NOISE_CSV_COLUMNS = ("parameter", "i_q_analytic", "i_c_analytic",
                     "i_exp_mc", "sigma_mc", "z", "certified")
MISMATCH_CSV_COLUMNS = ("parameter", "i_q_analytic", "i_q_optics", "i_c_analytic",
                        "i_exp_mc", "sigma_mc", "z", "certified")


@dataclass(frozen=True)
class RunConfig:
    seed: int = 1
    trials: int = 1_000_000
    noise_p: float = 1.0
    dtau_ratio: float = 0.0
    c_scale: float = 2 * np.pi
    strategy: str = "quantum"
    z_threshold: float = DEFAULT_Z_THRESHOLD
    out: str | None = None
    state: str = "resource"
    steps: int = 21
    sweep_max: float | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not 0.0 <= self.noise_p <= 1.0:
            raise ValueError(f"noise must lie in [0, 1], got {self.noise_p}")
        if self.dtau_ratio < 0:
            raise ValueError(f"dtau must be nonnegative, got {self.dtau_ratio}")
        if self.strategy not in STRATEGY_NAMES:
            raise ValueError(f"strategy must be one of {sorted(STRATEGY_NAMES)}, got {self.strategy!r}")
        if not -(1 << 63) <= self.seed < (1 << 64):
            raise ValueError("seed must fit in 64 bits")


# flag name (and config-file key) -> RunConfig field
_KEY_TO_FIELD = {
    "seed": "seed",
    "trials": "trials",
    "noise": "noise_p",
    "dtau": "dtau_ratio",
    "c_scale": "c_scale",
    "strategy": "strategy",
    "z_threshold": "z_threshold",
    "out": "out",
    "state": "state",
    "steps": "steps",
    "max": "sweep_max",
}


def _parse_config_file(path: str) -> dict:
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in _KEY_TO_FIELD:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = value.strip()
    return values


_INT_FIELDS = {"seed", "trials", "steps"}
_FLOAT_FIELDS = {"noise_p", "dtau_ratio", "c_scale", "z_threshold", "sweep_max"}


def _coerce(field: str, value):
    if value is None or not isinstance(value, str):
        return value
    if field in _INT_FIELDS:
        return int(value)
    if field in _FLOAT_FIELDS:
        return float(value)
    return value


def build_config(args: argparse.Namespace) -> RunConfig:
    """Defaults, then config-file values, then explicit flags."""
    cfg = RunConfig()
    layers = []
    if getattr(args, "config", None):
        layers.append(_parse_config_file(args.config))
    layers.append({key: getattr(args, key.replace("-", "_"), None) for key in _KEY_TO_FIELD})
    for layer in layers:
        updates = {}
        for key, value in layer.items():
            if value is None:
                continue
            field = _KEY_TO_FIELD[key]
            updates[field] = _coerce(field, value)
        if updates:
            cfg = replace(cfg, **updates)
    return cfg


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value config file; flags override it")
    p.add_argument("--seed", type=int, help="64-bit master seed (default 1)")
    p.add_argument("--trials", type=int, help="number of protocol trials (default 1000000)")
    p.add_argument("--noise", type=float, help="state survival probability p in [0,1] (default 1)")
    p.add_argument("--dtau", type=float,
                   help="temporal mismatch ratio; 0 = ideal analyzer, >0 = simulated optical gate")
    p.add_argument("--c-scale", type=float, dest="c_scale",
                   help="mismatch scale constant (default 2*pi)")
    p.add_argument("--strategy", choices=sorted(STRATEGY_NAMES), help="measurement strategy")
    p.add_argument("--z-threshold", type=float, dest="z_threshold",
                   help="certification threshold in standard deviations (default 5)")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--state", help="builtin state name or JSON matrix file")
    p.add_argument("--steps", type=int, help="sweep grid size (default 21)")
    p.add_argument("--max", type=float, help="sweep upper bound (noise: 1, mismatch: 0.25)")


def _load_state(name: str) -> DensityMatrix:
    if name == "resource":
        return resource_state()
    if name == "maximally-mixed":
        return maximally_mixed()
    if name == "bell-phi-plus":
        return DensityMatrix(bell_projector("phi_plus"))
    with open(name, encoding="utf-8") as fh:
        return from_json(fh.read())


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    return f"{x:.9g}"


def cmd_discord(cfg: RunConfig) -> int:
    state = _load_state(cfg.state)
    if cfg.noise_p < 1.0:
        state = depolarize(state, cfg.noise_p)
    report = discord(state)
    lines = [
        f"mutual_information = {_fmt(report.mutual_info)}",
        f"classical_correlation = {_fmt(report.classical_corr)}",
        f"discord = {_fmt(report.discord)}",
        f"theta = {_fmt(report.theta)}",
        f"phi = {_fmt(report.phi)}",
    ]
    _write_text(cfg.out, "\n".join(lines) + "\n")
    return 0


def _mismatch_of(cfg: RunConfig) -> MismatchModel | None:
    if cfg.dtau_ratio == 0.0:
        return None
    return MismatchModel(dtau_ratio=cfg.dtau_ratio, c_scale=cfg.c_scale)


def cmd_certify(cfg: RunConfig) -> int:
    model = ChannelModel(noise_p=cfg.noise_p, mismatch=_mismatch_of(cfg))
    strategy = strategy_for(STRATEGY_NAMES[cfg.strategy], model.mismatch)
    result = run_trials(strategy, model, cfg.trials, cfg.seed)
    table = CountTable(result.counts)
    i_exp = plugin_mi(table)
    boot = bootstrap_sigma(table, DEFAULT_RESAMPLES, seed=cfg.seed)
    verdict = certify(i_exp, boot.sigma, i_c_noise(cfg.noise_p), cfg.z_threshold)
    _write_text(cfg.out, verdict_to_json(verdict, n_trials=result.n_trials, seed=cfg.seed))
    return 0


def _sweep_rows(kind: str, cfg: RunConfig):
    if kind == "noise":
        upper = 1.0 if cfg.sweep_max is None else cfg.sweep_max
        if not 0.0 < upper <= 1.0:
            raise ValueError(f"noise sweep upper bound must lie in (0, 1], got {upper}")
    else:
        upper = 0.25 if cfg.sweep_max is None else cfg.sweep_max
        if upper <= 0.0:
            raise ValueError(f"mismatch sweep upper bound must be positive, got {upper}")
    if cfg.steps < 2:
        raise ValueError(f"sweep needs at least 2 steps, got {cfg.steps}")
    grid = np.linspace(0.0, upper, cfg.steps)

    rows = []
    for i, x in enumerate(grid):
        if kind == "noise":
            model = ChannelModel(noise_p=float(x), mismatch=None)
        else:
            model = ChannelModel(noise_p=cfg.noise_p,
                                 mismatch=MismatchModel(dtau_ratio=float(x), c_scale=cfg.c_scale))
        point = rates(model)
        point_seed = rng.derive_seed(cfg.seed, i)
        strategy = strategy_for(STRATEGY_NAMES[cfg.strategy], model.mismatch)
        result = run_trials(strategy, model, cfg.trials, point_seed)
        table = CountTable(result.counts)
        i_exp = plugin_mi(table)
        boot = bootstrap_sigma(table, DEFAULT_RESAMPLES, seed=point_seed)
        verdict = certify(i_exp, boot.sigma, point.i_c, cfg.z_threshold)
        row = [float(x), point.i_q_analytic]
        if kind == "mismatch":
            row.append(point.i_q)
        row.extend([point.i_c, i_exp, boot.sigma, verdict.z_score, verdict.certified])
        rows.append(row)
    return rows


def cmd_sweep(kind: str, cfg: RunConfig) -> int:
    columns = NOISE_CSV_COLUMNS if kind == "noise" else MISMATCH_CSV_COLUMNS
    rows = _sweep_rows(kind, cfg)
    lines = [",".join(columns)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    _write_text(cfg.out, "\n".join(lines) + "\n")
    return 0


def cmd_optics_process(cfg: RunConfig) -> int:
    mismatch = MismatchModel(dtau_ratio=cfg.dtau_ratio, c_scale=cfg.c_scale)
    povm = effective_bell_povm(mismatch)
    elements = {label: e for label, e in povm.elements}
    failure = elements.pop(FAILURE_LABEL)
    total = sum(elements.values()) + failure
    doc = {
        "dtau_ratio": mismatch.dtau_ratio,
        "c_scale": mismatch.c_scale,
        "xi": mismatch.xi,
        "overlap": mismatch.overlap,
        "elements": {label: matrix_to_document(e) for label, e in elements.items()},
        "failure_weight": float(np.trace(failure).real / failure.shape[0]),
        "completeness_residual": float(np.max(np.abs(total - np.eye(4)))),
    }
    _write_text(cfg.out, json.dumps(doc, indent=2) + "\n")
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="discordcert",
        description="Simulate and certify an entangling gate through the "
                    "information rate of a discord-based key protocol.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("discord", "compute mutual information, classical correlation, and discord of a state"),
        ("certify", "run protocol trials and emit a certification verdict as JSON"),
        ("sweep-noise", "CSV sweep of rates and Monte Carlo estimates over white noise"),
        ("sweep-mismatch", "CSV sweep over temporal gate mismatch"),
        ("optics-process", "emit the simulated Bell-analyzer POVM as JSON"),
    ):
        p = sub.add_parser(name, help=text)
        _add_common_flags(p)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        if args.command == "discord":
            return cmd_discord(cfg)
        if args.command == "certify":
            return cmd_certify(cfg)
        if args.command == "sweep-noise":
            return cmd_sweep("noise", cfg)
        if args.command == "sweep-mismatch":
            return cmd_sweep("mismatch", cfg)
        if args.command == "optics-process":
            return cmd_optics_process(cfg)
        parser.error(f"unknown command {args.command!r}")
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

"""Command-line interface: run experiments, compare outputs, list presets.

``simulate`` executes an ensemble and writes three files into the output
directory:

* ``trajectories.csv``: one row per (run, week) with the header
  ``run,t,S,D,Q,P,C,V,V_inverse,U,TOK,R,B,W,M,fiat_price``; floating
  values carry 17 significant digits so replays compare byte-identical;
* ``summary.json``: ensemble metrics keyed by name;
* ``manifest.json``: the fully resolved configuration; feeding it back
  through ``simulate --config`` reproduces the directory exactly.

Errors are reported as one JSON object on stderr and a nonzero exit
status.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, metrics
from .config import (
    PRESET_NAMES,
    config_from_dict,
    config_to_dict,
    emit_config,
    load_config,
    preset_config,
)
from .engine import ExperimentConfig, Trajectory, monte_carlo
from .errors import SchemaMismatch, TokensimError, ValidationError

__all__ = ["run_experiment", "compare", "main",
           "MILESTONE_THRESHOLDS", "CORRELATION_WINDOWS"]

SCHEMA_VERSION = 1

CSV_HEADER = "run,t,S,D,Q,P,C,V,V_inverse,U,TOK,R,B,W,M,fiat_price"

# Intrinsic-value milestones and growth-correlation horizons reported in
# every summary.json.
MILESTONE_THRESHOLDS = (0.5, 0.75, 1.0)
CORRELATION_WINDOWS = (10, 20, 30, 104)


def _fmt(value: float) -> str:
    return format(value, ".17g")


def write_trajectories_csv(path: Path, ensemble: list[Trajectory]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(CSV_HEADER + "\n")
        for tr in ensemble:
            for s in tr.states:
                fh.write(",".join((
                    str(tr.run_index), str(s.t), _fmt(s.S), _fmt(s.D),
                    _fmt(s.Q), _fmt(s.P), _fmt(s.C), _fmt(s.V),
                    _fmt(s.v_inverse), _fmt(s.U), _fmt(s.TOK), _fmt(s.R),
                    _fmt(s.B), _fmt(s.W), _fmt(s.M), _fmt(s.fiat_price),
                )) + "\n")


def summary_metrics(config: ExperimentConfig,
                    ensemble: list[Trajectory]) -> dict:
    """Ensemble metrics written to summary.json, keyed by metric name."""
    summary = metrics.summarize(ensemble)
    growth = summary.aggregated_growth
    milestones = metrics.milestone_times(ensemble, list(MILESTONE_THRESHOLDS))
    windows = [w for w in CORRELATION_WINDOWS if 2 <= w <= config.steps]
    if len(ensemble) >= 3 and windows:
        corr = metrics.windowed_growth_correlation(ensemble, windows)
        corr_entry = {"windows": windows, "matrix": corr.tolist()}
    else:
        corr_entry = {"windows": [], "matrix": []}
    return {
        "runs": config.n_runs,
        "steps": config.steps,
        "aggregated_growth": {
            "mean": float(growth.mean()),
            "median": float(np.median(growth)),
            "min": float(growth.min()),
            "max": float(growth.max()),
        },
        "fiat_price": {
            "mean": float(summary.fiat_price_mean.mean()),
            "variance": float(summary.fiat_price_variance.mean()),
        },
        "terminal": {
            "v_inverse_mean": float(summary.series["v_inverse"].mean[-1]),
            "tok_mean": float(summary.series["tok"].mean[-1]),
            "q_mean": float(summary.series["q"].mean[-1]),
        },
        "milestones": {_fmt_threshold(thr): t
                       for thr, t in zip(MILESTONE_THRESHOLDS, milestones)},
        "windowed_growth_correlation": corr_entry,
    }


def _fmt_threshold(thr: float) -> str:
    return format(thr, "g")


def run_experiment(config: ExperimentConfig, out_dir: str | Path,
                   preset: str | None = None,
                   workers: int | None = None) -> Path:
    """Run the ensemble and write trajectories.csv, summary.json, manifest.json."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    ensemble = monte_carlo(config, workers=workers)
    write_trajectories_csv(out / "trajectories.csv", ensemble)
    _write_json(out / "summary.json", summary_metrics(config, ensemble))
    _write_json(out / "manifest.json", {
        "artifact": "tokensim",
        "version": __version__,
        "schema_version": SCHEMA_VERSION,
        "preset": preset,
        "config": config_to_dict(config),
    })
    return out


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _read_json(path: Path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaMismatch(f"{path}: not valid JSON ({exc})") from exc


def compare(dir_a: str | Path, dir_b: str | Path) -> dict:
    """Paired metrics of two output directories with A/B ratios."""
    rows = {}
    summaries = []
    for d in (dir_a, dir_b):
        d = Path(d)
        manifest = _read_json(d / "manifest.json")
        if manifest.get("schema_version") != SCHEMA_VERSION:
            raise SchemaMismatch(
                f"{d}: schema_version {manifest.get('schema_version')!r}, "
                f"expected {SCHEMA_VERSION}")
        summaries.append(_read_json(d / "summary.json"))
    a, b = summaries

    def add(name: str, va, vb):
        ratio = None
        if va is not None and vb is not None and vb != 0:
            ratio = va / vb
        rows[name] = {"a": va, "b": vb, "ratio": ratio}

    add("aggregated_growth_mean", a["aggregated_growth"]["mean"],
        b["aggregated_growth"]["mean"])
    add("fiat_price_mean", a["fiat_price"]["mean"], b["fiat_price"]["mean"])
    add("fiat_price_variance", a["fiat_price"]["variance"],
        b["fiat_price"]["variance"])
    for key in sorted(a["milestones"], key=float):
        if key in b["milestones"]:
            add(f"milestone_{key}", a["milestones"][key], b["milestones"][key])
    return rows


def _render_comparison(rows: dict, dir_a: str, dir_b: str) -> str:
    width = max(len(k) for k in rows) + 2
    lines = [f"{'metric':<{width}}{'A':>16}{'B':>16}{'A/B':>12}",
             f"(A = {dir_a}, B = {dir_b})"]
    for name, row in rows.items():
        va = "never" if row["a"] is None else format(row["a"], ".6g")
        vb = "never" if row["b"] is None else format(row["b"], ".6g")
        ratio = "-" if row["ratio"] is None else format(row["ratio"], ".6g")
        lines.append(f"{name:<{width}}{va:>16}{vb:>16}{ratio:>12}")
    return "\n".join(lines)


def _cmd_simulate(args: argparse.Namespace) -> int:
    if (args.preset is None) == (args.config is None):
        raise ValidationError("exactly one of --preset or --config is required")
    if args.preset is not None:
        config = preset_config(args.preset)
    else:
        config = load_config(args.config)
    overrides = {}
    if args.runs is not None:
        overrides["n_runs"] = args.runs
    if args.steps is not None:
        overrides["steps"] = args.steps
    if args.seed is not None:
        overrides["base_seed"] = args.seed
    if overrides:
        config = dataclasses.replace(config, **overrides)
    out = run_experiment(config, args.out, preset=args.preset,
                         workers=args.workers)
    print(f"wrote {out / 'trajectories.csv'} "
          f"({config.n_runs} runs x {config.steps} weeks)")
    return 0


def _cmd_compare(args: argparse.Namespace) -> int:
    rows = compare(args.dir_a, args.dir_b)
    print(_render_comparison(rows, args.dir_a, args.dir_b))
    return 0


def _cmd_presets(_args: argparse.Namespace) -> int:
    for name in PRESET_NAMES:
        print(f"# {name}")
        print(emit_config(preset_config(name)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tokensim",
        description="Deterministic token economy simulator with a Monte "
                    "Carlo experiment harness.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run an ensemble and write outputs")
    sim.add_argument("--preset", choices=PRESET_NAMES)
    sim.add_argument("--config", help="path to a YAML/JSON config or manifest")
    sim.add_argument("--runs", type=int, help="override number of runs")
    sim.add_argument("--steps", type=int, help="override number of weeks")
    sim.add_argument("--seed", type=int, help="override base seed")
    sim.add_argument("--out", default="out", help="output directory")
    sim.add_argument("--workers", type=int,
                     help="run the ensemble in a process pool of this size")
    sim.set_defaults(func=_cmd_simulate)

    cmp_ = sub.add_parser("compare", help="tabulate two output directories")
    cmp_.add_argument("dir_a")
    cmp_.add_argument("dir_b")
    cmp_.set_defaults(func=_cmd_compare)

    pre = sub.add_parser("presets", help="list presets with resolved parameters")
    pre.set_defaults(func=_cmd_presets)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TokensimError as exc:
        _fail(type(exc).__name__, str(exc))
        return 2
    except OSError as exc:
        _fail("IoError", str(exc))
        return 1


def _fail(kind: str, message: str) -> None:
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())

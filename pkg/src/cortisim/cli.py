"""Command-line interface.

Subcommands:
  run    one preset: episodes, filtering, metrics, traces, figures
  sweep  all four presets on one base seed, plus a comparison table
  trace  a single seeded episode with per-stage debug logging

--seed is mandatory everywhere so invocations are reproducible by
construction. Exit codes: 0 success, 2 bad configuration, 3 the run filter
could not be satisfied, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from pathlib import Path

from .config import ExperimentConfig, VARIANT_PRESETS, load_config
from .errors import ConfigError, FilterExhausted
from .harness import (
    comparison_table,
    compute_metrics,
    filter_valid_run,
    run_experiment,
    write_comparison_csv,
    write_experiment,
    write_trace_csv,
)
from .simulation import PRESETS, run_episode

log = logging.getLogger(__name__)

# flag dest -> ExperimentConfig field, for flags that override file/defaults
_OVERRIDE_FIELDS = {
    "steps": "steps",
    "runs": "runs",
    "workers": "workers",
    "out": "output_dir",
    "figures": "figures",
    "resource_probability": "resource_probability",
    "decay": "decay",
    "learning_rate": "learning_rate",
    "set_point_energy": "set_point_energy",
    "set_point_social": "set_point_social",
    "consumption_gain": "consumption_gain",
    "policy_precision": "policy_precision",
    "likelihood_strength": "likelihood_strength",
    "exteroceptive_strength": "exteroceptive_strength",
    "eat_reliability": "eat_reliability",
    "play_reliability": "play_reliability",
    "transition_persistence": "transition_persistence",
    "explore_persistence": "explore_persistence",
    "cross_relief": "cross_relief",
    "preference_tummy": "preference_tummy",
    "preference_lonely": "preference_lonely",
    "preference_food": "preference_food",
    "preference_friend": "preference_friend",
    "dirichlet_scale": "dirichlet_scale",
    "forced_action": "forced_action",
}


def _add_common_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, required=True,
                        help="base seed; runs draw seed, seed+1, ...")
    parser.add_argument("--config", type=Path, default=None,
                        help="key = value config file; flags override it")
    parser.add_argument("--steps", type=int, default=None)
    parser.add_argument("--runs", type=int, default=None)
    parser.add_argument("--workers", type=int, default=None,
                        help="episode worker processes (default 1)")
    parser.add_argument("--out", type=str, default=None, help="output directory")
    parser.add_argument("--figures", choices=("first", "all", "none"), default=None,
                        help="render figures for the first kept run, all, or none")
    parser.add_argument("--resource-probability", type=float, default=None)
    parser.add_argument("--decay", type=float, default=None)
    parser.add_argument("--learning-rate", type=float, default=None)
    parser.add_argument("--set-point-energy", type=float, default=None)
    parser.add_argument("--set-point-social", type=float, default=None)
    parser.add_argument("--consumption-gain", type=float, default=None)
    parser.add_argument("--policy-precision", type=float, default=None)
    parser.add_argument("--likelihood-strength", type=float, default=None)
    parser.add_argument("--exteroceptive-strength", type=float, default=None)
    parser.add_argument("--eat-reliability", type=float, default=None)
    parser.add_argument("--play-reliability", type=float, default=None)
    parser.add_argument("--transition-persistence", type=float, default=None)
    parser.add_argument("--explore-persistence", type=float, default=None)
    parser.add_argument("--cross-relief", type=float, default=None)
    parser.add_argument("--preference-tummy", type=float, default=None)
    parser.add_argument("--preference-lonely", type=float, default=None)
    parser.add_argument("--preference-food", type=float, default=None)
    parser.add_argument("--preference-friend", type=float, default=None)
    parser.add_argument("--dirichlet-scale", type=float, default=None)
    parser.add_argument("--forced-action", choices=("eat", "play", "explore"), default=None,
                        help="debug: bypass action selection with a fixed action")
    parser.add_argument("-v", "--verbose", action="store_true",
                        help="per-stage debug logging")


def _build_config(args: argparse.Namespace) -> ExperimentConfig:
    config = ExperimentConfig()
    if args.config is not None:
        config = load_config(args.config, base=config)
    for dest, field in _OVERRIDE_FIELDS.items():
        value = getattr(args, dest, None)
        if value is not None:
            setattr(config, field, value)
    config.base_seed = args.seed
    if getattr(args, "preset", None) is not None:
        config.variant = args.preset
    config.validate()
    return config


def _run_one(config: ExperimentConfig, out_dir: Path):
    result = run_experiment(config)
    write_experiment(result, out_dir)
    if config.figures != "none":
        from .plots import render_run_figures  # matplotlib import deferred to use

        render_run_figures(result, out_dir, config.figures)
    return result


def cmd_run(args: argparse.Namespace) -> int:
    config = _build_config(args)
    out_dir = Path(config.output_dir)
    result = _run_one(config, out_dir)
    print(f"kept seeds: {result.kept_seeds} (discarded {len(result.discarded_seeds)})")
    print(comparison_table({config.variant: result}))
    print(f"outputs in {out_dir}")
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    base = _build_config(args)
    out_root = Path(base.output_dir)
    results = {}
    for preset in VARIANT_PRESETS:
        config = dataclasses.replace(base, variant=preset,
                                     output_dir=str(out_root / preset))
        config.model_overrides = dict(base.model_overrides)
        results[preset] = _run_one(config, out_root / preset)
    out_root.mkdir(parents=True, exist_ok=True)
    write_comparison_csv(out_root / "comparison.csv", results)
    if base.figures != "none":
        from .plots import render_comparison_figure

        render_comparison_figure(results, out_root / "comparison.png")
    print(comparison_table(results))
    print(f"outputs in {out_root}")
    return 0


def cmd_trace(args: argparse.Namespace) -> int:
    logging.getLogger("cortisim").setLevel(logging.DEBUG)
    config = _build_config(args)
    trace = run_episode(config, PRESETS[config.variant], config.base_seed)
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"trace_{config.base_seed}.csv"
    write_trace_csv(path, trace)
    if config.figures != "none":
        from .plots import render_raster_figure, render_series_figure

        label = f"{config.variant} episode, seed {config.base_seed}"
        render_series_figure(trace, label, out_dir / f"fig3_{config.base_seed}.png")
        render_raster_figure(trace, label, out_dir / f"fig4_{config.base_seed}.png")
    summary = compute_metrics(trace, config.base_seed, config.steps, config.set_point_social)
    print(f"steps survived: {len([r for r in trace if r.energy > 0])}/{config.steps}")
    print(f"passes resource filter: {filter_valid_run(trace)}")
    print(f"viability: {summary.viability_pct:.1f}%  mean cortisol: {summary.mean_cortisol:.3f}")
    print(f"trace written to {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cortisim",
        description="Active-inference agent simulations with homeostatic "
                    "physiology and cortisol-driven allostasis.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    run_parser = subparsers.add_parser("run", help="run one model preset")
    run_parser.add_argument("--preset", choices=VARIANT_PRESETS, default="D")
    _add_common_arguments(run_parser)
    run_parser.set_defaults(handler=cmd_run)

    sweep_parser = subparsers.add_parser("sweep", help="run all four presets")
    _add_common_arguments(sweep_parser)
    sweep_parser.set_defaults(handler=cmd_sweep)

    trace_parser = subparsers.add_parser(
        "trace", help="run one episode with per-stage debug logging")
    trace_parser.add_argument("--preset", choices=VARIANT_PRESETS, default="D")
    _add_common_arguments(trace_parser)
    trace_parser.set_defaults(handler=cmd_trace)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if (args.verbose or args.command == "trace") else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.handler(args)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    except FilterExhausted as err:
        print(f"filter exhausted: {err}", file=sys.stderr)
        return 3
    except OSError as err:
        print(f"i/o error: {err}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())

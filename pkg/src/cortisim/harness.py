"""Experiment runner: seed management, run filtering, metrics, file outputs.

Seeds are drawn base_seed, base_seed+1, ... and episodes that fail the
resource-availability filter are discarded until `runs` valid ones
accumulate (capped at 10x). Episodes may run in a worker pool; results are
always reduced in seed order, so worker count never changes any output byte.
"""

from __future__ import annotations

import csv
import dataclasses
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .config import ExperimentConfig, build_model, config_to_dict, model_snapshot_lines
from .errors import EmptyTrace, FilterExhausted
from .generative import Action
from .simulation import (
    PRESETS,
    ModelVariant,
    StepRecord,
    TRACE_COLUMNS,
    record_to_row,
    run_episode,
)

# How many early steps the validity filter inspects, and the hits it needs.
FILTER_WINDOW = 50
FILTER_MIN_EVENTS = 2

# Metrics aggregated as mean +- SEM across runs in summary.json.
AGGREGATE_METRICS = (
    "viability_pct",
    "action_pct_eat",
    "action_pct_play",
    "action_pct_explore",
    "median_comfort_pct",
    "mean_cortisol",
)


@dataclass(frozen=True)
class RunSummary:
    """Per-run results in the shape of the reporting tables."""

    seed: int
    viability_pct: float
    action_pct_eat: float
    action_pct_play: float
    action_pct_explore: float
    median_comfort_pct: float
    energy_comfort_pct: float
    mean_cortisol: float
    final_d_energy: float

    @property
    def action_distribution(self) -> dict[str, float]:
        return {
            "eat": self.action_pct_eat,
            "play": self.action_pct_play,
            "explore": self.action_pct_explore,
        }


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    variant: ModelVariant
    kept_seeds: list[int]
    summaries: list[RunSummary]
    traces: dict[int, list[StepRecord]]
    discarded_seeds: list[int]
    aggregate: dict[str, dict[str, float]]


def filter_valid_run(trace: list[StepRecord]) -> bool:
    """Both resources must have shown up >= 2 times in the first 50 steps.

    Truncated traces are judged on the steps that exist; explore-forced
    appearances count like any other.
    """
    window = trace[:FILTER_WINDOW]
    food_events = sum(r.obs.food for r in window)
    friend_events = sum(r.obs.friend for r in window)
    return food_events >= FILTER_MIN_EVENTS and friend_events >= FILTER_MIN_EVENTS


def compute_metrics(
    trace: list[StepRecord],
    seed: int,
    steps_configured: int,
    set_point_social: float,
) -> RunSummary:
    """Reduce one trace to its summary row.

    Viability is the share of configured steps with energy above zero; every
    other metric is computed over the steps survived. Comfort ratios use the
    step's own (possibly adjusted) energy set point and are uncapped.
    """
    if not trace:
        raise EmptyTrace("cannot summarize an empty trace")
    alive_steps = [r for r in trace if r.energy > 0]
    n = len(alive_steps)
    if n == 0:
        # Death on the very first step: nothing was survived.
        return RunSummary(seed, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, trace[-1].d_energy)
    energy_ratios = [100.0 * r.energy / r.d_energy for r in alive_steps]
    both_ratios = [
        (100.0 * r.energy / r.d_energy + 100.0 * r.socialness / set_point_social) / 2.0
        for r in alive_steps
    ]
    counts = {action: 0 for action in Action}
    for r in alive_steps:
        counts[r.action] += 1
    return RunSummary(
        seed=seed,
        viability_pct=100.0 * n / steps_configured,
        action_pct_eat=100.0 * counts[Action.EAT] / n,
        action_pct_play=100.0 * counts[Action.PLAY] / n,
        action_pct_explore=100.0 * counts[Action.EXPLORE] / n,
        median_comfort_pct=float(np.median(both_ratios)),
        energy_comfort_pct=float(np.median(energy_ratios)),
        mean_cortisol=float(np.mean([r.cortisol for r in alive_steps])),
        final_d_energy=trace[-1].d_energy,
    )


def mean_and_sem(values: list[float]) -> dict[str, float]:
    """Sample mean and standard error (ddof=1); SEM is 0 for a single value."""
    arr = np.asarray(values, dtype=np.float64)
    mean = float(arr.mean())
    if arr.size < 2:
        return {"mean": mean, "sem": 0.0}
    return {"mean": mean, "sem": float(arr.std(ddof=1) / np.sqrt(arr.size))}


def _episode_task(args: tuple[ExperimentConfig, ModelVariant, int]) -> list[StepRecord]:
    config, variant, seed = args
    return run_episode(config, variant, seed)


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run episodes until `runs` of them pass the filter; aggregate in seed order."""
    config.validate()
    variant = PRESETS[config.variant]
    cap = 10 * config.runs
    candidates = [config.base_seed + k for k in range(cap)]
    traces: dict[int, list[StepRecord]] = {}
    kept: list[int] = []
    discarded: list[int] = []

    def absorb(seed: int, trace: list[StepRecord]) -> None:
        # Seed-ordered reduction; stops counting once enough runs are kept.
        if len(kept) >= config.runs:
            return
        traces[seed] = trace
        if filter_valid_run(trace):
            kept.append(seed)
        else:
            discarded.append(seed)

    if config.workers <= 1:
        for seed in candidates:
            if len(kept) >= config.runs:
                break
            absorb(seed, run_episode(config, variant, seed))
    else:
        wave = max(config.runs, config.workers)
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            for start in range(0, cap, wave):
                if len(kept) >= config.runs:
                    break
                batch = candidates[start:start + wave]
                for seed, trace in zip(
                    batch, pool.map(_episode_task, [(config, variant, s) for s in batch])
                ):
                    absorb(seed, trace)

    if len(kept) < config.runs:
        raise FilterExhausted(
            f"only {len(kept)} of the required {config.runs} runs passed the "
            f"resource filter within {cap} attempts"
        )

    summaries = [
        compute_metrics(traces[seed], seed, config.steps, config.set_point_social)
        for seed in kept
    ]
    aggregate = {
        metric: mean_and_sem([getattr(s, metric) for s in summaries])
        for metric in AGGREGATE_METRICS
    }
    return ExperimentResult(
        config=config,
        variant=variant,
        kept_seeds=kept,
        summaries=summaries,
        traces={seed: traces[seed] for seed in kept},
        discarded_seeds=discarded,
        aggregate=aggregate,
    )


# ---------------------------------------------------------------------------
# File outputs
# ---------------------------------------------------------------------------

def write_trace_csv(path: Path, trace: list[StepRecord]) -> None:
    """One row per step, flushed as written so a crash leaves a usable prefix."""
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(TRACE_COLUMNS)
        for record in trace:
            writer.writerow(record_to_row(record))
            f.flush()


def summary_payload(result: ExperimentResult, timestamp: str | None = None) -> dict:
    """The summary.json structure; the timestamp stays in one metadata key."""
    if timestamp is None:
        timestamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return {
        "config": config_to_dict(result.config),
        "runs": [dataclasses.asdict(s) for s in result.summaries],
        "aggregate": result.aggregate,
        "discarded_seed_count": len(result.discarded_seeds),
        "discarded_seeds": result.discarded_seeds,
        "meta": {"created_at": timestamp},
    }


def write_experiment(result: ExperimentResult, out_dir: str | Path) -> Path:
    """Write traces, summary.json, tidy plot-data CSVs, and the model snapshot."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    for seed in result.kept_seeds:
        write_trace_csv(out / f"trace_{seed}.csv", result.traces[seed])

    (out / "summary.json").write_text(json.dumps(summary_payload(result), indent=2) + "\n")

    # Long-format time series for value / set point / valence / hormone plots.
    with open(out / "fig3_series.csv", "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["seed", "t", "series", "value"])
        for seed in result.kept_seeds:
            for r in result.traces[seed]:
                for series, value in (
                    ("energy", r.energy),
                    ("socialness", r.socialness),
                    ("set_point_energy", r.d_energy),
                    ("surprisal_delta", r.surprisal_delta),
                    ("cortisol", r.cortisol),
                ):
                    writer.writerow([seed, r.t, series, repr(value)])

    # Belief raster plus action markers.
    with open(out / "fig4_raster.csv", "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow([
            "seed", "t", "q_hungry", "q_playful", "q_satisfied", "action", "action_succeeded",
        ])
        for seed in result.kept_seeds:
            for r in result.traces[seed]:
                writer.writerow([
                    seed, r.t,
                    repr(float(r.q_s.probs[0])), repr(float(r.q_s.probs[1])),
                    repr(float(r.q_s.probs[2])),
                    r.action.name.lower(), int(r.action_succeeded),
                ])

    snapshot = model_snapshot_lines(build_model(result.config))
    (out / "model_snapshot.cfg").write_text("\n".join(snapshot) + "\n")
    return out


def write_comparison_csv(path: Path, results: dict[str, ExperimentResult]) -> None:
    """One row per preset: aggregate mean and SEM for the headline metrics."""
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        header = ["variant"]
        for metric in AGGREGATE_METRICS:
            header += [f"{metric}_mean", f"{metric}_sem"]
        writer.writerow(header)
        for label, result in results.items():
            row = [label]
            for metric in AGGREGATE_METRICS:
                row += [
                    repr(result.aggregate[metric]["mean"]),
                    repr(result.aggregate[metric]["sem"]),
                ]
            writer.writerow(row)


def comparison_table(results: dict[str, ExperimentResult]) -> str:
    """Plain-text comparison across presets for terminal output."""
    lines = [
        f"{'model':<6}{'viability %':>14}{'eat %':>10}{'play %':>10}"
        f"{'explore %':>11}{'comfort %':>12}{'cortisol':>10}"
    ]
    for label, result in results.items():
        agg = result.aggregate
        lines.append(
            f"{label:<6}"
            f"{agg['viability_pct']['mean']:>9.1f} ± {agg['viability_pct']['sem']:<3.1f}"
            f"{agg['action_pct_eat']['mean']:>9.1f}"
            f"{agg['action_pct_play']['mean']:>10.1f}"
            f"{agg['action_pct_explore']['mean']:>11.1f}"
            f"{agg['median_comfort_pct']['mean']:>12.1f}"
            f"{agg['mean_cortisol']['mean']:>10.2f}"
        )
    return "\n".join(lines)

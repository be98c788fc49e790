"""Figure rendering for the report path.

Renders the same content as the tidy plot-data CSVs: per-run physiology /
valence / hormone time series, the belief raster with action markers, and
the cross-preset comparison chart. All figures are written as PNG files
next to the delimited outputs.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .generative import ACTION_NAMES, Action, STATE_NAMES
from .harness import ExperimentResult
from .simulation import StepRecord

# The action marker sits on the row of the motivation it serves.
_ACTION_ROW = {Action.EAT: 0, Action.PLAY: 1, Action.EXPLORE: 2}


def _save(fig, path: Path) -> Path:
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def render_series_figure(trace: list[StepRecord], title: str, path: Path) -> Path:
    """Stacked time series: internal values and set point, valence, cortisol."""
    t = [r.t for r in trace]
    fig, axes = plt.subplots(3, 1, figsize=(9, 7), sharex=True)

    axes[0].plot(t, [r.energy for r in trace], label="energy", color="tab:red")
    axes[0].plot(t, [r.socialness for r in trace], label="socialness", color="tab:blue")
    axes[0].plot(t, [r.d_energy for r in trace], label="energy set point",
                 color="tab:red", linestyle="--", alpha=0.6)
    axes[0].set_ylabel("internal value")
    axes[0].set_ylim(-0.05, 1.05)
    axes[0].legend(loc="upper right", fontsize=8)

    axes[1].plot(t, [r.surprisal_delta for r in trace], color="tab:purple")
    axes[1].axhline(0.0, color="gray", linewidth=0.5)
    axes[1].set_ylabel("surprisal delta")

    axes[2].plot(t, [r.cortisol for r in trace], color="tab:orange")
    axes[2].set_ylabel("cortisol")
    axes[2].set_ylim(-0.05, 1.05)
    axes[2].set_xlabel("step")

    fig.suptitle(title)
    return _save(fig, path)


def render_raster_figure(trace: list[StepRecord], title: str, path: Path) -> Path:
    """Belief raster over motivation states with selected-action markers."""
    beliefs = np.array([r.q_s.probs for r in trace]).T  # states x steps
    fig, ax = plt.subplots(figsize=(10, 3.2))
    image = ax.imshow(beliefs, aspect="auto", cmap="YlGnBu", vmin=0.0, vmax=1.0,
                      interpolation="nearest")
    for r in trace:
        ax.plot(r.t, _ACTION_ROW[r.action], marker=".", color="red", markersize=4,
                linestyle="none")
    ax.set_yticks(range(len(STATE_NAMES)), STATE_NAMES)
    ax.set_xlabel("step")
    ax.set_title(title)
    fig.colorbar(image, ax=ax, label="belief")
    return _save(fig, path)


def render_run_figures(result: ExperimentResult, out_dir: str | Path,
                       which: str = "first") -> list[Path]:
    """Render per-run figures for the first kept seed or all of them."""
    if which == "none":
        return []
    out = Path(out_dir)
    seeds = result.kept_seeds[:1] if which == "first" else result.kept_seeds
    variant = result.config.variant
    written = []
    for seed in seeds:
        trace = result.traces[seed]
        written.append(render_series_figure(
            trace, f"{variant} run, seed {seed}", out / f"fig3_{seed}.png"))
        written.append(render_raster_figure(
            trace, f"{variant} beliefs and actions, seed {seed}", out / f"fig4_{seed}.png"))
    return written


def render_comparison_figure(results: dict[str, ExperimentResult], path: Path) -> Path:
    """Cross-preset bars: viability, comfort, cortisol, action distribution."""
    labels = list(results.keys())
    x = np.arange(len(labels))
    fig, axes = plt.subplots(2, 2, figsize=(10, 7))

    def bars(ax, metric: str, title: str) -> None:
        means = [results[v].aggregate[metric]["mean"] for v in labels]
        sems = [results[v].aggregate[metric]["sem"] for v in labels]
        ax.bar(x, means, yerr=sems, capsize=4, color="tab:gray")
        ax.set_xticks(x, labels)
        ax.set_title(title)

    bars(axes[0][0], "viability_pct", "viability %")
    bars(axes[0][1], "median_comfort_pct", "median comfort %")
    bars(axes[1][0], "mean_cortisol", "mean cortisol")

    ax = axes[1][1]
    bottom = np.zeros(len(labels))
    for action in ACTION_NAMES:
        shares = np.array([results[v].aggregate[f"action_pct_{action}"]["mean"] for v in labels])
        ax.bar(x, shares, bottom=bottom, label=action)
        bottom += shares
    ax.set_xticks(x, labels)
    ax.set_title("action distribution %")
    ax.legend(fontsize=8)

    fig.tight_layout()
    return _save(fig, path)

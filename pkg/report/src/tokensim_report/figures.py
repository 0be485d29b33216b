"""Figure builders and the batch render entry point.

Rendering never touches the input directory: images go to the paths
named in each :class:`FigureSpec`. Output is deterministic for identical
inputs (fixed SVG hash salt, no embedded dates), so repeated renders
produce identical bytes.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402

from .data import (  # noqa: E402
    band_stats,
    joint_intrinsic_log_price,
    load_trajectories,
    per_run_growth,
    require_columns,
    windowed_mean_growth,
)

__all__ = ["FIGURE_IDS", "FigureSpec", "default_specs", "render"]

plt.rcParams["svg.hashsalt"] = "tokensim-report"

# Scatter plots subsample to this many points for speed; statistics are
# always computed on the full data.
_MAX_SCATTER_POINTS = 20_000

_FIGURE_COLUMNS = {
    "rewards": ("run", "t", "B"),
    "intrinsic": ("run", "t", "V_inverse"),
    "tok_runs": ("run", "t", "TOK"),
    "joint": ("run", "t", "TOK", "V_inverse"),
    "growth_hist": ("run", "t", "Q"),
    "growth_pairs": ("run", "t", "Q"),
    "fiat_price": ("run", "t", "fiat_price"),
}

FIGURE_IDS = tuple(_FIGURE_COLUMNS)


@dataclass(frozen=True)
class FigureSpec:
    """One figure to render: its id, required columns, and output path."""

    figure_id: str
    columns: tuple[str, ...]
    path: Path

    @classmethod
    def for_id(cls, figure_id: str, path: Path) -> "FigureSpec":
        if figure_id not in _FIGURE_COLUMNS:
            raise ValueError(f"unknown figure id {figure_id!r}; "
                             f"expected one of {', '.join(FIGURE_IDS)}")
        return cls(figure_id=figure_id, columns=_FIGURE_COLUMNS[figure_id],
                   path=Path(path))


def default_specs(target_dir: str | Path, figure_ids=FIGURE_IDS,
                  image_format: str = "png") -> list[FigureSpec]:
    """Standard specs writing ``<target_dir>/<figure_id>.<format>``."""
    target = Path(target_dir)
    return [FigureSpec.for_id(fid, target / f"{fid}.{image_format}")
            for fid in figure_ids]


def render(out_dir: str | Path, figures: list[FigureSpec]) -> list[Path]:
    """Render every requested figure from an output directory.

    Returns the written image paths, in the order requested.
    """
    df = load_trajectories(out_dir)
    written = []
    for spec in figures:
        require_columns(df, spec.columns)
        builder = _BUILDERS[spec.figure_id]
        fig = builder(df)
        spec.path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(spec.path, metadata=_clean_metadata(spec.path))
        plt.close(fig)
        written.append(spec.path)
    return written


def _clean_metadata(path: Path) -> dict | None:
    if path.suffix.lower() == ".svg":
        return {"Date": None}
    return None


def _bands_figure(df: pd.DataFrame, column: str, title: str,
                  ylabel: str) -> plt.Figure:
    stats = band_stats(df, column)
    fig, ax = plt.subplots(figsize=(8, 4.5))
    t = stats.index.to_numpy()
    ax.fill_between(t, stats["p5"], stats["p95"], alpha=0.2,
                    label="5-95 percentile", color="tab:blue")
    ax.fill_between(t, stats["mean"] - stats["std"],
                    stats["mean"] + stats["std"], alpha=0.35,
                    label="mean +- 1 std", color="tab:blue")
    ax.plot(t, stats["mean"], color="tab:blue", label="mean")
    ax.set_xlabel("week")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.legend(loc="best")
    fig.tight_layout()
    return fig


def _fig_rewards(df: pd.DataFrame) -> plt.Figure:
    fig, ax = plt.subplots(figsize=(8, 4.5))
    for _, group in df.groupby("run"):
        ax.plot(group["t"], group["B"], color="tab:gray", alpha=0.15, lw=0.7)
    stats = band_stats(df, "B")
    ax.plot(stats.index, stats["mean"], color="tab:red", label="ensemble mean")
    ax.set_xlabel("week")
    ax.set_ylabel("block reward (TOK/week)")
    ax.set_title("Block reward issuance")
    ax.legend(loc="best")
    fig.tight_layout()
    return fig


def _fig_intrinsic(df: pd.DataFrame) -> plt.Figure:
    return _bands_figure(df, "V_inverse", "Intrinsic token value",
                         "1/V (FIAT/TOK)")


def _fig_fiat_price(df: pd.DataFrame) -> plt.Figure:
    return _bands_figure(df, "fiat_price", "Service price in fiat",
                         "P * TOK (FIAT/unit)")


def _fig_tok_runs(df: pd.DataFrame) -> plt.Figure:
    fig, ax = plt.subplots(figsize=(8, 4.5))
    for run in sorted(df["run"].unique())[:5]:
        group = df[df["run"] == run]
        ax.plot(group["t"], group["TOK"], lw=1.0, label=f"run {run}")
    ax.set_yscale("log")
    ax.set_xlabel("week")
    ax.set_ylabel("TOK price (FIAT/TOK)")
    ax.set_title("Token price, first 5 runs")
    ax.legend(loc="best")
    fig.tight_layout()
    return fig


def _fig_joint(df: pd.DataFrame) -> plt.Figure:
    v_inverse, log_tok, rho = joint_intrinsic_log_price(df)
    stride = max(1, len(df) // _MAX_SCATTER_POINTS)
    fig, ax = plt.subplots(figsize=(6, 6))
    ax.scatter(v_inverse[::stride], log_tok[::stride], s=3, alpha=0.25,
               color="tab:blue")
    ax.set_xlabel("1/V (FIAT/TOK)")
    ax.set_ylabel("log TOK price")
    ax.set_title(f"log(TOK) vs intrinsic value (Spearman rho = {rho:.2f})")
    fig.tight_layout()
    return fig


def _fig_growth_hist(df: pd.DataFrame) -> plt.Figure:
    growth = per_run_growth(df)
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.hist(growth, bins=30, color="tab:blue", alpha=0.8)
    ax.set_xlabel("Q(T) / Q(0)")
    ax.set_ylabel("runs")
    ax.set_title("Aggregated growth of transacted quantity")
    fig.tight_layout()
    return fig


def _fig_growth_pairs(df: pd.DataFrame) -> plt.Figure:
    table = windowed_mean_growth(df)
    cols = list(table.columns)
    n = len(cols)
    fig, axes = plt.subplots(n, n, figsize=(2.2 * n, 2.2 * n))
    axes = np.atleast_2d(axes)
    for i, yi in enumerate(cols):
        for j, xj in enumerate(cols):
            ax = axes[i][j]
            if i == j:
                ax.hist(table[xj], bins=15, color="tab:blue", alpha=0.8)
            else:
                ax.scatter(table[xj], table[yi], s=6, alpha=0.5,
                           color="tab:blue")
            if i == n - 1:
                ax.set_xlabel(xj)
            if j == 0:
                ax.set_ylabel(yi)
            ax.tick_params(labelsize=6)
    fig.suptitle("Average per-step Q growth across horizons (per run)")
    fig.tight_layout()
    return fig


_BUILDERS = {
    "rewards": _fig_rewards,
    "intrinsic": _fig_intrinsic,
    "tok_runs": _fig_tok_runs,
    "joint": _fig_joint,
    "growth_hist": _fig_growth_hist,
    "growth_pairs": _fig_growth_pairs,
    "fiat_price": _fig_fiat_price,
}

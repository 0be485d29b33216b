"""Evaluation metrics over trajectories and ensembles.

Covers the three headline metrics (growth of intrinsic value, aggregated
growth of transacted quantity, volatility of the fiat service price),
milestone crossing times, the windowed-growth correlation diagnostic for
non-ergodicity, and per-timestep ensemble summary statistics.

All functions are pure over immutable inputs. Variances are population
variances (mean squared error from the mean).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import Trajectory
from .errors import DegenerateBaseline, InsufficientData, ShapeMismatch

__all__ = [
    "TRACKED_SERIES",
    "SeriesStats",
    "EnsembleSummary",
    "tracked_series",
    "aggregated_growth",
    "fiat_price_stats",
    "milestone_times",
    "windowed_growth_correlation",
    "summarize",
]

# Ensemble summary bands are computed for these derived series.
TRACKED_SERIES = ("v_inverse", "tok", "fiat_price", "q", "b", "w")

_SERIES_FIELD = {"tok": "TOK", "q": "Q", "b": "B", "w": "W"}


def tracked_series(trajectory: Trajectory, name: str) -> np.ndarray:
    """One tracked series of a run as a float array."""
    if name == "v_inverse":
        return 1.0 / np.asarray(trajectory.series("V"), dtype=float)
    if name == "fiat_price":
        return (np.asarray(trajectory.series("P"), dtype=float)
                * np.asarray(trajectory.series("TOK"), dtype=float))
    return np.asarray(trajectory.series(_SERIES_FIELD[name]), dtype=float)


def aggregated_growth(trajectory: Trajectory) -> float:
    """End-over-start ratio of transacted quantity, Q(T)/Q(0)."""
    q0 = trajectory.states[0].Q
    if q0 <= 0.0:
        raise DegenerateBaseline("Q(0) must be > 0 for a growth ratio")
    return trajectory.states[-1].Q / q0


def fiat_price_stats(trajectory: Trajectory) -> tuple[float, float]:
    """Population mean and variance of the fiat service price P*TOK."""
    series = tracked_series(trajectory, "fiat_price")
    return float(series.mean()), float(series.var())


def milestone_times(ensemble: list[Trajectory], thresholds: list[float],
                    statistic: str = "ensemble_mean") -> list[int | None]:
    """First week each intrinsic-value threshold is reached, or None.

    With the default statistic the crossing is measured on the
    ensemble-mean 1/V series; ``statistic="per_run_median"`` instead takes
    the median of per-run crossing times (None when more than half the
    runs never cross).
    """
    if list(thresholds) != sorted(thresholds):
        raise ValueError("thresholds must be sorted ascending")
    vinv = np.array([tracked_series(tr, "v_inverse") for tr in ensemble])
    if statistic == "ensemble_mean":
        mean = vinv.mean(axis=0)
        return [_first_crossing(mean, thr) for thr in thresholds]
    if statistic == "per_run_median":
        out: list[int | None] = []
        for thr in thresholds:
            times = [_first_crossing(row, thr) for row in vinv]
            finite = sorted(t for t in times if t is not None)
            mid = (len(times) - 1) // 2  # lower median; never sorts as +inf
            out.append(finite[mid] if mid < len(finite) else None)
        return out
    raise ValueError(f"unknown statistic {statistic!r}")


def _first_crossing(series: np.ndarray, threshold: float) -> int | None:
    hits = np.nonzero(series >= threshold)[0]
    return int(hits[0]) if hits.size else None


def windowed_growth_correlation(ensemble: list[Trajectory],
                                windows: list[int]) -> np.ndarray:
    """Correlation of Q growth rates measured over different horizons.

    For each window length ``w`` and each run, the average per-step log
    growth of Q is computed over every rolling window of length ``w``.
    For a pair of lengths the rates are paired by run and window start
    and their Pearson correlation taken over the whole ensemble. Short
    horizons correlate strongly with nearby horizons and decorrelate as
    the horizons separate; the returned matrix is symmetric with a unit
    diagonal.
    """
    if len(ensemble) < 3:
        raise InsufficientData("need at least 3 runs for correlations")
    steps = len(ensemble[0].states) - 1
    for w in windows:
        if not 2 <= w <= steps:
            raise ValueError(f"window {w} outside [2, {steps}]")

    log_q = np.log(np.array([tracked_series(tr, "q") for tr in ensemble]))
    rates = {w: (log_q[:, w:] - log_q[:, :-w]) / w for w in windows}

    n = len(windows)
    corr = np.eye(n)
    for i in range(n):
        for j in range(i + 1, n):
            span = min(rates[windows[i]].shape[1], rates[windows[j]].shape[1])
            x = rates[windows[i]][:, :span].ravel()
            y = rates[windows[j]][:, :span].ravel()
            if x.std() == 0.0 or y.std() == 0.0:
                raise InsufficientData(
                    "zero variance in windowed growth; correlation undefined")
            corr[i, j] = corr[j, i] = float(np.corrcoef(x, y)[0, 1])
    return corr


@dataclass(frozen=True)
class SeriesStats:
    """Per-timestep summary bands of one series across an ensemble."""

    mean: np.ndarray
    median: np.ndarray
    std: np.ndarray
    p5: np.ndarray
    p95: np.ndarray


@dataclass(frozen=True)
class EnsembleSummary:
    """Summary statistics of a Monte Carlo batch.

    ``series`` maps each tracked series name to its per-timestep bands;
    the remaining arrays hold one scalar per run.
    """

    series: dict[str, SeriesStats]
    aggregated_growth: np.ndarray
    fiat_price_mean: np.ndarray
    fiat_price_variance: np.ndarray


def summarize(ensemble: list[Trajectory]) -> EnsembleSummary:
    """Bands and per-run scalars for every tracked series."""
    if not ensemble:
        raise ShapeMismatch("ensemble is empty")
    lengths = {len(tr.states) for tr in ensemble}
    if len(lengths) != 1:
        raise ShapeMismatch(f"unequal trajectory lengths: {sorted(lengths)}")

    series = {}
    for name in TRACKED_SERIES:
        data = np.array([tracked_series(tr, name) for tr in ensemble])
        series[name] = SeriesStats(
            mean=data.mean(axis=0),
            median=np.median(data, axis=0),
            std=data.std(axis=0),
            p5=np.percentile(data, 5, axis=0),
            p95=np.percentile(data, 95, axis=0),
        )
    per_run_stats = [fiat_price_stats(tr) for tr in ensemble]
    return EnsembleSummary(
        series=series,
        aggregated_growth=np.array([aggregated_growth(tr) for tr in ensemble]),
        fiat_price_mean=np.array([m for m, _ in per_run_stats]),
        fiat_price_variance=np.array([v for _, v in per_run_stats]),
    )

"""Loading and reducing trajectory data for the figures."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pandas as pd

__all__ = ["EmptyEnsemble", "MissingColumn", "load_trajectories",
           "band_stats", "per_run_growth", "windowed_mean_growth",
           "joint_intrinsic_log_price", "GROWTH_WINDOWS"]

# Horizons of the windowed-growth pair plot; windows longer than a run
# are dropped.
GROWTH_WINDOWS = (10, 20, 30, 104)


class MissingColumn(Exception):
    """A requested figure needs a column the CSV does not carry."""


class EmptyEnsemble(Exception):
    """The trajectories file holds no data rows."""


def load_trajectories(out_dir: str | Path) -> pd.DataFrame:
    """The flat (run, t) table written by the simulator."""
    df = pd.read_csv(Path(out_dir) / "trajectories.csv")
    if df.empty:
        raise EmptyEnsemble(f"no trajectory rows in {out_dir}")
    return df


def require_columns(df: pd.DataFrame, columns: tuple[str, ...]) -> None:
    missing = [c for c in columns if c not in df.columns]
    if missing:
        raise MissingColumn(f"trajectories.csv lacks column(s): {', '.join(missing)}")


def band_stats(df: pd.DataFrame, column: str) -> pd.DataFrame:
    """Per-timestep mean, std, and 5/95 percentiles across runs."""
    grouped = df.groupby("t")[column]
    return pd.DataFrame({
        "mean": grouped.mean(),
        "std": grouped.std(ddof=0),
        "p5": grouped.quantile(0.05),
        "p95": grouped.quantile(0.95),
    })


def per_run_growth(df: pd.DataFrame) -> pd.Series:
    """End-over-start Q ratio for each run."""
    first = df.groupby("run")["Q"].first()
    last = df.groupby("run")["Q"].last()
    return last / first


def windowed_mean_growth(df: pd.DataFrame, windows=GROWTH_WINDOWS) -> pd.DataFrame:
    """Per-run average per-step log growth of Q at several horizons."""
    steps = int(df["t"].max())
    usable = [w for w in windows if 2 <= w <= steps]
    rows = {}
    for run, group in df.sort_values("t").groupby("run"):
        log_q = np.log(group["Q"].to_numpy())
        rows[run] = {f"w{w}": float(np.mean((log_q[w:] - log_q[:-w]) / w))
                     for w in usable}
    return pd.DataFrame.from_dict(rows, orient="index")


def joint_intrinsic_log_price(df: pd.DataFrame) -> tuple[pd.Series, pd.Series, float]:
    """Pooled (1/V, log TOK) pairs and their Spearman rank correlation."""
    v_inverse = df["V_inverse"]
    log_tok = np.log(df["TOK"])
    rho = float(v_inverse.corr(log_tok, method="spearman"))
    return v_inverse, log_tok, rho

"""Deterministic, seedable simulator of a generalized token economy.

Miners supply a unit commodity service in exchange for token rewards,
users demand it, and the token's price mixes intrinsic and speculative
value. The package provides the weekly state-update pipeline, three
block-reward policies with reserve accounting, ensemble metrics, and a
command-line harness for reproducible Monte Carlo experiments.
"""

from .economy import EconomyParams, EconomyState
from .engine import ExperimentConfig, Trajectory, monte_carlo, run, step
from .metrics import EnsembleSummary, summarize
from .rewards import (
    ExponentialDecay,
    IntrinsicTargeted,
    KpiDriven,
    RewardPolicy,
)
from .rng import RandomStream

__version__ = "0.1.0"

__all__ = [
    "EconomyParams",
    "EconomyState",
    "EnsembleSummary",
    "ExperimentConfig",
    "ExponentialDecay",
    "IntrinsicTargeted",
    "KpiDriven",
    "RandomStream",
    "RewardPolicy",
    "Trajectory",
    "monte_carlo",
    "run",
    "step",
    "summarize",
    "__version__",
]

"""Shared fixtures and builders for the test suite."""

import dataclasses

import pytest

from tokensim.economy import EconomyParams, EconomyState
from tokensim.engine import ExperimentConfig, Trajectory
from tokensim.rewards import ExponentialDecay


def make_state(t=0, **overrides) -> EconomyState:
    """A consistent state with every field defaulted; override freely."""
    base = dict(
        t=t, S=100.0, D=100.0, Q=100.0, P=1.0, C=0.5, V=2.0, U=1.0,
        TOK=1.0, R=2.0, lambda_s=10.0, lambda_d=10.0, B=0.0,
        W=1000.0, M=0.0, KPI=float(t), prev_P=1.0, prev_R=2.0, prev_V=2.0,
    )
    base.update(overrides)
    return EconomyState(**base)


def make_trajectory(q_series, p_series=None, tok_series=None,
                    run_index=0) -> Trajectory:
    """Synthetic trajectory with controlled Q, P, and TOK series."""
    n = len(q_series)
    p_series = p_series if p_series is not None else [1.0] * n
    tok_series = tok_series if tok_series is not None else [1.0] * n
    states = [
        make_state(t=t, Q=float(q), P=float(p), TOK=float(tok))
        for t, (q, p, tok) in enumerate(zip(q_series, p_series, tok_series))
    ]
    return Trajectory(run_index=run_index, states=states)


@pytest.fixture
def small_config() -> ExperimentConfig:
    """Fast ensemble: 4 runs of 60 weeks with the default parameters."""
    return ExperimentConfig(
        params=EconomyParams(),
        policy=ExponentialDecay.from_half_life(10_000_000.0, 260),
        steps=60,
        n_runs=4,
        base_seed=2024,
    )


def replace(config, **kw):
    return dataclasses.replace(config, **kw)

"""Discrete-time update pipeline and Monte Carlo runner.

Each step advances the economy by one week in a fixed order:

1. arrival intensities from lagged ratios (supply follows profitability
   R(t-1)/R(t-2), demand follows price P(t-2)/P(t-1), both clamped);
2. arrival sampling (two Poisson draws);
3. supply/demand update with departures and unit floors;
4. clearing price and transacted quantity;
5. unit cost AR(1) (one standard-normal draw);
6. block reward proposal, reserve truncation, issuance accounting;
7. miner revenue ratio V;
8. speculative value update (one uniform draw);
9. token price mixture and profitability R.

A step consumes exactly four logical draws, in the order Poisson(lam_s),
Poisson(lam_d), standard normal, uniform. Together with per-run streams
derived from ``(base_seed, run_index)`` this makes every trajectory a
pure function of its configuration: ensembles may run serially or in a
process pool with identical results, and a captured stream state replays
any suffix of a run.

Bootstrap at t = 0: the lagged quantities P(-1), R(-1), V(-1) are taken
equal to their t = 0 values, so the first step's driving ratios are 1.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import economy, rewards
from .economy import EconomyParams, EconomyState
from .errors import NonFiniteValue, SimulationError, TokensimError, ValidationError
from .rewards import RewardPolicy
from .rng import RandomStream

__all__ = ["ExperimentConfig", "Trajectory", "initial_state", "step", "run",
           "monte_carlo"]

# State fields that must stay finite after every step.
_FINITE_FIELDS = ("S", "D", "Q", "P", "C", "V", "U", "TOK", "R",
                  "lambda_s", "lambda_d", "B", "W", "M")


@dataclass(frozen=True)
class ExperimentConfig:
    """A fully resolved experiment: parameters, policy, and run shape."""

    params: EconomyParams
    policy: RewardPolicy
    steps: int = 1040
    n_runs: int = 100
    base_seed: int = 42

    def __post_init__(self):
        if self.steps < 0:
            raise ValidationError("steps must be >= 0")
        if self.n_runs < 1:
            raise ValidationError("n_runs must be >= 1")
        if not 0 <= self.base_seed < 2 ** 64:
            raise ValidationError("base_seed must fit in 64 unsigned bits")


@dataclass(frozen=True)
class Trajectory:
    """Ordered states of one seeded run; index 0 is the initial state."""

    run_index: int
    states: list[EconomyState]

    def __len__(self) -> int:
        return len(self.states)

    def series(self, name: str) -> list[float]:
        """One state field across all timesteps."""
        return [getattr(s, name) for s in self.states]


def initial_state(params: EconomyParams, policy: RewardPolicy) -> EconomyState:
    """State at t = 0, including the policy's initial issuance.

    TOK(0) comes from the configured initial value rather than the price
    mixture; the mixture applies from the first step onward.
    """
    S, D = params.S0, params.D0
    Q = economy.transacted_quantity(S, D)
    P = economy.clearing_price(S, D, params.k_p)
    B, W, M = rewards.apply_reserve(rewards.initial_reward(policy), policy.W0, 0.0)
    V = economy.miner_revenue_ratio(P, Q, B, params.C0)
    R = economy.miner_profitability(V, params.TOK0)
    return EconomyState(
        t=0, S=S, D=D, Q=Q, P=P, C=params.C0, V=V, U=params.U0,
        TOK=params.TOK0, R=R, lambda_s=params.lambda_s0,
        lambda_d=params.lambda_d0, B=B, W=W, M=M, KPI=0.0,
        prev_P=P, prev_R=R, prev_V=V,
    )


def step(state: EconomyState, params: EconomyParams, policy: RewardPolicy,
         rng: RandomStream) -> EconomyState:
    """Advance one week; see the module docstring for the pipeline order."""
    lam_s, lam_d = economy.update_lambdas(state, state.prev_R, state.prev_P, params)
    dS = economy.sample_arrivals(lam_s, rng)
    dD = economy.sample_arrivals(lam_d, rng)
    S, D = economy.update_supply_demand(state, dS, dD, params)
    P = economy.clearing_price(S, D, params.k_p)
    Q = economy.transacted_quantity(S, D)
    C = economy.update_cost(state.C, params, rng)

    t = state.t + 1
    B, W, M = rewards.apply_reserve(rewards.proposed_reward(policy, t, state),
                                    state.W, state.M)

    if Q > 0.0:
        V = economy.miner_revenue_ratio(P, Q, B, C)
    else:
        V = state.V  # nothing transacted: V (and R below) carry forward
    U = economy.update_speculative(state.U, params, rng)
    TOK = economy.token_price(V, U, params.gamma)
    R = economy.miner_profitability(V, TOK) if Q > 0.0 else state.R

    new = EconomyState(
        t=t, S=S, D=D, Q=Q, P=P, C=C, V=V, U=U, TOK=TOK, R=R,
        lambda_s=lam_s, lambda_d=lam_d, B=B, W=W, M=M, KPI=float(t),
        prev_P=state.P, prev_R=state.R, prev_V=state.V,
    )
    for name in _FINITE_FIELDS:
        if not math.isfinite(getattr(new, name)):
            raise NonFiniteValue(f"{name} became {getattr(new, name)} at t={t}")
    return new


def run(config: ExperimentConfig, run_index: int) -> Trajectory:
    """One seeded run of ``config.steps`` weeks."""
    if not 0 <= run_index < config.n_runs:
        raise ValidationError(f"run_index {run_index} outside [0, {config.n_runs})")
    rng = RandomStream.for_run(config.base_seed, run_index)
    state = initial_state(config.params, config.policy)
    states = [state]
    for _ in range(config.steps):
        try:
            state = step(state, config.params, config.policy, rng)
        except TokensimError as exc:
            raise SimulationError(run_index, state.t + 1, str(exc)) from exc
        states.append(state)
    return Trajectory(run_index=run_index, states=states)


def _run_indexed(args: tuple[ExperimentConfig, int]) -> Trajectory:
    return run(*args)


def monte_carlo(config: ExperimentConfig,
                workers: int | None = None) -> list[Trajectory]:
    """All runs of the ensemble, ordered by run index.

    ``workers`` > 1 executes runs in a process pool; each run owns its
    stream, so the result is identical to serial execution.
    """
    if workers is not None and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            out = list(pool.map(_run_indexed,
                                [(config, i) for i in range(config.n_runs)]))
        return sorted(out, key=lambda tr: tr.run_index)
    return [run(config, i) for i in range(config.n_runs)]

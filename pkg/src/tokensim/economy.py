"""State variables and update rules of the simulated token economy.

The economy tracks a unit commodity service: miners supply it, users
demand it, and the platform pays miners in its native token (TOK). Units
follow a fixed table: ``S``/``D``/``Q`` in service units, ``P`` in
TOK/unit, ``C`` in FIAT/unit, ``V`` in TOK/FIAT (its inverse ``1/V`` is
the token's intrinsic value in FIAT/TOK), ``U`` and ``TOK`` in FIAT/TOK,
and ``R = V * TOK`` dimensionless.

All update rules are pure functions over value types and safe to call
from any thread.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    DegenerateState,
    InvalidMean,
    NoTransactedService,
    ValidationError,
)
from .rng import RandomStream

__all__ = [
    "COST_FLOOR",
    "UNIT_FLOOR",
    "EconomyParams",
    "EconomyState",
    "sample_arrivals",
    "update_lambdas",
    "update_supply_demand",
    "clearing_price",
    "transacted_quantity",
    "update_cost",
    "miner_revenue_ratio",
    "update_speculative",
    "token_price",
    "miner_profitability",
]

# Unit cost of service cannot go non-positive even though the AR(1)
# innovation can; clamped here (FIAT/unit).
COST_FLOOR = 0.01

# Supply and demand never drop below one unit: the network never fully
# dies, and P = k_p * D / S stays well defined.
UNIT_FLOOR = 1.0


@dataclass(frozen=True)
class EconomyParams:
    """Constants of the economy, all overridable per experiment.

    ``X_s``/``X_d`` are weekly departures of supply and demand units.
    ``alpha``, ``mu``, ``sigma`` parameterize the AR(1) unit-cost process
    ``C(t) = alpha*C(t-1) + (1-alpha)*N(mu, sigma)``. ``gamma`` weights
    intrinsic value against speculative value in the token price mixture.
    ``p_up``/``u_step`` drive the speculative random walk. ``k_p`` is the
    proportionality constant of the clearing price. The remaining fields
    are initial values; ``lambda_ratio_bounds`` clamps the per-step
    multiplicative updates of the arrival intensities.
    """

    X_s: float = 5.0
    X_d: float = 5.0
    alpha: float = 0.8
    mu: float = 0.5
    sigma: float = 0.1
    gamma: float = 0.5
    p_up: float = 0.55
    u_step: float = 0.05
    k_p: float = 1.0
    S0: float = 100.0
    D0: float = 100.0
    lambda_s0: float = 10.0
    lambda_d0: float = 10.0
    C0: float = 0.5
    U0: float = 1.0
    TOK0: float = 1.0
    lambda_ratio_bounds: tuple[float, float] = (0.5, 2.0)

    def __post_init__(self):
        self._require(self.X_s >= 0.0, "X_s", ">= 0")
        self._require(self.X_d >= 0.0, "X_d", ">= 0")
        self._require(0.0 <= self.alpha < 1.0, "alpha", "in [0, 1)")
        self._require(self.mu > 0.0, "mu", "> 0")
        self._require(self.sigma >= 0.0, "sigma", ">= 0")
        self._require(0.0 <= self.gamma <= 1.0, "gamma", "in [0, 1]")
        self._require(0.0 <= self.p_up <= 1.0, "p_up", "in [0, 1]")
        self._require(0.0 < self.u_step < 1.0, "u_step", "in (0, 1)")
        self._require(self.k_p > 0.0, "k_p", "> 0")
        self._require(self.S0 >= UNIT_FLOOR, "S0", f">= {UNIT_FLOOR}")
        self._require(self.D0 >= UNIT_FLOOR, "D0", f">= {UNIT_FLOOR}")
        self._require(self.lambda_s0 >= 0.0, "lambda_s0", ">= 0")
        self._require(self.lambda_d0 >= 0.0, "lambda_d0", ">= 0")
        self._require(self.C0 > 0.0, "C0", "> 0")
        self._require(self.U0 > 0.0, "U0", "> 0")
        self._require(self.TOK0 > 0.0, "TOK0", "> 0")
        lo, hi = self.lambda_ratio_bounds
        self._require(0.0 < lo <= 1.0 <= hi, "lambda_ratio_bounds",
                      "an interval containing 1 with positive lower bound")

    @staticmethod
    def _require(ok: bool, name: str, constraint: str) -> None:
        if not ok:
            raise ValidationError(f"{name} must be {constraint}")


@dataclass(frozen=True, slots=True)
class EconomyState:
    """Full per-timestep state vector.

    ``prev_P``, ``prev_R`` and ``prev_V`` hold the previous step's price,
    profitability, and revenue ratio. The arrival-intensity and targeted
    reward rules respond to one-step-lagged ratios, so carrying these
    makes a single state sufficient to compute its successor.
    """

    t: int
    S: float          # service supply (units)
    D: float          # service demand (units)
    Q: float          # transacted service, min(S, D)
    P: float          # service price (TOK/unit)
    C: float          # service cost (FIAT/unit)
    V: float          # miner revenue ratio (TOK/FIAT); 1/V is intrinsic value
    U: float          # speculative token value (FIAT/TOK)
    TOK: float        # token price (FIAT/TOK)
    R: float          # miner profitability, V * TOK (dimensionless)
    lambda_s: float   # supply arrival intensity (units/week)
    lambda_d: float   # demand arrival intensity (units/week)
    B: float          # block reward issued this step (TOK)
    W: float          # reward reserve remaining (TOK)
    M: float          # cumulative rewards issued (TOK)
    KPI: float        # progress index; the timestep itself in this model
    prev_P: float
    prev_R: float
    prev_V: float

    @property
    def v_inverse(self) -> float:
        """Intrinsic token value in FIAT/TOK; derived, never stored."""
        return 1.0 / self.V

    @property
    def fiat_price(self) -> float:
        """Service price in fiat terms, P * TOK (FIAT/unit)."""
        return self.P * self.TOK


def sample_arrivals(lam: float, rng: RandomStream) -> int:
    """Number of new unit arrivals this step, Poisson with mean ``lam``."""
    if not (isinstance(lam, (int, float)) and math.isfinite(lam) and lam >= 0.0):
        raise InvalidMean(f"arrival mean must be finite and >= 0, got {lam!r}")
    return rng.poisson(float(lam))


def _clamp(x: float, bounds: tuple[float, float]) -> float:
    lo, hi = bounds
    return lo if x < lo else hi if x > hi else x


def update_lambdas(prev: EconomyState, prev2_R: float, prev2_P: float,
                   params: EconomyParams) -> tuple[float, float]:
    """Next arrival intensities from lagged profitability and price ratios.

    Supply expands when mining got more profitable, demand expands when
    the service price fell. The driving ratios compare t-1 against t-2;
    each is clamped to ``lambda_ratio_bounds`` before applying.
    """
    r_ratio = _clamp(prev.R / prev2_R, params.lambda_ratio_bounds)
    p_ratio = _clamp(prev2_P / prev.P, params.lambda_ratio_bounds)
    return prev.lambda_s * r_ratio, prev.lambda_d * p_ratio


def update_supply_demand(prev: EconomyState, dS: int, dD: int,
                         params: EconomyParams) -> tuple[float, float]:
    """Apply arrivals and constant departures, floored at one unit."""
    S = max(UNIT_FLOOR, prev.S + dS - params.X_s)
    D = max(UNIT_FLOOR, prev.D + dD - params.X_d)
    return S, D


def clearing_price(S: float, D: float, k_p: float) -> float:
    """Service price set by relative demand strength, k_p * D / S."""
    if S < UNIT_FLOOR:
        raise DegenerateState(f"supply {S} below unit floor; cannot price")
    return k_p * D / S


def transacted_quantity(S: float, D: float) -> float:
    """Units actually transacted: the short side of the market."""
    return min(S, D)


def update_cost(prev_C: float, params: EconomyParams, rng: RandomStream) -> float:
    """AR(1) unit cost: noisy but neither diverging nor converging."""
    innovation = params.mu + params.sigma * rng.standard_normal()
    return max(COST_FLOOR, params.alpha * prev_C + (1.0 - params.alpha) * innovation)


def miner_revenue_ratio(P: float, Q: float, B: float, C: float) -> float:
    """TOK earned per FIAT spent: (P*Q + B) / (C*Q).

    Undefined when nothing transacts; the engine carries the previous
    value forward in that case.
    """
    if Q <= 0.0:
        raise NoTransactedService("revenue ratio undefined with Q = 0")
    return (P * Q + B) / (C * Q)


def update_speculative(prev_U: float, params: EconomyParams,
                       rng: RandomStream) -> float:
    """Multiplicative random walk with drift: up by ``u_step`` with
    probability ``p_up``, else down by the same fraction."""
    if rng.uniform() < params.p_up:
        return prev_U * (1.0 + params.u_step)
    return prev_U * (1.0 - params.u_step)


def token_price(V: float, U: float, gamma: float) -> float:
    """Convex mixture of intrinsic (1/V) and speculative (U) value."""
    return gamma * (1.0 / V) + (1.0 - gamma) * U


def miner_profitability(V: float, TOK: float) -> float:
    """Dimensionless profitability signal, V * TOK."""
    return V * TOK

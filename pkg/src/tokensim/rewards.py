"""Block reward regimes and reserve accounting.

Three reward policies share one accounting rule: a proposed reward is
truncated to the remaining reserve ``W``, issuance accumulates into
``M``, and ``M + W`` equals the initial reserve forever.

* ``ExponentialDecay``: open-loop schedule ``B0 * decay**t``.
* ``KpiDriven``: issuance proportional to the lagged growth ratio of a
  progress index and the remaining reserve.
* ``IntrinsicTargeted``: the issued fraction of the remaining reserve
  scales with the lagged ratio of the revenue signal ``V``, so issuance
  accelerates when intrinsic value ``1/V`` is falling.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Union

from .errors import ValidationError

if TYPE_CHECKING:
    from .economy import EconomyState

__all__ = [
    "ExponentialDecay",
    "KpiDriven",
    "IntrinsicTargeted",
    "RewardPolicy",
    "decay_rate_from",
    "exponential_reward",
    "kpi_reward",
    "targeted_reward",
    "apply_reserve",
    "initial_reward",
    "proposed_reward",
]


def decay_rate_from(total_supply: float, half_life: float) -> float:
    """Weekly decay rate whose schedule halves every ``half_life`` weeks.

    Solves ``decay**half_life = 1/2``; the companion initial reward that
    exhausts ``total_supply`` over the geometric series is
    ``total_supply * (1 - decay)``.
    """
    if half_life < 1:
        raise ValidationError("half_life must be >= 1 week")
    return 0.5 ** (1.0 / half_life)


@dataclass(frozen=True)
class ExponentialDecay:
    """Open-loop deterministic schedule B(t) = B0 * decay**t."""

    B0: float
    decay: float
    W0: float

    def __post_init__(self):
        if not 0.0 < self.decay < 1.0:
            raise ValidationError("decay must be in (0, 1)")
        _check_shared(self.B0, self.W0)

    @classmethod
    def from_half_life(cls, total_supply: float, half_life: float) -> "ExponentialDecay":
        """Derive (B0, decay) from a total supply and a half-life in weeks."""
        decay = decay_rate_from(total_supply, half_life)
        return cls(B0=total_supply * (1.0 - decay), decay=decay, W0=total_supply)


@dataclass(frozen=True)
class KpiDriven:
    """Issue epsilon * (KPI growth ratio) * (remaining reserve) per step."""

    epsilon: float
    W0: float

    def __post_init__(self):
        if not self.epsilon > 0.0:
            raise ValidationError("epsilon must be > 0")
        _check_shared(0.0, self.W0)


@dataclass(frozen=True)
class IntrinsicTargeted:
    """Scale the issued reserve fraction by the lagged V ratio.

    Starts from the same B0 as the decay schedule; afterwards
    B(t) = (V(t-1)/V(t-2)) * (B(t-1)/W_before(t-1)) * W_before(t).
    """

    B0: float
    W0: float

    def __post_init__(self):
        _check_shared(self.B0, self.W0)


RewardPolicy = Union[ExponentialDecay, KpiDriven, IntrinsicTargeted]


def _check_shared(B0: float, W0: float) -> None:
    if W0 <= 0.0:
        raise ValidationError("W0 must be > 0")
    if B0 < 0.0:
        raise ValidationError("B0 must be >= 0")
    if B0 > W0:
        raise ValidationError("B0 must be <= W0")


def exponential_reward(t: int, policy: ExponentialDecay) -> float:
    """Scheduled reward at week ``t``, before reserve clamping."""
    return policy.B0 * policy.decay ** t


def kpi_reward(kpi_ratio: float, W_prev: float, epsilon: float) -> float:
    """Reward proportional to KPI growth and remaining reserve."""
    return epsilon * kpi_ratio * W_prev


def targeted_reward(V_ratio: float, B_prev: float, W_prev: float,
                    W_now: float) -> float:
    """Carry the issued reserve fraction forward, scaled by ``V_ratio``.

    ``W_prev`` and ``W_now`` are the reserves available before the
    previous and the current issuance. An exhausted reserve yields 0.
    """
    if W_prev <= 0.0:
        return 0.0
    return V_ratio * (B_prev / W_prev) * W_now


def apply_reserve(B_proposed: float, W_prev: float,
                  M_prev: float) -> tuple[float, float, float]:
    """Truncate a proposal to the reserve and update the accounting.

    Returns ``(B, W, M)`` with ``B = min(B_proposed, W_prev)``; the sum
    ``M + W`` is invariant under any sequence of applications.
    """
    B = min(B_proposed, W_prev)
    return B, W_prev - B, M_prev + B


def initial_reward(policy: RewardPolicy) -> float:
    """Reward proposed at t = 0, before reserve clamping."""
    if isinstance(policy, ExponentialDecay):
        return policy.B0
    if isinstance(policy, KpiDriven):
        # no KPI history yet; growth ratio defaults to 1
        return kpi_reward(1.0, policy.W0, policy.epsilon)
    return policy.B0


def proposed_reward(policy: RewardPolicy, t: int, prev: "EconomyState") -> float:
    """Reward proposed at step ``t`` given the state at ``t - 1``."""
    if isinstance(policy, ExponentialDecay):
        return exponential_reward(t, policy)
    if isinstance(policy, KpiDriven):
        # KPI(t) = t here, so the lagged growth ratio is KPI(t-1)/KPI(t-2);
        # treated as 1 until both are positive.
        ratio = prev.KPI / (prev.KPI - 1.0) if prev.KPI > 1.0 else 1.0
        return kpi_reward(ratio, prev.W, policy.epsilon)
    # reserve before the previous issuance reconstructs as W + B
    v_ratio = prev.V / prev.prev_V
    return targeted_reward(v_ratio, prev.B, prev.W + prev.B, prev.W)

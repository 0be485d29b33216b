"""Seedable random streams with fixed, replayable variate transforms.

Every random quantity in a simulation run is derived from one
:class:`RandomStream`. The stream draws raw uniform doubles from a PCG64
bit generator and builds all other variates (standard normals, Poisson
counts) with transforms implemented in this module, so that a given seed
reproduces the same draw sequence regardless of library upgrades. Streams
for the runs of an ensemble are derived from ``(base_seed, run_index)``
through ``numpy``'s ``SeedSequence`` spawn keys, which keeps them
statistically independent.

Transform choices, fixed project-wide:

* standard normal: inverse-CDF of a single uniform, using Acklam's
  rational approximation (relative error < 1.2e-9);
* Poisson: Knuth's multiplication method for ``lam < 30``, otherwise a
  rounded normal approximation ``max(0, floor(lam + sqrt(lam)*z + 0.5))``.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["RandomStream", "POISSON_NORMAL_THRESHOLD"]

# Above this mean the Poisson sampler switches from Knuth's exact method
# (cost grows linearly with lam) to the rounded normal approximation.
POISSON_NORMAL_THRESHOLD = 30.0

_BLOCK = 1024  # uniforms drawn per refill; invisible to the draw sequence

# Acklam's inverse normal CDF coefficients.
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)
_P_LOW = 0.02425
_P_HIGH = 1.0 - _P_LOW


def _inverse_normal_cdf(p: float) -> float:
    """Acklam's rational approximation to the standard normal quantile."""
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        return ((((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5])
                / ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0))
    if p > _P_HIGH:
        q = math.sqrt(-2.0 * math.log(1.0 - p))
        return -((((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5])
                 / ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0))
    q = p - 0.5
    r = q * q
    return ((((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q
            / (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0))


class RandomStream:
    """Deterministic source of uniforms, normals, and Poisson counts.

    Two streams built from the same ``(seed, spawn_key)`` produce identical
    sequences. The stream position can be captured with :attr:`state` and
    restored later, which replays any suffix of a run exactly.
    """

    def __init__(self, seed: int, spawn_key: tuple[int, ...] = ()):
        self.seed = seed
        self.spawn_key = tuple(spawn_key)
        seq = np.random.SeedSequence(seed, spawn_key=self.spawn_key)
        self._bitgen = np.random.PCG64(seq)
        self._gen = np.random.Generator(self._bitgen)
        self._buf = np.empty(0)
        self._pos = 0
        self._refill_state = self._bitgen.state

    @classmethod
    def for_run(cls, base_seed: int, run_index: int) -> "RandomStream":
        """Stream for one run of an ensemble, independent across indices."""
        return cls(base_seed, spawn_key=(run_index,))

    def uniform(self) -> float:
        """Next uniform double in [0, 1)."""
        if self._pos >= self._buf.shape[0]:
            self._refill_state = self._bitgen.state
            self._buf = self._gen.random(_BLOCK)
            self._pos = 0
        u = self._buf[self._pos]
        self._pos += 1
        return float(u)

    def standard_normal(self) -> float:
        """One N(0, 1) variate from exactly one uniform draw."""
        u = self.uniform()
        # guard the open interval; u == 0.0 occurs with probability 2**-53
        if u < 1e-300:
            u = 1e-300
        elif u > 1.0 - 1e-16:
            u = 1.0 - 1e-16
        return _inverse_normal_cdf(u)

    def poisson(self, lam: float) -> int:
        """One Poisson(lam) variate, lam >= 0 and finite."""
        if not (lam >= 0.0 and math.isfinite(lam)):
            raise ValueError(f"Poisson mean must be finite and >= 0, got {lam}")
        if lam < POISSON_NORMAL_THRESHOLD:
            limit = math.exp(-lam)
            k = 0
            prod = self.uniform()
            while prod > limit:
                k += 1
                prod *= self.uniform()
            return k
        k = math.floor(lam + math.sqrt(lam) * self.standard_normal() + 0.5)
        return max(0, int(k))

    @property
    def state(self) -> dict:
        """Snapshot of the stream position; pass back to :meth:`set_state`."""
        return {"bit_generator": self._refill_state, "offset": self._pos,
                "filled": self._buf.shape[0] > 0}

    def set_state(self, state: dict) -> None:
        self._bitgen.state = state["bit_generator"]
        self._refill_state = self._bitgen.state
        if state["filled"]:
            self._buf = self._gen.random(_BLOCK)
        else:
            self._buf = np.empty(0)
        self._pos = state["offset"]

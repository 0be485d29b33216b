"""Experiment presets and the configuration file schema.

A configuration file is a YAML (or JSON) document with up to four keys:

* ``preset``: name of a preset to start from;
* ``run``: ``steps``, ``n_runs``, ``base_seed``;
* ``params``: any :class:`~tokensim.economy.EconomyParams` field;
* ``policy``: ``variant`` plus its fields. Variants are
  ``exponential_decay`` (``W0`` with ``decay`` or ``half_life``,
  optional ``B0``), ``kpi_driven`` (``epsilon``, ``W0``) and
  ``intrinsic_targeted`` (``B0``, ``W0``).

Explicit sections override preset values; unknown keys are rejected. A
``manifest.json`` written next to simulation output is itself a valid
configuration file, so any output directory can be reproduced from its
manifest alone.
"""

from __future__ import annotations

import dataclasses
import os
from typing import Any

import yaml

from .economy import EconomyParams
from .engine import ExperimentConfig
from .errors import ParseError, ValidationError
from .rewards import (
    ExponentialDecay,
    IntrinsicTargeted,
    KpiDriven,
    RewardPolicy,
    decay_rate_from,
)

__all__ = ["PRESET_NAMES", "preset_config", "load_config", "emit_config",
           "config_to_dict", "config_from_dict"]

# Reward reserve and release schedule on a Bitcoin-like normalized scale:
# ten million tokens halving every five years of weekly steps.
TOTAL_SUPPLY = 10_000_000.0
HALF_LIFE_WEEKS = 260

DEFAULT_STEPS = 1040  # twenty years of weeks
DEFAULT_RUNS = 100
DEFAULT_SEED = 42

PRESET_NAMES = ("baseline", "high_spec", "low_spec", "kpi", "targeted")

_POLICY_TAGS = {
    ExponentialDecay: "exponential_decay",
    KpiDriven: "kpi_driven",
    IntrinsicTargeted: "intrinsic_targeted",
}


def _baseline_policy() -> ExponentialDecay:
    return ExponentialDecay.from_half_life(TOTAL_SUPPLY, HALF_LIFE_WEEKS)


def preset_config(name: str) -> ExperimentConfig:
    """Fully resolved configuration for a named preset.

    ``baseline``/``high_spec``/``low_spec`` differ only in the upward
    drift probability of the speculative walk (0.55 / 0.58 / 0.52);
    ``kpi`` and ``targeted`` differ from baseline only in the reward
    policy.
    """
    if name not in PRESET_NAMES:
        raise ValidationError(
            f"unknown preset {name!r}; expected one of {', '.join(PRESET_NAMES)}")
    params = EconomyParams()
    policy: RewardPolicy = _baseline_policy()
    if name == "high_spec":
        params = dataclasses.replace(params, p_up=0.58)
    elif name == "low_spec":
        params = dataclasses.replace(params, p_up=0.52)
    elif name == "kpi":
        # epsilon chosen so an undisturbed reserve outlives the run
        policy = KpiDriven(epsilon=0.0005, W0=TOTAL_SUPPLY)
    elif name == "targeted":
        policy = IntrinsicTargeted(B0=_baseline_policy().B0, W0=TOTAL_SUPPLY)
    return ExperimentConfig(params=params, policy=policy, steps=DEFAULT_STEPS,
                            n_runs=DEFAULT_RUNS, base_seed=DEFAULT_SEED)


def config_to_dict(config: ExperimentConfig) -> dict[str, Any]:
    """Plain-data form of a configuration; inverse of :func:`config_from_dict`."""
    params = dataclasses.asdict(config.params)
    params["lambda_ratio_bounds"] = list(config.params.lambda_ratio_bounds)
    policy = {"variant": _POLICY_TAGS[type(config.policy)]}
    policy.update(dataclasses.asdict(config.policy))
    return {
        "run": {"steps": config.steps, "n_runs": config.n_runs,
                "base_seed": config.base_seed},
        "params": params,
        "policy": policy,
    }


def config_from_dict(data: dict[str, Any]) -> ExperimentConfig:
    """Validated configuration from plain data; rejects unknown keys."""
    if not isinstance(data, dict):
        raise ValidationError("configuration root must be a mapping")
    _reject_unknown(data, {"preset", "run", "params", "policy"}, "top level")

    if "preset" in data:
        base = config_to_dict(preset_config(data["preset"]))
    else:
        base = config_to_dict(ExperimentConfig(params=EconomyParams(),
                                               policy=_baseline_policy()))
    for section in ("run", "params"):
        override = data.get(section, {})
        if not isinstance(override, dict):
            raise ValidationError(f"{section} must be a mapping")
        _reject_unknown(override, set(base[section]), section)
        base[section].update(override)
    if "policy" in data:
        base["policy"] = data["policy"]

    params_kwargs = dict(base["params"])
    params_kwargs["lambda_ratio_bounds"] = tuple(params_kwargs["lambda_ratio_bounds"])
    params = EconomyParams(**params_kwargs)
    policy = _policy_from_dict(base["policy"])
    run = base["run"]
    return ExperimentConfig(params=params, policy=policy, steps=int(run["steps"]),
                            n_runs=int(run["n_runs"]),
                            base_seed=int(run["base_seed"]))


def _policy_from_dict(data: dict[str, Any]) -> RewardPolicy:
    if not isinstance(data, dict) or "variant" not in data:
        raise ValidationError("policy must be a mapping with a 'variant' key")
    variant = data["variant"]
    fields = {k: v for k, v in data.items() if k != "variant"}
    if variant == "exponential_decay":
        _reject_unknown(fields, {"B0", "decay", "half_life", "W0"}, "policy")
        if "W0" not in fields:
            raise ValidationError("policy.W0 is required")
        if ("decay" in fields) == ("half_life" in fields):
            raise ValidationError(
                "exponential_decay takes exactly one of 'decay' or 'half_life'")
        W0 = float(fields["W0"])
        decay = (float(fields["decay"]) if "decay" in fields
                 else decay_rate_from(W0, float(fields["half_life"])))
        B0 = float(fields.get("B0", W0 * (1.0 - decay)))
        return ExponentialDecay(B0=B0, decay=decay, W0=W0)
    if variant == "kpi_driven":
        _reject_unknown(fields, {"epsilon", "W0"}, "policy")
        return KpiDriven(epsilon=float(fields["epsilon"]), W0=float(fields["W0"]))
    if variant == "intrinsic_targeted":
        _reject_unknown(fields, {"B0", "W0"}, "policy")
        return IntrinsicTargeted(B0=float(fields["B0"]), W0=float(fields["W0"]))
    raise ValidationError(f"unknown policy variant {variant!r}")


def _reject_unknown(given: dict, allowed: set[str], where: str) -> None:
    unknown = set(given) - allowed
    if unknown:
        raise ValidationError(
            f"unknown {where} key(s): {', '.join(sorted(map(str, unknown)))}")


def load_config(path: str | os.PathLike) -> ExperimentConfig:
    """Read and validate a configuration (or manifest) file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except OSError:
        raise
    except yaml.YAMLError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    if isinstance(data, dict) and "config" in data:
        data = data["config"]  # manifest.json embeds the configuration
    if data is None:
        raise ParseError(f"{path}: empty configuration")
    return config_from_dict(data)


def emit_config(config: ExperimentConfig) -> str:
    """Canonical YAML text; ``load`` of the emitted text round-trips."""
    return yaml.safe_dump(config_to_dict(config), sort_keys=True,
                          default_flow_style=False)

"""Experiment configuration.

A single dataclass carries every tunable of the simulator, the market
mechanisms, and the learner.  Defaults match the experimental setup used
throughout: 4 RSUs tiling a 1 km x 1 km arena, vehicles at ~25 m/s,
chunk counts in 1..10, discounting 0.95, PPO clip 0.2.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from typing import Any

MECHANISMS = ("madrl", "random", "second-price", "double-auction")
URGENT_MODES = ("paper-literal", "lowest-ask")


class ConfigError(ValueError):
    """Raised when a configuration value is out of range (CLI exit code 2)."""


@dataclass
class ExperimentConfig:
    # population
    num_vehicles: int = 40
    num_rsus: int = 4
    max_chunks: int = 10
    max_power_mw: float = 10.0
    kappa: float = 0.07           # seller value per mW
    buyer_probability: float = 0.5

    # arena / mobility
    arena_m: float = 1000.0
    rsu_coverage_m: float = 500.0
    mean_speed_mps: float = 25.0  # ~90 km/h
    speed_std_mps: float = 2.5
    slot_seconds: float = 1.0

    # link model
    direct_rate_mbps: tuple[float, float] = (5.0, 25.0)
    coop_rate_mbps: tuple[float, float] = (10.0, 50.0)
    v2v_range_m: float = 200.0
    chunk_mb: float = 1.0
    rsu_service_mbps: float = 50.0

    # mechanisms
    urgent_mode: str = "paper-literal"
    mundane_period: int = 1
    mechanism: str = "madrl"

    # learner
    alpha_budget: float = 0.1
    gamma: float = 0.95
    learning_rate: float = 1e-3
    momentum: float = 0.9
    clip_ratio: float = 0.2
    value_coef: float = 0.5
    entropy_coef: float = 0.02
    hidden_sizes: tuple[int, int] = (64, 64)
    slots_per_episode: int = 100
    episodes_per_epoch: int = 8
    epochs: int = 500
    ppo_passes: int = 4
    max_grad_norm: float = 0.5
    share_parameters: bool = True
    use_gae: bool = False
    gae_lambda: float = 0.95

    def validate(self) -> None:
        positive = (
            "num_vehicles", "num_rsus", "max_chunks", "kappa", "arena_m",
            "rsu_coverage_m", "mean_speed_mps", "slot_seconds", "chunk_mb",
            "rsu_service_mbps", "gamma", "learning_rate", "clip_ratio",
            "value_coef", "entropy_coef", "slots_per_episode",
            "episodes_per_epoch", "epochs", "ppo_passes", "mundane_period",
            "v2v_range_m",
        )
        for name in positive:
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)!r}")
        for name in ("max_power_mw", "alpha_budget", "speed_std_mps"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be non-negative, got {getattr(self, name)!r}")
        if not 0.0 <= self.buyer_probability <= 1.0:
            raise ConfigError(f"buyer_probability must be in [0,1], got {self.buyer_probability!r}")
        if not 0.0 <= self.gamma <= 1.0:
            raise ConfigError(f"gamma must be in [0,1], got {self.gamma!r}")
        if self.urgent_mode not in URGENT_MODES:
            raise ConfigError(f"urgent_mode must be one of {URGENT_MODES}, got {self.urgent_mode!r}")
        if self.mechanism not in MECHANISMS:
            raise ConfigError(f"mechanism must be one of {MECHANISMS}, got {self.mechanism!r}")
        for name in ("direct_rate_mbps", "coop_rate_mbps"):
            lo, hi = getattr(self, name)
            if not 0 < lo <= hi:
                raise ConfigError(f"{name} must satisfy 0 < lo <= hi, got {(lo, hi)!r}")

    def to_dict(self) -> dict[str, Any]:
        d = dataclasses.asdict(self)
        for k, v in d.items():
            if isinstance(v, tuple):
                d[k] = list(v)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ExperimentConfig":
        fields = {f.name: f for f in dataclasses.fields(cls)}
        kwargs = {}
        for key, value in data.items():
            if key not in fields:
                raise ConfigError(f"unknown config field {key!r}")
            if isinstance(value, list):
                value = tuple(value)
            kwargs[key] = value
        cfg = cls(**kwargs)
        cfg.validate()
        return cfg

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        return cls.from_dict(json.loads(text))

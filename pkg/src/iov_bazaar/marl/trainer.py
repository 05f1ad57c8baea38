"""Training and evaluation loops over the slot simulator.

``train`` runs MAPPO on the madrl mechanism; ``evaluate`` runs a fixed
baseline policy through the same episode machinery so the metric rows are
directly comparable.  Everything is driven by a single integer seed.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
import torch

from ..config import ExperimentConfig
from . import baselines
from .env import Episode, MarketEnv, SlotSample, obs_dim, state_dim
from .nets import CriticNet, PolicyNet
from .ppo import build_batch, make_optimizer, ppo_update


@dataclass
class EpochMetrics:
    epoch: int
    reward: float
    social_welfare: float
    budget: float
    latency: float
    entropy: float = 0.0

    def to_dict(self) -> dict[str, float]:
        return asdict(self)


def _mean(xs: list[float]) -> float:
    return float(np.mean(xs)) if xs else 0.0


class Trainer:
    """Owns the env, shared policy, centralized critic, and optimizer."""

    def __init__(self, config: ExperimentConfig, seed: int):
        self.config = config
        self.seed = seed
        torch.manual_seed(seed)
        self.policy = PolicyNet(obs_dim(config), config.hidden_sizes)
        self.critic = CriticNet(state_dim(config), config.hidden_sizes)
        self.optimizer = make_optimizer(self.policy, self.critic, config)
        self.env = MarketEnv(config, seed)
        self.rng_action = np.random.default_rng(seed + 1)
        self.env.reset()

    def _sample_actions(self, obs: dict[int, np.ndarray]) -> dict[int, int]:
        if not obs:
            return {}
        ids = sorted(obs)
        stacked = torch.as_tensor(np.stack([obs[v] for v in ids]),
                                  dtype=torch.float32)
        with torch.no_grad():
            probs = self.policy.action_probs(stacked).numpy()
        draws = self.rng_action.random(len(ids))
        return {v: int(draws[i] < probs[i, 1]) for i, v in enumerate(ids)}

    def collect_episode(self) -> tuple[Episode, dict[str, list[float]]]:
        obs = self.env.reset()
        ep = Episode()
        logs: dict[str, list[float]] = {
            "reward": [], "social_welfare": [], "budget": [], "latency": []}
        for _ in range(self.config.slots_per_episode):
            actions = self._sample_actions(obs)
            next_obs, result, gstate = self.env.step(actions)
            ep.slots.append(SlotSample(obs, actions, gstate, result.reward))
            logs["reward"].append(result.reward)
            logs["social_welfare"].append(result.social_welfare)
            logs["budget"].append(result.budget)
            logs["latency"].append(result.latency)
            obs = next_obs
        return ep, logs

    def run_epoch(self, epoch: int) -> EpochMetrics:
        episodes: list[Episode] = []
        agg: dict[str, list[float]] = {
            "reward": [], "social_welfare": [], "budget": [], "latency": []}
        for _ in range(self.config.episodes_per_epoch):
            ep, logs = self.collect_episode()
            episodes.append(ep)
            for k, v in logs.items():
                agg[k].extend(v)
        batch = build_batch(episodes, self.policy, self.critic,
                            self.config.gamma, self.config.use_gae,
                            self.config.gae_lambda)
        stats = ppo_update(self.policy, self.critic, self.optimizer,
                           batch, self.config)
        return EpochMetrics(epoch, _mean(agg["reward"]),
                            _mean(agg["social_welfare"]), _mean(agg["budget"]),
                            _mean(agg["latency"]), stats["entropy"])

    def train(self, epochs: int | None = None) -> list[EpochMetrics]:
        n = self.config.epochs if epochs is None else epochs
        return [self.run_epoch(e) for e in range(n)]

    def checkpoint(self) -> dict:
        """JSON-serializable snapshot of both networks."""
        def dump(module: torch.nn.Module) -> dict[str, list]:
            return {k: v.tolist() for k, v in module.state_dict().items()}
        return {"seed": self.seed, "policy": dump(self.policy),
                "critic": dump(self.critic)}

    def load_checkpoint(self, snapshot: dict) -> None:
        def load(module: torch.nn.Module, blob: dict[str, list]) -> None:
            module.load_state_dict(
                {k: torch.as_tensor(v, dtype=torch.float32)
                 for k, v in blob.items()})
        load(self.policy, snapshot["policy"])
        load(self.critic, snapshot["critic"])


def evaluate(config: ExperimentConfig, seed: int, mechanism: str,
             epochs: int | None = None) -> list[EpochMetrics]:
    """Run a fixed baseline policy; mirrors the training epoch structure."""
    policy = baselines.BASELINES[mechanism]
    env = MarketEnv(config, seed)
    rng = np.random.default_rng(seed + 1)
    rows = []
    n = config.epochs if epochs is None else epochs
    for epoch in range(n):
        agg: dict[str, list[float]] = {
            "reward": [], "social_welfare": [], "budget": [], "latency": []}
        for _ in range(config.episodes_per_epoch):
            obs = env.reset()
            for _ in range(config.slots_per_episode):
                actions = policy(sorted(obs), rng)
                obs, result, _ = env.step(actions)
                agg["reward"].append(result.reward)
                agg["social_welfare"].append(result.social_welfare)
                agg["budget"].append(result.budget)
                agg["latency"].append(result.latency)
        rows.append(EpochMetrics(epoch, _mean(agg["reward"]),
                                 _mean(agg["social_welfare"]),
                                 _mean(agg["budget"]), _mean(agg["latency"])))
    return rows

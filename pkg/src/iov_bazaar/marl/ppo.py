"""Clipped-surrogate PPO with a centralized critic (MAPPO-style).

The batch flattens every (agent, slot) pair of an epoch's episodes: the
shared policy is updated on local observations while the critic regresses
the global state against team discounted returns.  Advantages are
``return - V(s)``, detached and standardized over the batch.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch

from ..config import ExperimentConfig
from .env import Episode, discounted_returns
from .nets import CriticNet, PolicyNet


@dataclass
class Batch:
    obs: torch.Tensor          # (B, obs_dim)
    actions: torch.Tensor      # (B,) long
    old_logp: torch.Tensor     # (B,)
    returns: torch.Tensor      # (B,) in batch-standardized reward units
    states: torch.Tensor       # (B, state_dim)

    def __len__(self) -> int:
        return self.obs.shape[0]


def build_batch(episodes: list[Episode], policy: PolicyNet, critic: CriticNet,
                gamma: float, use_gae: bool = False,
                gae_lambda: float = 0.95) -> Batch | None:
    """Flatten episodes into one training batch; None when nothing acted.

    Rewards are standardized over the batch before computing value targets,
    so returns, critic predictions, and bootstrapped GAE targets all live on
    the same unit scale regardless of the raw reward magnitude.
    """
    all_rewards = np.asarray([r for ep in episodes for r in ep.rewards])
    if all_rewards.size == 0:
        return None
    r_mean = all_rewards.mean()
    r_std = all_rewards.std() + 1e-8

    obs, actions, states, returns = [], [], [], []
    for ep in episodes:
        norm_rewards = [(r - r_mean) / r_std for r in ep.rewards]
        if use_gae:
            ep_returns = gae_returns(ep, norm_rewards, critic, gamma,
                                     gae_lambda)
        else:
            ep_returns = discounted_returns(norm_rewards, gamma)
        for slot, g in zip(ep.slots, ep_returns):
            for v in sorted(slot.obs):
                obs.append(slot.obs[v])
                actions.append(slot.actions[v])
                states.append(slot.global_state)
                returns.append(g)
    if not obs:
        return None
    obs_t = torch.as_tensor(np.asarray(obs), dtype=torch.float32)
    actions_t = torch.as_tensor(actions, dtype=torch.long)
    with torch.no_grad():
        old_logp = policy.distribution(obs_t).log_prob(actions_t)
    return Batch(obs_t, actions_t, old_logp,
                 torch.as_tensor(returns, dtype=torch.float32),
                 torch.as_tensor(np.asarray(states), dtype=torch.float32))


def gae_returns(ep: Episode, rewards: list[float], critic: CriticNet,
                gamma: float, lam: float) -> list[float]:
    """Value targets via generalized advantage estimation (advantage + V)."""
    with torch.no_grad():
        values = critic(torch.as_tensor(
            np.asarray([s.global_state for s in ep.slots]),
            dtype=torch.float32)).numpy()
    adv = np.zeros(len(rewards))
    acc = 0.0
    for t in range(len(rewards) - 1, -1, -1):
        next_v = values[t + 1] if t + 1 < len(rewards) else 0.0
        delta = rewards[t] + gamma * next_v - values[t]
        acc = delta + gamma * lam * acc
        adv[t] = acc
    return list(adv + values)


def ppo_loss(policy: PolicyNet, critic: CriticNet, batch: Batch,
             config: ExperimentConfig,
             advantages: torch.Tensor | None = None
             ) -> tuple[torch.Tensor, dict[str, float]]:
    """Total loss = clip surrogate + value_coef * MSE - entropy_coef * H.

    Advantages are treated as constants (detached); pass them explicitly
    to evaluate the loss as a pure function of the network parameters.
    """
    dist = policy.distribution(batch.obs)
    logp = dist.log_prob(batch.actions)
    values = critic(batch.states)

    if advantages is None:
        advantages = (batch.returns - values).detach()
        if len(batch) > 1:
            advantages = (advantages - advantages.mean()) / (advantages.std() + 1e-8)

    ratio = torch.exp(logp - batch.old_logp)
    eps = config.clip_ratio
    clipped = torch.clamp(ratio, 1.0 - eps, 1.0 + eps)
    policy_loss = -torch.min(ratio * advantages, clipped * advantages).mean()
    value_loss = torch.mean((values - batch.returns) ** 2)
    entropy = dist.entropy().mean()

    total = (policy_loss + config.value_coef * value_loss
             - config.entropy_coef * entropy)
    stats = {"policy_loss": float(policy_loss.detach()),
             "value_loss": float(value_loss.detach()),
             "entropy": float(entropy.detach())}
    return total, stats


def make_optimizer(policy: PolicyNet, critic: CriticNet,
                   config: ExperimentConfig) -> torch.optim.SGD:
    params = list(policy.parameters()) + list(critic.parameters())
    return torch.optim.SGD(params, lr=config.learning_rate,
                           momentum=config.momentum)


def ppo_update(policy: PolicyNet, critic: CriticNet,
               optimizer: torch.optim.Optimizer, batch: Batch | None,
               config: ExperimentConfig) -> dict[str, float]:
    """Run ``ppo_passes`` gradient steps on one batch; no-op on empty batches."""
    if batch is None or len(batch) == 0:
        return {"policy_loss": 0.0, "value_loss": 0.0, "entropy": 0.0}
    stats: dict[str, float] = {}
    for _ in range(config.ppo_passes):
        optimizer.zero_grad()
        loss, stats = ppo_loss(policy, critic, batch, config)
        loss.backward()
        # Clip each network on its own so a large critic gradient cannot
        # rescale the policy gradient toward zero.
        torch.nn.utils.clip_grad_norm_(policy.parameters(),
                                       config.max_grad_norm)
        torch.nn.utils.clip_grad_norm_(critic.parameters(),
                                       config.max_grad_norm)
        optimizer.step()
    return stats

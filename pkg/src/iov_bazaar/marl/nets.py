"""Actor and centralized-critic networks (parameter-shared across agents)."""

from __future__ import annotations

import torch
import torch.nn as nn


def _mlp(in_dim: int, hidden: tuple[int, ...], out_dim: int) -> nn.Sequential:
    layers: list[nn.Module] = []
    prev = in_dim
    for width in hidden:
        layers += [nn.Linear(prev, width), nn.Tanh()]
        prev = width
    layers.append(nn.Linear(prev, out_dim))
    return nn.Sequential(*layers)


class PolicyNet(nn.Module):
    """Maps a local observation to logits over the two submarkets."""

    def __init__(self, obs_dim: int, hidden: tuple[int, ...] = (64, 64)):
        super().__init__()
        self.obs_dim = obs_dim
        self.body = _mlp(obs_dim, hidden, 2)

    def forward(self, obs: torch.Tensor) -> torch.Tensor:
        return self.body(obs)

    def distribution(self, obs: torch.Tensor) -> torch.distributions.Categorical:
        return torch.distributions.Categorical(logits=self.forward(obs))

    def action_probs(self, obs: torch.Tensor) -> torch.Tensor:
        return torch.softmax(self.forward(obs), dim=-1)


class CriticNet(nn.Module):
    """Maps the global market state to a scalar value estimate."""

    def __init__(self, state_dim: int, hidden: tuple[int, ...] = (64, 64)):
        super().__init__()
        self.state_dim = state_dim
        self.body = _mlp(state_dim, hidden, 1)

    def forward(self, state: torch.Tensor) -> torch.Tensor:
        return self.body(state).squeeze(-1)


def zero_parameters(module: nn.Module) -> None:
    """Zero all weights and biases; the policy then emits uniform probabilities."""
    with torch.no_grad():
        for p in module.parameters():
            p.zero_()

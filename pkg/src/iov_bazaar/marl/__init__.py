"""Multi-agent reinforcement learning for submarket selection."""

from .baselines import BASELINES
from .env import Episode, MarketEnv, SlotSample, discounted_returns, obs_dim, state_dim
from .nets import CriticNet, PolicyNet, zero_parameters
from .ppo import Batch, build_batch, gae_returns, make_optimizer, ppo_loss, ppo_update
from .trainer import EpochMetrics, Trainer, evaluate

__all__ = [
    "BASELINES", "Batch", "CriticNet", "Episode", "EpochMetrics", "MarketEnv",
    "PolicyNet", "SlotSample", "Trainer", "build_batch", "discounted_returns",
    "evaluate", "gae_returns", "make_optimizer", "obs_dim", "ppo_loss",
    "ppo_update", "state_dim", "zero_parameters",
]

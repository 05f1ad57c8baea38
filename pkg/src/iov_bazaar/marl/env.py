"""Multi-agent market environment: observations, global state, returns.

Each slot the current buyers are the acting agents.  A buyer observes a
normalized vector of length ``num_rsus + 3``: per-RSU trader counts, the
most recent transaction price it has gossip-learned for its attached RSU,
and its own direct and best cooperative download rates.  The centralized
critic sees a global vector of length ``4 * num_rsus``: per-RSU buyer
count, seller count, last clearing price, and queue delay estimate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import gossip, market, vehicnet
from ..config import ExperimentConfig
from ..simulation import SlotResult, SlotSimulator


def obs_dim(config: ExperimentConfig) -> int:
    return config.num_rsus + 3


def state_dim(config: ExperimentConfig) -> int:
    return 4 * config.num_rsus


@dataclass
class SlotSample:
    """One slot of experience shared by every buyer-agent in it."""

    obs: dict[int, np.ndarray]
    actions: dict[int, int]
    global_state: np.ndarray
    reward: float


class MarketEnv:
    """Episode wrapper over :class:`SlotSimulator` for the learning loop."""

    def __init__(self, config: ExperimentConfig, seed: int):
        self.config = config
        self.seed = seed
        self.sim = SlotSimulator(config, seed)
        self.max_price_seen = 0.0
        self._pending: tuple[market.MarketState, vehicnet.LinkRates] | None = None

    def reset(self) -> dict[int, np.ndarray]:
        state, rates = self.sim.begin_slot()
        self._pending = (state, rates)
        return self._observe(state, rates)

    def step(self, actions: dict[int, int]
             ) -> tuple[dict[int, np.ndarray], SlotResult, np.ndarray]:
        assert self._pending is not None, "reset must run first"
        state, _ = self._pending
        gstate = self.global_state(state)
        result = self.sim.finish_slot(actions)
        for m in result.outcome.matches:
            self.max_price_seen = max(self.max_price_seen, m.payment)
        nstate, nrates = self.sim.begin_slot()
        self._pending = (nstate, nrates)
        return self._observe(nstate, nrates), result, gstate

    def _observe(self, state: market.MarketState,
                 rates: vehicnet.LinkRates) -> dict[int, np.ndarray]:
        cfg = self.config
        counts = np.zeros(cfg.num_rsus)
        for _, rsu in state.attachment.items():
            counts[rsu] += 1
        counts /= cfg.num_vehicles
        obs = {}
        for v in state.buyer_ids():
            rsu = state.attachment[v]
            price = gossip.last_price(self.sim.tables[v], rsu)
            if price is None:
                norm_price = 0.0
            elif self.max_price_seen > 0:
                norm_price = price / self.max_price_seen
            else:
                norm_price = 1.0
            direct = rates.direct.get(v, 0.0) / cfg.direct_rate_mbps[1]
            coop = rates.best_coop(v) / cfg.coop_rate_mbps[1]
            obs[v] = np.concatenate([counts, [norm_price, direct, coop]])
        return obs

    def global_state(self, state: market.MarketState) -> np.ndarray:
        cfg = self.config
        vec = np.zeros(4 * cfg.num_rsus)
        for rsu in range(cfg.num_rsus):
            buyers = sum(1 for v in state.buyer_ids() if state.attachment[v] == rsu)
            sellers = sum(1 for v in state.seller_ids() if state.attachment[v] == rsu)
            price = self.sim.true_last_price[rsu]
            queue = vehicnet.queue_estimate(self.sim.queues[rsu])
            vec[4 * rsu:4 * rsu + 4] = (
                buyers / cfg.num_vehicles,
                sellers / cfg.num_vehicles,
                price / self.max_price_seen if self.max_price_seen > 0 else 0.0,
                min(queue, 100.0) / 100.0,
            )
        return vec


@dataclass
class Episode:
    slots: list[SlotSample] = field(default_factory=list)

    @property
    def rewards(self) -> list[float]:
        return [s.reward for s in self.slots]


def discounted_returns(rewards: list[float], gamma: float) -> list[float]:
    """G_t = r_t + gamma * G_{t+1}, computed right to left."""
    out = [0.0] * len(rewards)
    acc = 0.0
    for t in range(len(rewards) - 1, -1, -1):
        acc = rewards[t] + gamma * acc
        out[t] = acc
    return out

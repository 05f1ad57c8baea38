"""Slot-level simulation driver tying mobility, markets, and gossip together.

A slot proceeds: move vehicles, attach to RSUs, sample the trading
population and link rates, clear the hierarchical auctions given the
buyers' submarket choices, account latency and budgets, publish prices
and queue estimates, and run one gossip round.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import auction, gossip, market, vehicnet
from .config import ExperimentConfig


@dataclass
class SlotResult:
    state: market.MarketState
    rates: vehicnet.LinkRates
    outcome: auction.AuctionOutcome
    social_welfare: float
    budgets: list[float]
    budget: float
    latency: float
    reward: float
    mundane_budgets: list[float] = field(default_factory=list)


class SlotSimulator:
    """Owns topology, queues, and gossip tables; advances one slot at a time."""

    def __init__(self, config: ExperimentConfig, seed: int):
        self.config = config
        root = np.random.default_rng(seed)
        (self.rng_pop, self.rng_mob, self.rng_rates,
         self.rng_gossip) = root.spawn(4)
        self.topology = vehicnet.make_topology(config, self.rng_mob)
        self.queues = [vehicnet.RsuQueue(config.rsu_service_mbps)
                       for _ in range(config.num_rsus)]
        self.tables = {v: gossip.PriceTable() for v in range(config.num_vehicles)}
        self.true_last_price = [0.0] * config.num_rsus
        self.slot = 0
        self._seq = 0
        self._pending: tuple[market.MarketState, vehicnet.LinkRates] | None = None

    def _stamp(self) -> tuple[int, int]:
        self._seq += 1
        return (self.slot, self._seq)

    def begin_slot(self) -> tuple[market.MarketState, vehicnet.LinkRates]:
        """Advance mobility and sample the slot's population and rates."""
        self.topology = vehicnet.step_mobility(
            self.topology, self.config.slot_seconds, self.rng_mob)
        attachment = vehicnet.attach_all(self.topology)
        state = market.sample_population(self.config, self.rng_pop)
        state.attachment = attachment
        rates = vehicnet.sample_link_rates(
            self.topology, attachment, self.config, self.rng_rates)
        self._pending = (state, rates)
        return state, rates

    def finish_slot(self, actions: dict[int, int]) -> SlotResult:
        """Clear all local markets given each buyer's submarket choice."""
        assert self._pending is not None, "begin_slot must run first"
        state, rates = self._pending
        self._pending = None
        cfg = self.config
        outcome = auction.AuctionOutcome()
        mundane_budgets = [0.0] * cfg.num_rsus

        for rsu in range(cfg.num_rsus):
            buyer_pool, seller_pool = auction.build_pools(state, rsu)
            urgent = [v for v, _ in sorted(buyer_pool.entries, key=lambda e: e[0])
                      if actions.get(v, 0) == 0]
            last_price = None
            for v in urgent:
                res = auction.clear_urgent(state.buyers[v].bid, seller_pool, cfg.urgent_mode)
                if res.traded:
                    outcome.matches.append(auction.Match(
                        v, res.winner, rsu, res.payment, res.revenue, auction.URGENT))
                    seller_pool.remove(res.winner)
                    last_price = res.payment
            if self.slot % cfg.mundane_period == 0:
                mundane_entries = [(v, b) for v, b in buyer_pool.entries
                                   if actions.get(v, 0) == 1]
                mundane_pool = auction.BuyerPool(mundane_entries)
                res = auction.clear_mundane(mundane_pool, seller_pool)
                for b, s in res.pairs:
                    outcome.matches.append(auction.Match(
                        b, s, rsu, res.buyer_price, res.seller_price, auction.MUNDANE))
                    mundane_budgets[rsu] += res.buyer_price - res.seller_price
                if res.num_trades:
                    last_price = res.buyer_price
            if last_price is not None:
                self.true_last_price[rsu] = last_price
                stamp = self._stamp()
                for v, n in state.attachment.items():
                    if n == rsu:
                        gossip.record_price(self.tables[v], rsu, last_price, stamp, v)

        sw = auction.social_welfare(outcome, state)
        budgets = [auction.local_budget(outcome, n) for n in range(cfg.num_rsus)]
        budget = auction.global_budget(budgets)
        latency = vehicnet.transmission_latency(outcome, state, rates, cfg.chunk_mb)
        reward = slot_reward(sw, budget, latency, cfg.alpha_budget)

        # queue accounting: losing buyers fall back to RSU direct download
        matched = outcome.matched_buyers()
        for v, profile in state.buyers.items():
            if v not in matched:
                megabits = profile.chunks_requested * cfg.chunk_mb * 8.0
                self.queues[state.attachment[v]].enqueue(v, megabits)
        for rsu, q in enumerate(self.queues):
            q.serve(cfg.slot_seconds)
            stamp = self._stamp()
            estimate = vehicnet.queue_estimate(q)
            for v, n in state.attachment.items():
                if n == rsu:
                    gossip.record_queue(self.tables[v], rsu, estimate, stamp, v)

        graph = gossip.GossipGraph.from_positions(
            self.topology.vehicle_xy, cfg.v2v_range_m)
        self.tables = gossip.gossip_round(graph, self.tables, self.rng_gossip)

        self.slot += 1
        return SlotResult(state, rates, outcome, sw, budgets, budget, latency,
                          reward, mundane_budgets)


def slot_reward(sw: float, budget: float, latency: float, alpha: float) -> float:
    """Team reward: social welfare minus scaled squared budget minus latency."""
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    return sw - alpha * budget * budget - latency

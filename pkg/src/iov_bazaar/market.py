"""Trader domain types, valuation functions, and population sampling.

Buyers value content with diminishing marginal returns, ln(1 + c/10) for a
chunk count c; sellers value their transmit power linearly, kappa * p.
Under truthful play a trader's bid/ask equals its valuation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .config import ExperimentConfig


class TraderRole(Enum):
    BUYER = "buyer"
    SELLER = "seller"


@dataclass(frozen=True)
class BuyerProfile:
    chunks_requested: int
    valuation: float
    bid: float


@dataclass(frozen=True)
class SellerProfile:
    transmit_power_mw: float
    valuation: float
    ask: float


@dataclass(frozen=True)
class TradeResult:
    matched: bool
    payment: float = 0.0   # buyer side
    revenue: float = 0.0   # seller side


@dataclass
class MarketState:
    """Per-slot snapshot of the trading population.

    ``roles[v]``, ``buyers[v]`` / ``sellers[v]`` and ``attachment[v]``
    are indexed by vehicle id; exactly one of buyers/sellers holds an
    entry for each vehicle.
    """

    num_vehicles: int
    roles: list[TraderRole] = field(default_factory=list)
    buyers: dict[int, BuyerProfile] = field(default_factory=dict)
    sellers: dict[int, SellerProfile] = field(default_factory=dict)
    attachment: dict[int, int] = field(default_factory=dict)

    def buyer_ids(self) -> list[int]:
        return sorted(self.buyers)

    def seller_ids(self) -> list[int]:
        return sorted(self.sellers)


def buyer_valuation(chunks: int) -> float:
    """Value of receiving ``chunks`` content chunks, ln(1 + chunks/10)."""
    if chunks < 0:
        raise ValueError(f"chunks must be >= 0, got {chunks}")
    return math.log1p(chunks / 10.0)


def seller_valuation(power_mw: float, kappa: float) -> float:
    """Cost of serving at ``power_mw`` milliwatts, linear in power."""
    if power_mw < 0:
        raise ValueError(f"power_mw must be >= 0, got {power_mw}")
    if kappa <= 0:
        raise ValueError(f"kappa must be > 0, got {kappa}")
    return kappa * power_mw


def buyer_utility(valuation: float, payment: float, matched: bool) -> float:
    return valuation - payment if matched else 0.0


def seller_utility(valuation: float, revenue: float, matched: bool) -> float:
    return revenue - valuation if matched else 0.0


def sample_population(config: ExperimentConfig, rng: np.random.Generator) -> MarketState:
    """Draw one slot's trading population.

    Each vehicle is a buyer with probability ``buyer_probability``, else a
    seller.  Buyers request 1..max_chunks chunks; sellers offer transmit
    power U[0, max_power_mw].  Bids and asks are truthful.
    """
    state = MarketState(num_vehicles=config.num_vehicles)
    for v in range(config.num_vehicles):
        if rng.random() >= 1.0 - config.buyer_probability:
            chunks = int(rng.integers(1, config.max_chunks + 1))
            value = buyer_valuation(chunks)
            state.roles.append(TraderRole.BUYER)
            state.buyers[v] = BuyerProfile(chunks, value, bid=value)
        else:
            power = float(rng.uniform(0.0, config.max_power_mw))
            value = seller_valuation(power, config.kappa)
            state.roles.append(TraderRole.SELLER)
            state.sellers[v] = SellerProfile(power, value, ask=value)
    return state

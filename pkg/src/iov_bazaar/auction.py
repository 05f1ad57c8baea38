"""Hierarchical clearing: urgent second-price and mundane McAfee submarkets.

Each RSU runs one local market per slot.  Urgent requests clear one by one
against the seller pool; the remaining traders clear double-sided under
McAfee's trade-reduction rule.  All clearing functions are pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .market import MarketState, buyer_utility, seller_utility

URGENT = "urgent"
MUNDANE = "mundane"


@dataclass
class SellerPool:
    """Asks sorted ascending, ties broken by ascending vehicle id."""

    entries: list[tuple[int, float]] = field(default_factory=list)

    def asks(self) -> list[float]:
        return [a for _, a in self.entries]

    def remove(self, vehicle: int) -> None:
        self.entries = [(v, a) for v, a in self.entries if v != vehicle]

    def __len__(self) -> int:
        return len(self.entries)


@dataclass
class BuyerPool:
    """Bids sorted descending, ties broken by ascending vehicle id."""

    entries: list[tuple[int, float]] = field(default_factory=list)

    def bids(self) -> list[float]:
        return [b for _, b in self.entries]

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class Match:
    buyer: int
    seller: int
    rsu: int
    payment: float
    revenue: float
    submarket: str


@dataclass
class AuctionOutcome:
    """Slot-level allocation and pricing across all RSUs.

    The supply matrix X and demand matrix Y coincide for executed trades;
    both are kept as sparse (buyer, seller) pair sets so the constraints
    (one sale per seller, X <= Y) stay checkable.
    """

    matches: list[Match] = field(default_factory=list)

    @property
    def supply_pairs(self) -> set[tuple[int, int]]:
        return {(m.buyer, m.seller) for m in self.matches}

    @property
    def demand_pairs(self) -> set[tuple[int, int]]:
        return {(m.buyer, m.seller) for m in self.matches}

    def matched_buyers(self) -> set[int]:
        return {m.buyer for m in self.matches}

    def matched_sellers(self) -> set[int]:
        return {m.seller for m in self.matches}


def build_pools(state: MarketState, rsu: int,
                exclude_buyers: set[int] | None = None,
                exclude_sellers: set[int] | None = None) -> tuple[BuyerPool, SellerPool]:
    """Pools of the currently unmatched traders attached to ``rsu``."""
    exclude_buyers = exclude_buyers or set()
    exclude_sellers = exclude_sellers or set()
    buyers = [(v, p.bid) for v, p in state.buyers.items()
              if state.attachment.get(v) == rsu and v not in exclude_buyers]
    sellers = [(v, p.ask) for v, p in state.sellers.items()
               if state.attachment.get(v) == rsu and v not in exclude_sellers]
    buyers.sort(key=lambda e: (-e[1], e[0]))
    sellers.sort(key=lambda e: (e[1], e[0]))
    return BuyerPool(buyers), SellerPool(sellers)


@dataclass(frozen=True)
class UrgentResult:
    traded: bool
    winner: int | None = None
    payment: float = 0.0
    revenue: float = 0.0
    reason: str = ""


def clear_urgent(buyer_bid: float, pool: SellerPool, mode: str) -> UrgentResult:
    """Clear one urgent request against the seller pool.

    ``paper-literal``: the highest-ask seller wins, the buyer pays the
    highest ask among the remaining sellers, the seller receives the
    highest ask in the full pool.  ``lowest-ask``: the cheapest seller
    wins and both sides settle at the second-lowest ask.  Either way the
    trade executes only if the buyer's bid covers the payment (reserve
    guard); otherwise the buyer falls back to direct RSU download.
    """
    if mode not in ("paper-literal", "lowest-ask"):
        raise ValueError(f"unknown urgent mode {mode!r}")
    if len(pool) < 2:
        return UrgentResult(False, reason="no-runner-up")
    if mode == "paper-literal":
        # entries sorted ascending: last is the max ask, ties keep the
        # smallest vehicle id among equals
        max_ask = pool.entries[-1][1]
        winner = min(v for v, a in pool.entries if a == max_ask)
        payment = max(a for v, a in pool.entries if v != winner)
        revenue = max_ask
    else:
        min_ask = pool.entries[0][1]
        winner = min(v for v, a in pool.entries if a == min_ask)
        payment = min(a for v, a in pool.entries if v != winner)
        revenue = payment
    if buyer_bid < payment:
        return UrgentResult(False, reason="reserve-guard")
    return UrgentResult(True, winner=winner, payment=payment, revenue=revenue)


@dataclass(frozen=True)
class MundaneResult:
    pairs: list[tuple[int, int]]
    buyer_price: float = 0.0
    seller_price: float = 0.0
    reduced: bool = False  # True when the trade-reduction branch fired

    @property
    def num_trades(self) -> int:
        return len(self.pairs)


def clear_mundane(buyer_pool: BuyerPool, seller_pool: SellerPool) -> MundaneResult:
    """McAfee double-auction clearing.

    K is the breakeven index (largest k with b_k >= s_k).  When the
    average price p = (b_{K+1} + s_{K+1}) / 2 is consistent (exactly K
    bids >= p and K asks <= p), the first K pairs trade at p on both
    sides.  Otherwise the first K-1 pairs trade with buyers paying b_K
    and sellers receiving s_K.
    """
    bids = buyer_pool.bids()
    asks = seller_pool.asks()
    limit = min(len(bids), len(asks))
    k = 0
    while k < limit and bids[k] >= asks[k]:
        k += 1
    if k == 0:
        return MundaneResult([])
    if k < len(bids) and k < len(asks):
        price = (bids[k] + asks[k]) / 2.0
        nb = sum(1 for b in bids if b >= price)
        ns = sum(1 for a in asks if a <= price)
        if nb == k and ns == k:
            pairs = [(buyer_pool.entries[i][0], seller_pool.entries[i][0]) for i in range(k)]
            return MundaneResult(pairs, buyer_price=price, seller_price=price)
    if k == 1:
        return MundaneResult([], reduced=True)
    pairs = [(buyer_pool.entries[i][0], seller_pool.entries[i][0]) for i in range(k - 1)]
    return MundaneResult(pairs, buyer_price=bids[k - 1], seller_price=asks[k - 1], reduced=True)


def social_welfare(outcome: AuctionOutcome, state: MarketState) -> float:
    """Sum of the valuations of all matched buyers and sellers."""
    total = 0.0
    for m in outcome.matches:
        total += state.buyers[m.buyer].valuation
        total += state.sellers[m.seller].valuation
    return total


def local_budget(outcome: AuctionOutcome, rsu: int) -> float:
    """Buyer payments minus seller revenues at one RSU."""
    total = 0.0
    for m in outcome.matches:
        if m.rsu == rsu:
            total += m.payment - m.revenue
    return total


def global_budget(per_rsu_budgets: list[float]) -> float:
    return float(sum(per_rsu_budgets))


def trade_utilities(outcome: AuctionOutcome, state: MarketState) -> list[tuple[float, float]]:
    """Per-match (buyer utility, seller utility) under truthful play."""
    out = []
    for m in outcome.matches:
        bu = buyer_utility(state.buyers[m.buyer].valuation, m.payment, True)
        su = seller_utility(state.sellers[m.seller].valuation, m.revenue, True)
        out.append((bu, su))
    return out

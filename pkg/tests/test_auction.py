import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from iov_bazaar import auction, market
from iov_bazaar.auction import BuyerPool, SellerPool, clear_mundane, clear_urgent
from iov_bazaar.config import ExperimentConfig


def mcafee_oracle(bids, asks):
    """Independent straight-line restatement of the trade-reduction rule.

    Returns (num_trades, buyer_price, seller_price).
    """
    b = sorted(bids, reverse=True)
    s = sorted(asks)
    breakeven = 0
    for i in range(min(len(b), len(s))):
        if b[i] >= s[i]:
            breakeven = i + 1
        else:
            break
    if breakeven == 0:
        return 0, None, None
    if breakeven < len(b) and breakeven < len(s):
        p = (b[breakeven] + s[breakeven]) / 2.0
        if (sum(1 for x in b if x >= p) == breakeven
                and sum(1 for x in s if x <= p) == breakeven):
            return breakeven, p, p
    if breakeven == 1:
        return 0, None, None
    return breakeven - 1, b[breakeven - 1], s[breakeven - 1]


def pools(bids, asks):
    bp = BuyerPool(sorted(enumerate(bids), key=lambda e: (-e[1], e[0])))
    sp = SellerPool(sorted(((100 + i, a) for i, a in enumerate(asks)),
                           key=lambda e: (e[1], e[0])))
    return bp, sp


class TestMundaneHandTraces:
    def test_case1_average_price(self):
        res = clear_mundane(*pools([9, 7, 5, 3], [2, 4, 6, 8]))
        assert res.num_trades == 2
        assert res.buyer_price == res.seller_price == pytest.approx(5.5)
        assert not res.reduced

    def test_trade_reduction(self):
        res = clear_mundane(*pools([9, 8, 7], [2, 3, 4]))
        assert res.num_trades == 2
        assert res.reduced
        assert res.buyer_price == 7
        assert res.seller_price == 4

    def test_no_overlap_no_trade(self):
        res = clear_mundane(*pools([1, 2], [5, 6]))
        assert res.num_trades == 0

    def test_breakeven_one_reduces_to_zero(self):
        # single crossing pair but inconsistent average price
        res = clear_mundane(*pools([5], [5]))
        assert res.num_trades == 0
        assert res.reduced

    def test_assortative_pairing(self):
        res = clear_mundane(*pools([9, 7, 5, 3], [2, 4, 6, 8]))
        assert res.pairs == [(0, 100), (1, 101)]


class TestMundaneOracle:
    @given(st.lists(st.integers(0, 9), max_size=6),
           st.lists(st.integers(0, 9), max_size=6))
    @settings(max_examples=400)
    def test_matches_oracle_integers(self, bids, asks):
        n, bp, sp = mcafee_oracle(bids, asks)
        res = clear_mundane(*pools(bids, asks))
        assert res.num_trades == n
        if n:
            assert res.buyer_price == pytest.approx(bp)
            assert res.seller_price == pytest.approx(sp)

    @given(st.lists(st.floats(0, 10, allow_nan=False), max_size=8),
           st.lists(st.floats(0, 10, allow_nan=False), max_size=8))
    @settings(max_examples=400)
    def test_matches_oracle_floats(self, bids, asks):
        n, bp, sp = mcafee_oracle(bids, asks)
        res = clear_mundane(*pools(bids, asks))
        assert res.num_trades == n
        if n:
            assert res.buyer_price == pytest.approx(bp)
            assert res.seller_price == pytest.approx(sp)

    @given(st.lists(st.floats(0, 10, allow_nan=False), max_size=8),
           st.lists(st.floats(0, 10, allow_nan=False), max_size=8))
    @settings(max_examples=300)
    def test_budget_and_ir(self, bids, asks):
        bp_pool, sp_pool = pools(bids, asks)
        res = clear_mundane(bp_pool, sp_pool)
        if not res.num_trades:
            return
        # weak budget balance: auctioneer never subsidizes
        assert res.buyer_price >= res.seller_price - 1e-12
        bid_of = dict(bp_pool.entries)
        ask_of = dict(sp_pool.entries)
        for b, s in res.pairs:
            assert bid_of[b] >= res.buyer_price - 1e-12   # buyer IR
            assert ask_of[s] <= res.seller_price + 1e-12  # seller IR


class TestUrgent:
    def setup_method(self):
        self.pool = SellerPool([(1, 2.0), (2, 5.0), (3, 7.0)])

    def test_paper_literal_trace(self):
        res = clear_urgent(6.0, self.pool, "paper-literal")
        assert res.traded
        assert res.winner == 3          # highest ask wins
        assert res.payment == 5.0       # max ask among the others
        assert res.revenue == 7.0       # max ask in the full pool

    def test_paper_literal_reserve_guard(self):
        res = clear_urgent(4.9, self.pool, "paper-literal")
        assert not res.traded
        assert res.reason == "reserve-guard"

    def test_lowest_ask_trace(self):
        res = clear_urgent(6.0, self.pool, "lowest-ask")
        assert res.traded
        assert res.winner == 1          # cheapest seller wins
        assert res.payment == res.revenue == 5.0

    def test_needs_runner_up(self):
        res = clear_urgent(9.0, SellerPool([(1, 2.0)]), "lowest-ask")
        assert not res.traded
        assert res.reason == "no-runner-up"

    def test_unknown_mode_rejected(self):
        with pytest.raises(ValueError):
            clear_urgent(1.0, self.pool, "nonsense")

    @given(st.lists(st.floats(0, 10, allow_nan=False), min_size=2, max_size=8),
           st.floats(0, 10, allow_nan=False))
    @settings(max_examples=300)
    def test_ir_both_modes(self, asks, bid):
        pool = SellerPool(sorted(enumerate(asks), key=lambda e: (e[1], e[0])))
        for mode in ("paper-literal", "lowest-ask"):
            res = clear_urgent(bid, pool, mode)
            if res.traded:
                assert bid >= res.payment                       # buyer IR
                assert res.revenue >= dict(pool.entries)[res.winner]  # seller IR

    @given(st.lists(st.floats(0, 10, allow_nan=False), min_size=2, max_size=8),
           st.floats(0, 10, allow_nan=False))
    @settings(max_examples=200)
    def test_lowest_ask_budget_balanced(self, asks, bid):
        pool = SellerPool(sorted(enumerate(asks), key=lambda e: (e[1], e[0])))
        res = clear_urgent(bid, pool, "lowest-ask")
        if res.traded:
            assert res.payment == res.revenue


class TestOutcomeAccounting:
    def make_state(self):
        state = market.MarketState(num_vehicles=4)
        state.buyers[0] = market.BuyerProfile(5, 0.5, 0.5)
        state.buyers[1] = market.BuyerProfile(2, 0.3, 0.3)
        state.sellers[2] = market.SellerProfile(3.0, 0.21, 0.21)
        state.sellers[3] = market.SellerProfile(1.0, 0.07, 0.07)
        state.attachment = {0: 0, 1: 0, 2: 0, 3: 1}
        return state

    def test_social_welfare_sums_valuations(self):
        state = self.make_state()
        out = auction.AuctionOutcome([
            auction.Match(0, 2, 0, 0.4, 0.3, auction.MUNDANE)])
        assert auction.social_welfare(out, state) == pytest.approx(0.5 + 0.21)

    def test_budget_is_payment_minus_revenue_per_rsu(self):
        out = auction.AuctionOutcome([
            auction.Match(0, 2, 0, 0.4, 0.3, auction.MUNDANE),
            auction.Match(1, 3, 1, 0.2, 0.25, auction.URGENT)])
        assert auction.local_budget(out, 0) == pytest.approx(0.1)
        assert auction.local_budget(out, 1) == pytest.approx(-0.05)
        assert auction.global_budget([0.1, -0.05]) == pytest.approx(0.05)

    def test_build_pools_sorted_and_filtered(self, rng):
        cfg = ExperimentConfig(num_vehicles=30)
        state = market.sample_population(cfg, rng)
        state.attachment = {v: v % 4 for v in range(30)}
        bp, sp = auction.build_pools(state, 2)
        assert bp.bids() == sorted(bp.bids(), reverse=True)
        assert sp.asks() == sorted(sp.asks())
        assert all(state.attachment[v] == 2 for v, _ in bp.entries + sp.entries)

    def test_trade_utilities_truthful_nonnegative(self, rng):
        state = self.make_state()
        bp, sp = auction.build_pools(state, 0)
        res = clear_mundane(bp, sp)
        out = auction.AuctionOutcome([
            auction.Match(b, s, 0, res.buyer_price, res.seller_price,
                          auction.MUNDANE) for b, s in res.pairs])
        for bu, su in auction.trade_utilities(out, state):
            assert bu >= -1e-12
            assert su >= -1e-12

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from iov_bazaar import market
from iov_bazaar.config import ExperimentConfig


class TestValuations:
    def test_buyer_valuation_log_form(self):
        for c in range(1, 11):
            assert market.buyer_valuation(c) == pytest.approx(math.log(1 + c / 10))

    def test_buyer_valuation_known_values(self):
        assert market.buyer_valuation(0) == 0.0
        assert market.buyer_valuation(10) == pytest.approx(math.log(2))

    def test_buyer_valuation_rejects_negative(self):
        with pytest.raises(ValueError):
            market.buyer_valuation(-1)

    def test_seller_valuation_linear(self):
        assert market.seller_valuation(10.0, 0.07) == pytest.approx(0.7)
        assert market.seller_valuation(0.0, 0.07) == 0.0

    def test_seller_valuation_rejects_bad_args(self):
        with pytest.raises(ValueError):
            market.seller_valuation(-1.0, 0.07)
        with pytest.raises(ValueError):
            market.seller_valuation(1.0, 0.0)

    @given(st.integers(min_value=1, max_value=1000))
    def test_buyer_valuation_diminishing_returns(self, c):
        first = market.buyer_valuation(c) - market.buyer_valuation(c - 1)
        second = market.buyer_valuation(c + 1) - market.buyer_valuation(c)
        assert second < first

    @given(st.floats(0.0, 100.0), st.floats(0.0, 100.0))
    def test_buyer_utility_zero_when_unmatched(self, v, p):
        assert market.buyer_utility(v, p, False) == 0.0
        assert market.seller_utility(v, p, False) == 0.0


class TestSamplePopulation:
    def test_partition_is_total(self, rng):
        cfg = ExperimentConfig(num_vehicles=50)
        state = market.sample_population(cfg, rng)
        assert set(state.buyers) | set(state.sellers) == set(range(50))
        assert not set(state.buyers) & set(state.sellers)
        assert len(state.roles) == 50

    def test_truthful_bids_and_asks(self, rng):
        cfg = ExperimentConfig(num_vehicles=100)
        state = market.sample_population(cfg, rng)
        for p in state.buyers.values():
            assert p.bid == p.valuation
            assert 1 <= p.chunks_requested <= cfg.max_chunks
        for p in state.sellers.values():
            assert p.ask == p.valuation
            assert 0.0 <= p.transmit_power_mw <= cfg.max_power_mw

    def test_buyer_probability_extremes(self, rng):
        all_buyers = market.sample_population(
            ExperimentConfig(num_vehicles=20, buyer_probability=1.0), rng)
        assert len(all_buyers.buyers) == 20
        all_sellers = market.sample_population(
            ExperimentConfig(num_vehicles=20, buyer_probability=0.0), rng)
        assert len(all_sellers.sellers) == 20

    def test_seeded_reproducibility(self):
        cfg = ExperimentConfig(num_vehicles=30)
        a = market.sample_population(cfg, np.random.default_rng(9))
        b = market.sample_population(cfg, np.random.default_rng(9))
        assert a.buyers == b.buyers
        assert a.sellers == b.sellers

"""Non-learning submarket policies used as experiment baselines.

Action 0 routes a buyer into the urgent (second-price) submarket, action 1
into the mundane (double-auction) submarket:

  * ``random``          — each buyer flips a fair coin every slot
  * ``second-price``    — every buyer always goes urgent
  * ``double-auction``  — every buyer always goes mundane
"""

from __future__ import annotations

import numpy as np


def random_policy(buyers: list[int], rng: np.random.Generator) -> dict[int, int]:
    return {v: int(rng.integers(0, 2)) for v in sorted(buyers)}


def second_price_policy(buyers: list[int],
                        rng: np.random.Generator) -> dict[int, int]:
    return {v: 0 for v in buyers}


def double_auction_policy(buyers: list[int],
                          rng: np.random.Generator) -> dict[int, int]:
    return {v: 1 for v in buyers}


BASELINES = {
    "random": random_policy,
    "second-price": second_price_policy,
    "double-auction": double_auction_policy,
}

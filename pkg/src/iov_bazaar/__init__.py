"""Decentralized IoV data-sharing market simulator and mechanism library.

Subpackages:

- ``market``: trader domain types, valuations, utilities, population sampling
- ``auction``: hierarchical clearing (urgent second-price, mundane McAfee)
- ``vehicnet``: mobility, RSU attachment, link rates, queues, NDN directory
- ``gossip``: push-pull price-table replication
- ``marl``: POMDP environment, MAPPO learner, baselines
- ``kpabe``: time-sensitive KP-ABE with a symbolic pairing backend
- ``experiment``: seeded runs, metrics, figure summaries
"""

__version__ = "0.1.0"

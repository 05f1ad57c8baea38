"""Random push-pull gossip replicating the transaction price table.

Tables are last-writer-wins maps keyed by string; merge order is decided
by (logical timestamp, origin id), which makes merge a state-based CRDT:
commutative, associative, and idempotent.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class TableEntry:
    value: float
    timestamp: tuple[int, int]  # (slot, sequence) assigned by the writer
    origin: int

    def dominates(self, other: "TableEntry") -> bool:
        # (timestamp, origin) identifies a write; the value tail makes the
        # order total so merging stays commutative on arbitrary entries
        return ((self.timestamp, self.origin, self.value)
                > (other.timestamp, other.origin, other.value))


@dataclass
class PriceTable:
    entries: dict[str, TableEntry] = field(default_factory=dict)

    def put(self, key: str, value: float, timestamp: tuple[int, int], origin: int) -> None:
        candidate = TableEntry(value, timestamp, origin)
        cur = self.entries.get(key)
        if cur is None or candidate.dominates(cur):
            self.entries[key] = candidate

    def get(self, key: str) -> float | None:
        e = self.entries.get(key)
        return e.value if e is not None else None

    def copy(self) -> "PriceTable":
        return PriceTable(dict(self.entries))

    def serialize(self) -> str:
        payload = {
            k: {"value": e.value, "timestamp": list(e.timestamp), "origin": e.origin}
            for k, e in self.entries.items()
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def merge_tables(a: PriceTable, b: PriceTable) -> PriceTable:
    """Per-key last-writer-wins merge; pure, symmetric in its arguments."""
    out = PriceTable(dict(a.entries))
    for key, entry in b.entries.items():
        cur = out.entries.get(key)
        if cur is None or entry.dominates(cur):
            out.entries[key] = entry
    return out


@dataclass
class GossipGraph:
    """Undirected adjacency over vehicles, rebuilt each slot."""

    neighbors: dict[int, list[int]]

    @classmethod
    def from_positions(cls, positions: np.ndarray, range_m: float) -> "GossipGraph":
        n = len(positions)
        neighbors: dict[int, list[int]] = {v: [] for v in range(n)}
        if n:
            pos = np.asarray(positions, dtype=float)
            diff = pos[:, None, :] - pos[None, :, :]
            within = (diff * diff).sum(axis=2) <= range_m * range_m
            for a, b in zip(*np.nonzero(np.triu(within, k=1))):
                neighbors[int(a)].append(int(b))
                neighbors[int(b)].append(int(a))
        return cls(neighbors)


def gossip_round(graph: GossipGraph, tables: dict[int, PriceTable],
                 rng: np.random.Generator) -> dict[int, PriceTable]:
    """One synchronous round: each node push-pull merges with one random neighbor.

    All exchanges read the pre-round snapshot, so the round is a pure
    transformation of the table map.  Isolated nodes are no-ops.
    """
    result = {v: t.copy() for v, t in tables.items()}
    for v in sorted(tables):
        peers = graph.neighbors.get(v, [])
        if not peers:
            continue
        peer = peers[int(rng.integers(0, len(peers)))]
        merged = merge_tables(tables[v], tables[peer])
        result[v] = merge_tables(result[v], merged)
        result[peer] = merge_tables(result[peer], merged)
    return result


def last_price(table: PriceTable, rsu: int) -> float | None:
    """Most recent transaction price recorded for one RSU market."""
    return table.get(f"price/{rsu}")


def record_price(table: PriceTable, rsu: int, price: float,
                 timestamp: tuple[int, int], origin: int) -> None:
    table.put(f"price/{rsu}", price, timestamp, origin)


def record_queue(table: PriceTable, rsu: int, estimate_s: float,
                 timestamp: tuple[int, int], origin: int) -> None:
    table.put(f"queue/{rsu}", estimate_s, timestamp, origin)

"""Mobility, RSU attachment, link rates, queues, and the NDN-style directory.

The arena is a square tiled by RSUs with overlapping circular coverage.
Vehicles move with a reflecting random-heading model; link rates are
sampled uniformly per slot within configured bounds.  The content
directory is canonical JSON signed with Ed25519.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np
from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives.asymmetric.ed25519 import (
    Ed25519PrivateKey,
    Ed25519PublicKey,
)

from .config import ExperimentConfig


class NotInDirectory(KeyError):
    pass


@dataclass
class Topology:
    arena_m: float
    rsu_xy: np.ndarray          # (N, 2)
    coverage_m: float
    vehicle_xy: np.ndarray      # (V, 2)
    heading: np.ndarray         # (V,) radians
    speed: np.ndarray           # (V,) m/s

    @property
    def num_rsus(self) -> int:
        return len(self.rsu_xy)

    @property
    def num_vehicles(self) -> int:
        return len(self.vehicle_xy)


def default_rsu_positions(arena_m: float, n: int) -> np.ndarray:
    """Grid of RSU positions tiling the arena (4 -> quarter centers)."""
    side = max(1, int(math.isqrt(n)))
    while side * side < n:
        side += 1
    step = arena_m / side
    pts = []
    for i in range(side):
        for j in range(side):
            if len(pts) < n:
                pts.append((step * (j + 0.5), step * (i + 0.5)))
    return np.array(pts, dtype=float)


def make_topology(config: ExperimentConfig, rng: np.random.Generator) -> Topology:
    rsu_xy = default_rsu_positions(config.arena_m, config.num_rsus)
    v = config.num_vehicles
    xy = rng.uniform(0.0, config.arena_m, size=(v, 2))
    heading = rng.uniform(0.0, 2.0 * math.pi, size=v)
    speed = np.clip(rng.normal(config.mean_speed_mps, config.speed_std_mps, size=v), 0.0, None)
    return Topology(config.arena_m, rsu_xy, config.rsu_coverage_m, xy, heading, speed)


def step_mobility(topo: Topology, dt: float, rng: np.random.Generator) -> Topology:
    """Advance every vehicle along its heading, reflecting at arena walls."""
    if dt < 0:
        raise ValueError("dt must be >= 0")
    if dt == 0:
        return topo
    xy = topo.vehicle_xy.copy()
    heading = topo.heading.copy()
    dx = np.cos(heading) * topo.speed * dt
    dy = np.sin(heading) * topo.speed * dt
    for axis, d in ((0, dx), (1, dy)):
        pos = xy[:, axis] + d
        # reflect across [0, arena]
        over = pos > topo.arena_m
        under = pos < 0.0
        pos[over] = 2.0 * topo.arena_m - pos[over]
        pos[under] = -pos[under]
        xy[:, axis] = np.clip(pos, 0.0, topo.arena_m)
        if axis == 0:
            heading[over | under] = math.pi - heading[over | under]
        else:
            heading[over | under] = -heading[over | under]
    return Topology(topo.arena_m, topo.rsu_xy, topo.coverage_m, xy, heading, topo.speed)


def attach_rsu(topo: Topology, vehicle: int) -> int:
    """Nearest covering RSU, ties broken by ascending RSU id."""
    d = np.linalg.norm(topo.rsu_xy - topo.vehicle_xy[vehicle], axis=1)
    candidates = np.flatnonzero(d <= topo.coverage_m + 1e-9)
    if len(candidates) == 0:
        # coverage invariant should preclude this; fall back to nearest
        return int(np.argmin(d))
    best = candidates[np.argmin(d[candidates])]
    # ascending-id tie break among equidistant covering RSUs
    tied = candidates[np.isclose(d[candidates], d[best])]
    return int(tied.min())


def attach_all(topo: Topology) -> dict[int, int]:
    """Vectorized ``attach_rsu`` over every vehicle."""
    diff = topo.vehicle_xy[:, None, :] - topo.rsu_xy[None, :, :]
    d = np.sqrt((diff * diff).sum(axis=2))
    covered = d <= topo.coverage_m + 1e-9
    best = np.where(covered, d, np.inf).min(axis=1)
    any_covered = covered.any(axis=1)
    # ascending-id tie break among (near-)equidistant covering RSUs
    tied = covered & (d <= (best + 1e-8 + 1e-5 * best)[:, None])
    choice = np.where(any_covered, tied.argmax(axis=1), d.argmin(axis=1))
    return {v: int(choice[v]) for v in range(topo.num_vehicles)}


@dataclass
class LinkRates:
    """Per-slot rate samples in Mb/s.

    ``direct[v]`` is the vehicle's rate to its attached RSU;
    ``coop[(seller, buyer)]`` exists for V2V pairs within range.
    """

    direct: dict[int, float]
    coop: dict[tuple[int, int], float]

    def best_coop(self, buyer: int) -> float:
        rates = [r for (s, b), r in self.coop.items() if b == buyer]
        return max(rates) if rates else 0.0


def sample_link_rates(topo: Topology, attachment: dict[int, int],
                      config: ExperimentConfig, rng: np.random.Generator) -> LinkRates:
    """Per-slot uniform rate draws.

    Cooperative rates exist for every ordered pair attached to the same
    RSU, so any trade the auction produces has a defined link.
    """
    lo_d, hi_d = config.direct_rate_mbps
    lo_c, hi_c = config.coop_rate_mbps
    n = topo.num_vehicles
    direct_draws = rng.uniform(lo_d, hi_d, size=n)
    direct = {v: float(direct_draws[v]) for v in range(n)}
    att = np.array([attachment.get(v, -1) for v in range(n)])
    same = np.triu(att[:, None] == att[None, :], k=1)
    pairs_a, pairs_b = np.nonzero(same)
    draws = rng.uniform(lo_c, hi_c, size=len(pairs_a))
    coop: dict[tuple[int, int], float] = {}
    for a, b, r in zip(pairs_a, pairs_b, draws):
        coop[(int(a), int(b))] = float(r)
        coop[(int(b), int(a))] = float(r)
    return LinkRates(direct, coop)


def transmission_latency(outcome, state, rates: LinkRates, chunk_mb: float) -> float:
    """Total slot latency in seconds.

    Losing buyers download c_v chunks from the RSU at their direct rate;
    winning buyers receive them from the matched seller at the
    cooperative V2V rate.
    """
    seller_of = {m.buyer: m.seller for m in outcome.matches}
    total = 0.0
    for v, profile in state.buyers.items():
        megabits = profile.chunks_requested * chunk_mb * 8.0
        if v in seller_of:
            rate = rates.coop.get((seller_of[v], v), 0.0)
        else:
            rate = rates.direct.get(v, 0.0)
        if rate <= 0.0:
            raise ValueError(f"missing or non-positive rate for buyer {v}")
        total += megabits / rate
    return total


@dataclass
class RsuQueue:
    """FIFO of pending direct-download jobs at one RSU."""

    service_mbps: float
    jobs: list[tuple[int, float]] = field(default_factory=list)  # (vehicle, megabits)

    def enqueue(self, vehicle: int, megabits: float) -> None:
        self.jobs.append((vehicle, megabits))

    def serve(self, seconds: float) -> None:
        budget = self.service_mbps * seconds
        while self.jobs and budget > 0.0:
            vehicle, megabits = self.jobs[0]
            if megabits <= budget:
                budget -= megabits
                self.jobs.pop(0)
            else:
                self.jobs[0] = (vehicle, megabits - budget)
                budget = 0.0

    @property
    def backlog_megabits(self) -> float:
        return sum(mb for _, mb in self.jobs)


def queue_estimate(queue: RsuQueue) -> float:
    """Backlog drain time in seconds."""
    return queue.backlog_megabits / queue.service_mbps


# --- NDN-style content directory -------------------------------------------

@dataclass
class DirectoryEntry:
    name: str
    content_hash: str
    size: int
    last_modified: int
    content_class: str = "public"
    popularity: int = 0


@dataclass
class ContentDirectory:
    entries: dict[str, DirectoryEntry] = field(default_factory=dict)

    def add(self, name: str, content: bytes, last_modified: int = 0,
            content_class: str = "public") -> DirectoryEntry:
        entry = DirectoryEntry(
            name=name,
            content_hash=hashlib.sha256(content).hexdigest(),
            size=len(content),
            last_modified=last_modified,
            content_class=content_class,
        )
        self.entries[name] = entry
        return entry

    def serialize(self) -> bytes:
        payload = {
            name: {
                "hash": e.content_hash,
                "size": e.size,
                "last_modified": e.last_modified,
                "content_class": e.content_class,
                "popularity": e.popularity,
            }
            for name, e in self.entries.items()
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()

    def sign(self, key: Ed25519PrivateKey) -> bytes:
        return key.sign(self.serialize())

    def verify(self, signature: bytes, public_key: Ed25519PublicKey) -> bool:
        try:
            public_key.verify(signature, self.serialize())
            return True
        except InvalidSignature:
            return False


class PopularityCache:
    """LFU cache keyed by content name, backed by the directory counters."""

    def __init__(self, directory: ContentDirectory, capacity: int):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self.directory = directory
        self.capacity = capacity
        self.stored: dict[str, bytes] = {}

    def _entry(self, name: str) -> DirectoryEntry:
        try:
            return self.directory.entries[name]
        except KeyError:
            raise NotInDirectory(name) from None

    def lookup(self, name: str) -> bytes | None:
        entry = self._entry(name)
        entry.popularity += 1
        return self.stored.get(name)

    def admit(self, name: str, content: bytes) -> None:
        entry = self._entry(name)
        if name in self.stored:
            self.stored[name] = content
            return
        if len(self.stored) >= self.capacity:
            victim = min(self.stored,
                         key=lambda n: (self.directory.entries[n].popularity, n))
            if self.directory.entries[victim].popularity >= entry.popularity:
                return  # not popular enough to displace anything
            del self.stored[victim]
        self.stored[name] = content


@dataclass(frozen=True)
class Chunk:
    name: str
    index: int
    data: bytes
    digest: str

    def verify(self) -> bool:
        return hashlib.sha256(self.data).hexdigest() == self.digest


def chunk_content(name: str, content: bytes, chunk_mb: float) -> list[Chunk]:
    """Split content into ceil(len/chunk) hashed chunks (>= 1 chunk)."""
    if chunk_mb <= 0:
        raise ValueError("chunk_mb must be > 0")
    size = max(1, int(chunk_mb * 1024 * 1024))
    pieces = [content[i:i + size] for i in range(0, len(content), size)] or [b""]
    return [Chunk(name, i, p, hashlib.sha256(p).hexdigest()) for i, p in enumerate(pieces)]


def reassemble(chunks: list[Chunk]) -> bytes:
    ordered = sorted(chunks, key=lambda c: c.index)
    for c in ordered:
        if not c.verify():
            raise ValueError(f"chunk {c.name}#{c.index} failed hash verification")
    return b"".join(c.data for c in ordered)

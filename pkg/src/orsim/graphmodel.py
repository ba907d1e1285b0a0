"""Static topologies, link delivery probabilities and candidate forwarding sets.

Nodes are indexed densely ``0..N-1``. Two nodes share a link only when the
distance between them is within *both* transmission ranges.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

PROB_FLOOR = 0.05
CLAMP_LOW = 0.01
CLAMP_HIGH = 0.99
MIN_PROGRESS_UTILITY = 1e-3


class TopologyError(ValueError):
    pass


class NoLinkError(ValueError):
    pass


class NoProgressNeighbors(Exception):
    """Raised when a sender has no usable candidate toward the destination."""

    def __init__(self, sender: int, destination: int):
        super().__init__(f"no progress neighbors: sender {sender} -> destination {destination}")
        self.sender = sender
        self.destination = destination


@dataclass(frozen=True, eq=False)
class Topology:
    positions: np.ndarray
    ranges: np.ndarray
    area: tuple[float, float]
    links: frozenset[tuple[int, int]]
    energy: np.ndarray | None = None

    @property
    def n(self) -> int:
        return len(self.ranges)

    @cached_property
    def distances(self) -> np.ndarray:
        diff = self.positions[:, None, :] - self.positions[None, :, :]
        return np.hypot(diff[..., 0], diff[..., 1])

    @cached_property
    def neighbor_masks(self) -> tuple[int, ...]:
        masks = [0] * self.n
        for i, j in self.links:
            masks[i] |= 1 << j
            masks[j] |= 1 << i
        return tuple(masks)

    def distance(self, i: int, j: int) -> float:
        return float(self.distances[i, j])

    def linked(self, i: int, j: int) -> bool:
        return i != j and bool(self.neighbor_masks[i] >> j & 1)

    def neighbors(self, i: int) -> list[int]:
        m = self.neighbor_masks[i]
        return [j for j in range(self.n) if m >> j & 1]


def build_topology(positions, ranges, area=None, energy=None) -> Topology:
    """Derive the bi-directional link set from node positions and ranges.

    ``area`` is ``(width, height)`` with the origin at ``(0, 0)``; when omitted
    the bounding box of the positions is used and no containment check runs.
    """
    pos = np.asarray(positions, dtype=float).reshape(-1, 2) if len(positions) else np.empty((0, 2))
    r = np.asarray(ranges, dtype=float).reshape(-1)
    if len(pos) == 0:
        raise TopologyError("empty topology")
    if len(r) != len(pos):
        raise TopologyError(f"{len(pos)} positions but {len(r)} ranges")
    if np.any(r <= 0):
        raise TopologyError("transmission ranges must be positive")
    if area is None:
        area = (float(pos[:, 0].max()), float(pos[:, 1].max()))
    else:
        w, h = float(area[0]), float(area[1])
        if np.any(pos < 0) or np.any(pos[:, 0] > w) or np.any(pos[:, 1] > h):
            raise TopologyError(f"node outside area {w}x{h}")
        area = (w, h)
    if energy is not None:
        energy = np.asarray(energy, dtype=float).reshape(-1)
        if len(energy) != len(pos):
            raise TopologyError("energy vector length mismatch")

    diff = pos[:, None, :] - pos[None, :, :]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    reach = np.minimum(r[:, None], r[None, :])
    ii, jj = np.nonzero(np.triu(dist <= reach, k=1))
    links = frozenset(zip(ii.tolist(), jj.tolist()))
    return Topology(positions=pos, ranges=r, area=area, links=links, energy=energy)


def random_topology(n: int, area: tuple[float, float], radius: float, rng: np.random.Generator) -> Topology:
    pos = rng.uniform((0.0, 0.0), area, size=(n, 2))
    return build_topology(pos, np.full(n, float(radius)), area)


def load_topology(path, area=None) -> Topology:
    """Read a node file: ``id x y r [energy]`` per line, ``#`` starts a comment.

    Ids must cover ``0..N-1`` exactly once (any order). Energy is either given
    for every node or for none.
    """
    rows = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (4, 5):
            raise TopologyError(f"{path}:{lineno}: expected 'id x y r [energy]'")
        try:
            node = int(parts[0])
            values = [float(p) for p in parts[1:]]
        except ValueError as exc:
            raise TopologyError(f"{path}:{lineno}: {exc}") from None
        if node in rows:
            raise TopologyError(f"{path}:{lineno}: duplicate id {node}")
        rows[node] = values
    if not rows:
        raise TopologyError("empty topology")
    if sorted(rows) != list(range(len(rows))):
        raise TopologyError(f"{path}: node ids must be exactly 0..{len(rows) - 1}")
    table = [rows[i] for i in range(len(rows))]
    widths = {len(v) for v in table}
    if len(widths) != 1:
        raise TopologyError(f"{path}: energy must be given for all nodes or none")
    arr = np.array(table)
    energy = arr[:, 3] if arr.shape[1] == 4 else None
    return build_topology(arr[:, :2], arr[:, 2], area, energy)


@dataclass(frozen=True)
class LinkProbModel:
    """How per-link delivery probabilities are produced.

    ``constant`` returns ``p``; ``distance`` decays as ``1 - (d / r_min)**beta``
    floored at ``floor``; ``table`` looks the unordered pair up in ``table``.
    """

    mode: str = "distance"
    p: float = 0.8
    beta: float = 2.0
    floor: float = PROB_FLOOR
    table: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.mode not in ("constant", "distance", "table"):
            raise ValueError(f"unknown link model mode {self.mode!r}")
        if self.mode == "constant" and not 0 < self.p <= 1:
            raise ValueError("constant link probability must be in (0, 1]")
        if self.mode == "distance" and self.beta <= 0:
            raise ValueError("beta must be positive")

    @classmethod
    def constant(cls, p: float) -> "LinkProbModel":
        return cls(mode="constant", p=p)

    @classmethod
    def distance_decay(cls, beta: float = 2.0) -> "LinkProbModel":
        return cls(mode="distance", beta=beta)

    @classmethod
    def from_table(cls, table: dict) -> "LinkProbModel":
        norm = {tuple(sorted(k)): float(v) for k, v in table.items()}
        for v in norm.values():
            if not 0 < v <= 1:
                raise ValueError("table probabilities must be in (0, 1]")
        return cls(mode="table", table=norm)


def link_probability(model: LinkProbModel, topology: Topology, i: int, j: int) -> float:
    if not topology.linked(i, j):
        raise NoLinkError(f"no link between {i} and {j}")
    if model.mode == "constant":
        return model.p
    if model.mode == "table":
        key = (min(i, j), max(i, j))
        if key not in model.table:
            raise NoLinkError(f"link ({i}, {j}) missing from probability table")
        return model.table[key]
    d = topology.distance(i, j)
    r_min = min(topology.ranges[i], topology.ranges[j])
    return float(min(1.0, max(model.floor, 1.0 - (d / r_min) ** model.beta)))


def clamp_probability(p: float) -> float:
    return min(CLAMP_HIGH, max(CLAMP_LOW, p))


@dataclass(frozen=True)
class CandidateSet:
    sender: int
    destination: int
    members: tuple[int, ...]
    probs: tuple[float, ...]
    utils: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.members)

    def position(self, node: int) -> int:
        return self.members.index(node)

    def node_ids(self, positions: Iterable[int]) -> tuple[int, ...]:
        return tuple(self.members[p] for p in positions)


def node_utility(topology: Topology, sender: int, destination: int, node: int, metric: str = "progress") -> float:
    if metric == "energy":
        if topology.energy is None:
            raise TopologyError("energy utility requested but topology has no energy column")
        return float(topology.energy[node])
    if metric != "progress":
        raise ValueError(f"unknown utility metric {metric!r}")
    base = topology.distance(sender, destination)
    gain = (base - topology.distance(node, destination)) / base
    return float(min(1.0, max(MIN_PROGRESS_UTILITY, gain)))


def build_cfs(topology: Topology, model: LinkProbModel, sender: int, destination: int,
              policy: str = "progress", utility: str = "progress") -> CandidateSet:
    """Candidate forwarding set of ``sender`` toward ``destination``.

    ``progress`` keeps link-neighbors strictly closer to the destination than
    the sender; ``neighbors`` keeps every link-neighbor except the sender.
    Members come out sorted by descending utility, ties by node id.
    """
    if sender == destination:
        raise ValueError("sender and destination must differ")
    neigh = topology.neighbors(sender)
    if policy == "progress":
        ref = topology.distance(sender, destination)
        neigh = [j for j in neigh if topology.distance(j, destination) < ref]
    elif policy != "neighbors":
        raise ValueError(f"unknown CFS policy {policy!r}")
    if not neigh:
        raise NoProgressNeighbors(sender, destination)
    scored = [(node_utility(topology, sender, destination, j, utility), j) for j in neigh]
    scored.sort(key=lambda t: (-t[0], t[1]))
    members = tuple(j for _, j in scored)
    probs = tuple(clamp_probability(link_probability(model, topology, sender, j)) for j in members)
    return CandidateSet(sender, destination, members, probs, tuple(u for u, _ in scored))


@dataclass(frozen=True)
class NeighborMatrix:
    owner: int
    bits: tuple[int, ...]

    @cached_property
    def mask(self) -> int:
        return sum(1 << k for k, b in enumerate(self.bits) if b)

    def __len__(self) -> int:
        return len(self.bits)


def neighbor_matrices(topology: Topology, cfs: CandidateSet | Sequence[int]) -> list[NeighborMatrix]:
    """One row per CFS member over CFS positions, self-bit set."""
    members = cfs.members if isinstance(cfs, CandidateSet) else tuple(cfs)
    if not members:
        raise ValueError("empty candidate set")
    rows = []
    for a in members:
        bits = tuple(1 if a == b or topology.linked(a, b) else 0 for b in members)
        rows.append(NeighborMatrix(a, bits))
    return rows

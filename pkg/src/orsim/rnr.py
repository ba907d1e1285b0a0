"""Relay-network recognition over neighbor matrices.

A relay network is a fully connected subset (clique) of the candidate set.
Kind is read off the matrix sum ``D``: the number of CFS positions at which
every member's neighbor row has a 1. Membership additionally needs every
member position to survive the AND.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Iterable, Sequence

from .graphmodel import CandidateSet, NeighborMatrix, Topology

DEFAULT_MAX_DEGREE = 8
DEFAULT_MAX_COUNT = 4096


class Kind(str, Enum):
    O_NETWORK = "o-network"
    S_NETWORK = "s-network"
    NOT_RELAY = "not-relay"


@dataclass(frozen=True)
class RelayNetwork:
    members: tuple[int, ...]
    kind: Kind
    matrix_sum: int
    parent_degree: int | None = None

    @property
    def degree(self) -> int:
        return len(self.members)

    @property
    def is_relay(self) -> bool:
        return self.kind is not Kind.NOT_RELAY


@dataclass
class Enumeration:
    networks: list[RelayNetwork] = field(default_factory=list)
    truncated: bool = False

    def __iter__(self):
        return iter(self.networks)

    def __len__(self) -> int:
        return len(self.networks)

    def __getitem__(self, idx):
        return self.networks[idx]


def _mask(row: NeighborMatrix | int) -> int:
    return row if isinstance(row, int) else row.mask


def matrix_sum(rows: Sequence[NeighborMatrix]) -> int:
    """Popcount of the position-wise AND of two or more neighbor rows."""
    if len(rows) < 2:
        raise ValueError("matrix sum needs at least two rows")
    width = {len(r) for r in rows}
    if len(width) != 1:
        raise ValueError(f"neighbor rows have mismatched lengths {sorted(width)}")
    acc = -1
    for r in rows:
        acc &= r.mask
    return acc.bit_count()


def classify(subset: Iterable[int], matrices: Sequence[NeighborMatrix]) -> RelayNetwork:
    members = tuple(sorted(set(subset)))
    n = len(members)
    if n < 2:
        raise ValueError("relay networks have at least two members")
    rows = [matrices[p] for p in members]
    d = matrix_sum(rows)
    # D >= n alone is not enough: two unlinked members can still share n
    # common neighbors outside the subset, so every member bit must survive
    want = sum(1 << p for p in members)
    common = -1
    for r in rows:
        common &= r.mask
    if d < n or common & want != want:
        return RelayNetwork(members, Kind.NOT_RELAY, d)
    if d == n:
        return RelayNetwork(members, Kind.O_NETWORK, d)
    return RelayNetwork(members, Kind.S_NETWORK, d, parent_degree=d)


def _adjacency(matrices: Sequence[NeighborMatrix]) -> list[int]:
    # self bit dropped so the masks describe the link graph only
    return [m.mask & ~(1 << k) for k, m in enumerate(matrices)]


def _cliques(adj: list[int], max_degree: int):
    """Yield every clique of size >= 2 as a sorted tuple of positions."""
    m = len(adj)

    def extend(clique: list[int], cand: int):
        if len(clique) >= 2:
            yield tuple(clique)
        if len(clique) == max_degree:
            return
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            cand &= cand - 1
            clique.append(v)
            # only higher positions keep the output free of permutations
            yield from extend(clique, cand & adj[v])
            clique.pop()

    for v in range(m):
        higher = adj[v] & ~((1 << (v + 1)) - 1)
        yield from extend([v], higher)


def enumerate_relay_networks(cfs: CandidateSet | None, matrices: Sequence[NeighborMatrix],
                             max_degree: int = DEFAULT_MAX_DEGREE,
                             max_count: int = DEFAULT_MAX_COUNT) -> Enumeration:
    """All relay networks of degree ``2..max_degree``, classified.

    Output is ordered by ascending degree, then lexicographically by member
    positions. ``truncated`` is set when more than ``max_count`` exist.
    """
    if max_degree < 1 or max_count < 1:
        raise ValueError("caps must be positive")
    if cfs is not None and len(cfs) != len(matrices):
        raise ValueError("matrices do not match the candidate set")
    found = []
    truncated = False
    for clique in _cliques(_adjacency(matrices), max_degree):
        if len(found) == max_count:
            truncated = True
            break
        found.append(clique)
    found.sort(key=lambda c: (len(c), c))
    return Enumeration([classify(c, matrices) for c in found], truncated)


@dataclass(frozen=True)
class RelayCounts:
    per_degree: dict[int, int]
    total: int
    truncated: bool = False


def count_relay_networks(cfs: CandidateSet | None, matrices: Sequence[NeighborMatrix],
                         max_degree: int = DEFAULT_MAX_DEGREE,
                         max_count: int = DEFAULT_MAX_COUNT) -> RelayCounts:
    found = enumerate_relay_networks(cfs, matrices, max_degree, max_count)
    per = Counter(net.degree for net in found)
    return RelayCounts(dict(sorted(per.items())), len(found), found.truncated)


def maximal_cliques(matrices: Sequence[NeighborMatrix]) -> list[tuple[int, ...]]:
    """Maximal cliques (size >= 1) by Bron-Kerbosch with Tomita pivoting."""
    adj = _adjacency(matrices)
    out = []

    def bk(r: int, p: int, x: int):
        if not p and not x:
            out.append(tuple(k for k in range(len(adj)) if r >> k & 1))
            return
        ux = p | x
        pivot = max((k for k in range(len(adj)) if ux >> k & 1),
                    key=lambda k: (p & adj[k]).bit_count())
        cand = p & ~adj[pivot]
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            cand &= cand - 1
            bk(r | low, p & adj[v], x & adj[v])
            p &= ~low
            x |= low

    if adj:
        bk(0, (1 << len(adj)) - 1, 0)
    return sorted(out, key=lambda c: (len(c), c))


def maximal_extensions(subset: Iterable[int], matrices: Sequence[NeighborMatrix]) -> list[tuple[int, ...]]:
    """Maximal cliques that contain ``subset``.

    More than one entry means the subset sits in several o-networks, in which
    case ``parent_degree`` reports common-neighbor count rather than a single
    parent size.
    """
    s = set(subset)
    return [c for c in maximal_cliques(matrices) if s <= set(c)]


def relevant(a: RelayNetwork, b: RelayNetwork, matrices: Sequence[NeighborMatrix]) -> bool:
    sa, sb = set(a.members), set(b.members)
    if sa <= sb or sb <= sa:
        return False
    return classify(sa | sb, matrices).is_relay


def oracle_is_clique(subset: Iterable[int], topology: Topology) -> bool:
    """Edge-count check: a set of n nodes is a clique iff it spans n(n-1)/2 links."""
    nodes = sorted(set(subset))
    n = len(nodes)
    if n < 2:
        raise ValueError("need at least two nodes")
    edges = sum(1 for a, b in combinations(nodes, 2) if topology.linked(a, b))
    return edges == n * (n - 1) // 2

import math
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from orsim.graphmodel import (LinkProbModel, NoLinkError, NoProgressNeighbors, TopologyError,
                              build_cfs, build_topology, clamp_probability, link_probability,
                              load_topology, neighbor_matrices, node_utility, random_topology)


def test_two_nodes_within_both_ranges_link():
    t = build_topology([(0, 0), (200, 0)], [250, 250])
    assert len(t.links) == 1 and t.linked(0, 1)


def test_one_short_range_breaks_link():
    t = build_topology([(0, 0), (200, 0)], [250, 150])
    assert len(t.links) == 0
    assert not t.linked(0, 1)


def test_empty_topology_rejected():
    with pytest.raises(TopologyError, match="empty topology"):
        build_topology([], [])


def test_link_count_matches_all_pairs_scan():
    rng = np.random.default_rng(2024)
    t = random_topology(100, (2000.0, 2000.0), 250.0, rng)
    pos = np.asarray(t.positions)
    count = 0
    for i in range(100):
        for j in range(i + 1, 100):
            d = math.hypot(pos[i][0] - pos[j][0], pos[i][1] - pos[j][1])
            if d <= 250.0:
                count += 1
    assert len(t.links) == count


def test_link_probability_modes():
    t = build_topology([(0, 0), (250, 0), (0, 0.0)], [250, 250, 250])
    assert link_probability(LinkProbModel.constant(0.8), t, 0, 1) == 0.8
    decay = LinkProbModel.distance_decay(2.0)
    assert link_probability(decay, t, 0, 2) == 1.0
    assert link_probability(decay, t, 0, 1) == pytest.approx(0.05)
    table = LinkProbModel.from_table({(1, 0): 0.3, (0, 2): 0.7, (1, 2): 0.4})
    assert link_probability(table, t, 0, 1) == 0.3


def test_link_probability_needs_link():
    t = build_topology([(0, 0), (500, 0)], [250, 250])
    with pytest.raises(NoLinkError):
        link_probability(LinkProbModel.constant(0.5), t, 0, 1)


def test_clamp():
    assert clamp_probability(1.0) == 0.99
    assert clamp_probability(0.0) == 0.01
    assert clamp_probability(0.5) == 0.5


def test_cfs_contains_adjacent_destination():
    t = build_topology([(0, 0), (100, 0), (200, 0)], [250, 250, 250])
    cfs = build_cfs(t, LinkProbModel.constant(0.8), 0, 2)
    assert 2 in cfs.members


def test_cfs_without_progress_neighbor():
    t = build_topology([(0, 0), (-100, 0), (1000, 0)], [250, 250, 250])
    with pytest.raises(NoProgressNeighbors):
        build_cfs(t, LinkProbModel.constant(0.8), 0, 2)


def test_star_cfs_matches_distance_filter():
    # sender in the middle, three neighbors toward the destination, two away
    pos = [(0, 0), (100, 50), (120, -60), (80, 0), (-100, 0), (0, -150), (900, 0)]
    t = build_topology(pos, [250] * len(pos))
    cfs = build_cfs(t, LinkProbModel.distance_decay(), 0, 6)
    dst = np.asarray(pos[6])
    ref = np.linalg.norm(np.asarray(pos[0]) - dst)
    expect = {j for j in range(1, 6)
              if np.linalg.norm(np.asarray(pos[j]) - np.asarray(pos[0])) <= 250
              and np.linalg.norm(np.asarray(pos[j]) - dst) < ref}
    assert len(cfs) == 3
    assert set(cfs.members) == expect


def test_cfs_sorted_by_utility_and_clamped():
    rng = np.random.default_rng(7)
    t = random_topology(60, (800.0, 800.0), 250.0, rng)
    cfs = build_cfs(t, LinkProbModel.distance_decay(), 0, 59)
    assert list(cfs.utils) == sorted(cfs.utils, reverse=True)
    assert all(0.01 <= p <= 0.99 for p in cfs.probs)
    assert all(1e-3 <= u <= 1 for u in cfs.utils)


def test_energy_utility_needs_column():
    t = build_topology([(0, 0), (100, 0)], [250, 250])
    with pytest.raises(TopologyError):
        node_utility(t, 0, 1, 1, "energy")


def test_single_member_matrix():
    t = build_topology([(0, 0), (100, 0)], [250, 250])
    (row,) = neighbor_matrices(t, [1])
    assert row.bits == (1,)


def test_fixture_rows(relay8):
    topo, mats, pos = relay8
    row3, row6 = mats[pos[3]], mats[pos[6]]
    assert row3.bits[pos[6]] == 0 and row6.bits[pos[3]] == 0
    for clique in [(1, 2, 3, 7), (2, 6, 7), (4, 5, 8)]:
        for a, b in combinations(clique, 2):
            assert mats[pos[a]].bits[pos[b]] == 1


def test_random_matrices_match_pairwise_adjacency():
    rng = np.random.default_rng(3)
    t = random_topology(8, (400.0, 400.0), 200.0, rng)
    members = list(range(8))
    mats = neighbor_matrices(t, members)
    pos = np.asarray(t.positions)
    for a in members:
        for b in members:
            d = float(np.linalg.norm(pos[a] - pos[b]))
            want = 1 if a == b or d <= min(t.ranges[a], t.ranges[b]) else 0
            assert mats[a].bits[b] == want


def test_load_topology(tmp_path):
    p = tmp_path / "n.nodes"
    p.write_text("# comment\n0 0 0 250\n1 100 0 250\n")
    t = load_topology(p)
    assert t.n == 2 and t.linked(0, 1) and t.energy is None
    p.write_text("0 0 0 250\n2 100 0 250\n")
    with pytest.raises(TopologyError):
        load_topology(p)


coords = st.lists(st.tuples(st.floats(0, 500), st.floats(0, 500), st.floats(10, 300)), min_size=2, max_size=15)


@settings(max_examples=60, deadline=None)
@given(coords, st.floats(1.0, 2.0))
def test_symmetry_and_monotone_range(nodes, factor):
    pos = [(x, y) for x, y, _ in nodes]
    r = [r for *_, r in nodes]
    t = build_topology(pos, r)
    n = t.n
    for i in range(n):
        for j in range(n):
            assert t.linked(i, j) == t.linked(j, i)
    mats = neighbor_matrices(t, list(range(n)))
    for i in range(n):
        for j in range(n):
            assert mats[i].bits[j] == mats[j].bits[i]
    bigger = build_topology(pos, [x * factor for x in r])
    assert set(t.links) <= set(bigger.links)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_cfs_progress_predicate(seed):
    rng = np.random.default_rng(seed)
    t = random_topology(30, (600.0, 600.0), 200.0, rng)
    try:
        cfs = build_cfs(t, LinkProbModel.distance_decay(), 0, 1)
    except NoProgressNeighbors:
        members = set()
    else:
        members = set(cfs.members)
    ref = t.distance(0, 1)
    expect = {j for j in range(t.n) if j != 0 and t.linked(0, j) and t.distance(j, 1) < ref}
    assert members == expect

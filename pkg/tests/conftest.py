from itertools import combinations

import numpy as np
import pytest

from orsim.expcli.selftest import fixture_path
from orsim.graphmodel import NeighborMatrix, load_topology, neighbor_matrices

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def matrices_from_edges(m, edges):
    """Neighbor rows over positions 0..m-1 for an explicit edge list."""
    adj = [[1 if a == b else 0 for b in range(m)] for a in range(m)]
    for a, b in edges:
        adj[a][b] = adj[b][a] = 1
    return [NeighborMatrix(k, tuple(row)) for k, row in enumerate(adj)]


def random_matrices(m, density, rng):
    edges = [(a, b) for a, b in combinations(range(m), 2) if rng.random() < density]
    return matrices_from_edges(m, edges), set(edges)


@pytest.fixture(scope="session")
def relay8():
    topo = load_topology(fixture_path())
    members = tuple(range(1, 9))
    mats = neighbor_matrices(topo, members)
    pos = {node: k for k, node in enumerate(members)}
    return topo, mats, pos


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, text = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  {text}")

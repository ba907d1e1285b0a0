"""Quick built-in check of the worked example values."""
from __future__ import annotations

from importlib import resources

from .. import rnr
from ..delaymodel import utility_priorities
from ..graphmodel import NeighborMatrix, load_topology, neighbor_matrices
from ..selector import SelectionWeights, relative_variance, resolution_ratio, score_from_ranks


def fixture_path():
    return resources.files("orsim") / "data" / "relay8.nodes"


def _checks():
    a = NeighborMatrix(0, (1, 0, 0, 1, 1, 1))
    b = NeighborMatrix(1, (0, 1, 0, 1, 1, 0))
    yield "matrix sum of the two-row example is 2", rnr.matrix_sum([a, b]) == 2

    topo = load_topology(fixture_path())
    members = tuple(range(1, 9))
    mats = neighbor_matrices(topo, members)
    pos = {node: k for k, node in enumerate(members)}

    def cls(*nodes):
        return rnr.classify([pos[n] for n in nodes], mats)

    n123 = cls(1, 2, 3)
    yield "(1,2,3) is an s-network with D=4", n123.kind is rnr.Kind.S_NETWORK and n123.matrix_sum == 4
    n256 = cls(2, 5, 6)
    yield "(2,5,6) is not a relay network, D=1", n256.kind is rnr.Kind.NOT_RELAY and n256.matrix_sum == 1
    yield "(1,2,3,7) is an o-network", cls(1, 2, 3, 7).kind is rnr.Kind.O_NETWORK

    ranks = utility_priorities((0.9, 0.87, 0.83, 0.79, 0.75), (0.65, 0.78, 0.8, 0.69, 0.57))
    yield "energy x probability priorities are (3,1,2,4,5)", ranks == (3, 1, 2, 4, 5)

    v1 = relative_variance((29, 45, 63))
    v2 = relative_variance((0.27, 0.68, 0.49))
    yield "relative variances 0.0925 / 0.122", abs(v1 - 0.0925) <= 5e-4 and abs(v2 - 0.122) <= 5e-4
    yield "resolution ratio 1.32", abs(resolution_ratio(v2, v1) - 1.32) <= 0.01
    scores = score_from_ranks(SelectionWeights(0.0925, 0.122, 1.32), (1, 2, 3), (1, 3, 2))
    yield "network b scores 0.551 and wins", abs(scores[1] - 0.551) <= 1e-3 and max(scores) == scores[1]


def run_selftest(stream=None) -> bool:
    import sys
    stream = stream or sys.stdout
    ok = True
    for name, passed in _checks():
        ok &= bool(passed)
        print(f"{'PASS' if passed else 'FAIL'}  {name}", file=stream)
    return ok

# Relay networks inside a candidate forwarding set
#
# A sender keeps a set of neighbors that make progress toward the destination.
# Any fully connected subset of that set can act as a relay network, because
# every member can overhear every other member's ACK.
#
# This walk-through loads the bundled eight-candidate fixture and looks at the
# neighbor rows, the matrix sum D and what it says about a subset.

from orsim import rnr
from orsim.expcli.selftest import fixture_path
from orsim.graphmodel import load_topology, neighbor_matrices

topo = load_topology(fixture_path())
members = tuple(range(1, 9))
mats = neighbor_matrices(topo, members)
pos = {node: k for k, node in enumerate(members)}

# Each row marks which candidates a node can hear, itself included.

for row in mats:
    print(row.owner, row.bits)

# D is the popcount of the AND of the member rows. For (1,2,3) it is 4: the
# three members plus node 7, which hears all of them. So (1,2,3) sits inside a
# bigger relay network and is an s-network.

for subset in [(1, 2, 3), (2, 5, 6), (1, 2, 3, 7)]:
    net = rnr.classify([pos[n] for n in subset], mats)
    print(subset, net.kind.value, "D =", net.matrix_sum)

# Enumerating every relay network gives the pool the selector scores.

counts = rnr.count_relay_networks(None, mats)
print("per degree:", counts.per_degree, "total:", counts.total)

# D counts common neighbors, and those need not be linked to each other. The
# pair (2,7) has D = 5, yet it extends into two different maximal cliques and
# no five-node clique exists.

pair = rnr.classify([pos[2], pos[7]], mats)
print("(2,7) D =", pair.matrix_sum, "maximal extensions:",
      [tuple(members[p] for p in c) for c in rnr.maximal_extensions(pair.members, mats)])

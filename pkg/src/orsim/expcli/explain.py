"""Human-readable dump of one relay-network selection decision."""
from __future__ import annotations

from typing import Iterable, Sequence

from .. import rnr
from ..delaymodel import adjusted_utility
from ..graphmodel import LinkProbModel, Topology, build_cfs, load_topology, neighbor_matrices
from ..selector import SelectionConfig, SelectionResult, select_relay_network


def _ids(cfs, positions) -> str:
    return "(" + ",".join(str(n) for n in cfs.node_ids(positions)) + ")"


def explain_data(topology: Topology, sender: int, destination: int,
                 model: LinkProbModel | None = None, utility: str = "progress",
                 config: SelectionConfig | None = None):
    model = model or LinkProbModel()
    cfs = build_cfs(topology, model, sender, destination, utility=utility)
    mats = neighbor_matrices(topology, cfs)
    return cfs, mats, select_relay_network(cfs, mats, config)


def explain_selection(topology, sender: int, destination: int, model: LinkProbModel | None = None,
                      utility: str = "progress", probes: Iterable[Sequence[int]] = (),
                      config: SelectionConfig | None = None) -> str:
    """Text report: candidates, relay networks, per-network metrics and the pick.

    ``topology`` is a :class:`Topology` or a node-file path. ``probes`` are
    extra node-id subsets to classify whether or not they form relay networks.
    """
    topo = topology if isinstance(topology, Topology) else load_topology(topology)
    cfs, mats, res = explain_data(topo, sender, destination, model, utility, config)
    out = [f"sender {sender} -> destination {destination}",
           f"candidate forwarding set ({len(cfs)} nodes, utility={utility}):",
           "  pos  node        P          U         U*"]
    for k, node in enumerate(cfs.members):
        u_star = adjusted_utility(cfs.utils[k], cfs.probs[k])
        out.append(f"  {k:>3}  {node:>4}  {cfs.probs[k]:9.4f}  {cfs.utils[k]:9.4f}  {u_star:9.4f}")
    out.append("neighbor rows:")
    for m in mats:
        out.append(f"  {m.owner:>4}  " + " ".join(str(b) for b in m.bits))

    if res.fallback:
        node = cfs.members[res.chosen.members[0]]
        out.append(f"no relay network of degree >= 2; single candidate {node} chosen")
        return "\n".join(out) + "\n"

    out.append("relay networks:")
    out.append("  members              degree  kind        D  parent")
    for c in res.candidates:
        net = c.network
        parent = "" if net.parent_degree is None else str(net.parent_degree)
        out.append(f"  {_ids(cfs, net.members):<20} {net.degree:>6}  {net.kind.value:<10} {net.matrix_sum:>2}  {parent}")
    if res.truncated:
        out.append("  (enumeration truncated at max_count)")

    w = res.weights
    out.append(f"weights: rv_DT*={w.v_dt:.6g}  rv_U*={w.v_u:.6g}  xi={w.xi:.6g}" + ("  (degenerate)" if w.degenerate else ""))
    out.append("  members              priorities           P_G      t_G     DT*(ms)      U*   n_DT  n_U      U^F")
    for k, c in enumerate(res.candidates):
        m = c.metrics
        n_dt, n_u = res.order_numbers[k]
        mark = " *" if k == res.chosen_index else ""
        out.append(f"  {_ids(cfs, c.network.members):<20} {_ids(cfs, c.priorities):<20} {m.pdp:6.4f}  {m.one_hop_etx:7.4f}  "
                   f"{1000 * m.effective_delay:9.4f}  {m.effective_utility:6.4f}  {n_dt:>4}  {n_u:>3}  {res.final_utilities[k]:7.4f}{mark}")

    probes = list(probes)
    if probes:
        out.append("probed subsets:")
        for subset in probes:
            pos = [cfs.position(n) for n in subset]
            net = rnr.classify(pos, mats)
            out.append(f"  {_ids(cfs, net.members):<20} {net.kind.value}  D={net.matrix_sum}")
    out.append(f"chosen: {_ids(cfs, res.chosen.members)} priorities {_ids(cfs, res.node_priorities)}")
    return "\n".join(out) + "\n"


def chosen_nodes(res: SelectionResult, cfs) -> tuple[int, ...]:
    return cfs.node_ids(res.node_priorities)

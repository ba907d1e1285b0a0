"""Relay-set policies and hop-by-hop packet routing without queueing."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from ..graphmodel import (LinkProbModel, NoProgressNeighbors, Topology, build_cfs,
                          link_probability, neighbor_matrices)
from ..selector import SelectionConfig, select_relay_network
from .coordination import CoordinationOutcome, coordination_round


class Policy(str, Enum):
    DDA = "dda"
    EXOR_LITE = "exor"
    SOAR_LITE = "soar"

    @classmethod
    def parse(cls, name: str) -> "Policy":
        key = name.strip().lower().replace("-lite", "").replace("_lite", "")
        for p in cls:
            if p.value == key or p.name.lower() == key:
                return p
        raise ValueError(f"unknown policy {name!r}")


@dataclass(frozen=True)
class Packet:
    id: int
    source: int
    destination: int
    created_at: float = 0.0
    size: int = 512
    ttl_remaining: int = 32


@dataclass(frozen=True)
class HopPlan:
    relay: tuple[int, ...]
    probs: tuple[float, ...]


class Router:
    """Per-topology relay-set planner with caches keyed by (sender, destination).

    ``ack_override`` replaces the ACK overhearing probability on every existing
    link; ``None`` uses the link's delivery probability.
    """

    def __init__(self, topology: Topology, model: LinkProbModel, policy: Policy | str,
                 selection: SelectionConfig | None = None, utility: str = "progress",
                 ack_override: float | None = None):
        self.topology = topology
        self.model = model
        self.policy = Policy.parse(policy) if isinstance(policy, str) else policy
        self.selection = selection or SelectionConfig()
        self.utility = utility
        self.ack_override = ack_override
        self._plans: dict[tuple[int, int], HopPlan | None] = {}
        self._links: dict[tuple[int, int], float] = {}

    def link_prob(self, a: int, b: int) -> float:
        key = (a, b) if a < b else (b, a)
        if key not in self._links:
            self._links[key] = link_probability(self.model, self.topology, a, b)
        return self._links[key]

    def ack_prob(self, a: int, b: int) -> float | None:
        if not self.topology.linked(a, b):
            return None
        return self.ack_override if self.ack_override is not None else self.link_prob(a, b)

    def plan(self, sender: int, destination: int) -> HopPlan | None:
        """Relay set in priority order, or ``None`` when no progress neighbor exists."""
        key = (sender, destination)
        if key not in self._plans:
            self._plans[key] = self._make_plan(sender, destination)
        return self._plans[key]

    def _make_plan(self, sender: int, destination: int) -> HopPlan | None:
        topo = self.topology
        try:
            cfs = build_cfs(topo, self.model, sender, destination, utility=self.utility)
        except NoProgressNeighbors:
            return None
        if self.policy is Policy.DDA:
            mats = neighbor_matrices(topo, cfs)
            need = cfs.position(destination) if destination in cfs.members else None
            res = select_relay_network(cfs, mats, self.selection, require_member=need)
            relay = list(cfs.node_ids(res.node_priorities))
        else:
            remaining = lambda j: (topo.distance(j, destination), j)
            members = list(cfs.members)
            if self.policy is Policy.SOAR_LITE:
                best = min(members, key=remaining)
                members = [j for j in members if j == best or topo.linked(j, best)]
                relay = sorted(members, key=remaining)
            else:
                # expected advance per transmission: progress times link delivery
                base = topo.distance(sender, destination)
                gain = lambda j: (-(base - topo.distance(j, destination)) * self.link_prob(sender, j), j)
                relay = sorted(members, key=gain)
        if destination in relay:
            relay.remove(destination)
            relay.insert(0, destination)
        return HopPlan(tuple(relay), tuple(self.link_prob(sender, j) for j in relay))

    def hop(self, sender: int, destination: int, rng, max_retries: int) -> tuple[HopPlan | None, CoordinationOutcome | None]:
        plan = self.plan(sender, destination)
        if plan is None:
            return None, None
        return plan, coordination_round(plan.relay, plan.probs, self.ack_prob, rng, max_retries)


@dataclass(frozen=True)
class DeliveryRecord:
    packet_id: int
    delivered: bool
    reason: str | None
    hops: int
    slots: int
    delay: float
    duplicates: int
    transmissions: int
    path: tuple[int, ...]


def route_packet(packet: Packet, policy, topology: Topology, model: LinkProbModel, rng,
                 T: float = 0.045, max_retries: int = 7, router: Router | None = None,
                 **router_kwargs) -> DeliveryRecord:
    """Forward a single packet hop by hop along the primary forwarder.

    Duplicate forwarders are counted but not followed. Delay is slot-driven:
    each hop charges the waited slots, including ``n`` slots per failed try.
    """
    router = router or Router(topology, model, policy, **router_kwargs)
    node, ttl = packet.source, packet.ttl_remaining
    path = [node]
    hops = slots = dups = tx = 0
    reason = None
    while node != packet.destination:
        if ttl <= 0:
            reason = "ttl expired"
            break
        plan, out = router.hop(node, packet.destination, rng, max_retries)
        if plan is None:
            reason = "no progress neighbors"
            break
        tx += out.tries + out.duplicates
        slots += out.slots_waited
        if out.forwarder is None:
            reason = "retries exhausted"
            break
        dups += out.duplicates
        hops += 1
        ttl -= 1
        node = out.forwarder
        path.append(node)
    return DeliveryRecord(packet.id, reason is None, reason, hops, slots, slots * T, dups, tx, tuple(path))

"""Event-driven multi-flow scenario with per-node FIFO queues.

A node serves one packet at a time; the service time is the coordination
round's waiting (slots times ``T``). Every forwarder of a round, duplicates
included, receives its own copy. A node drops copies of a packet it has
already handled, and the destination counts the first copy only.
"""
from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass, field

from ..graphmodel import LinkProbModel, Topology, random_topology
from ..selector import SelectionConfig
from .events import EventQueue
from .rng import RngStream
from .routing import Policy, Router


@dataclass(frozen=True)
class ScenarioConfig:
    policy: str = "dda"
    nodes: int = 100
    area: tuple[float, float] = (2000.0, 2000.0)
    radius: float = 250.0
    cbr: int = 60
    cbr_rate: float = 4.0
    duration: float = 10.0
    packet_size: int = 512
    ttl: int = 32
    queue_len: int = 50
    slot_T: float = 0.045
    max_retries: int = 7
    link_model: LinkProbModel = field(default_factory=LinkProbModel)
    utility: str = "progress"
    ack_prob: float | None = None
    max_degree: int = 8
    max_count: int = 4096
    descending_head: int | None = None

    def validate(self) -> None:
        Policy.parse(self.policy)
        if self.nodes < 2:
            raise ValueError("nodes must be at least 2")
        if self.cbr < 0 or self.cbr_rate <= 0 or self.duration <= 0:
            raise ValueError("cbr must be >= 0 and cbr_rate, duration > 0")
        if self.ttl < 1 or self.queue_len < 1 or self.slot_T <= 0 or self.max_retries < 0:
            raise ValueError("ttl, queue_len >= 1; slot_T > 0; max_retries >= 0")
        if self.ack_prob is not None and not 0 <= self.ack_prob <= 1:
            raise ValueError("ack_prob must be in [0, 1]")


@dataclass(frozen=True)
class MetricsRow:
    policy: str
    nodes: int
    cbr: int
    seed: int
    mean_delay_ms: float
    pdr: float
    throughput: float
    duplicates_per_delivery: float
    failures: int
    generated: int = 0
    delivered: int = 0
    transmissions: int = 0
    failure_reasons: tuple[tuple[str, int], ...] = ()
    error: str | None = None


@dataclass
class _Flight:
    source: int
    destination: int
    created_at: float
    delivered_at: float | None = None


def scenario_topology(cfg: ScenarioConfig, streams: RngStream) -> Topology:
    return random_topology(cfg.nodes, cfg.area, cfg.radius, streams.topology)


def cbr_flows(cfg: ScenarioConfig, n_nodes: int, streams: RngStream) -> list[tuple[int, int, float]]:
    """``(source, destination, first_send_time)`` per connection."""
    flows = []
    interval = 1.0 / cfg.cbr_rate
    for _ in range(cfg.cbr):
        src, dst = streams.traffic.choice(n_nodes, size=2, replace=False)
        flows.append((int(src), int(dst), float(streams.traffic.uniform(0.0, interval))))
    return flows


def run_scenario(cfg: ScenarioConfig, seed: int, topology: Topology | None = None) -> MetricsRow:
    cfg.validate()
    streams = RngStream(seed)
    topo = topology if topology is not None else scenario_topology(cfg, streams)
    flows = cbr_flows(cfg, topo.n, streams)
    router = Router(topo, cfg.link_model, cfg.policy,
                    SelectionConfig(cfg.slot_T, cfg.max_degree, cfg.max_count, cfg.descending_head),
                    cfg.utility, cfg.ack_prob)
    policy = router.policy.value

    q = EventQueue()
    interval = 1.0 / cfg.cbr_rate
    for f, (_, _, start) in enumerate(flows):
        if start < cfg.duration:
            q.push(start, "gen", f)

    flights: list[_Flight] = []
    queues = [deque() for _ in range(topo.n)]
    busy = [False] * topo.n
    seen = [set() for _ in range(topo.n)]
    reasons: Counter[str] = Counter()
    tx = dups = 0

    def start_service(node: int) -> None:
        nonlocal tx, dups
        pid, ttl = queues[node].popleft()
        busy[node] = True
        plan, out = router.hop(node, flights[pid].destination, streams, cfg.max_retries)
        if plan is None:
            q.push(q.now, "done", (node, pid, ttl, None))
            return
        tx += out.tries + out.duplicates
        dups += out.duplicates
        q.push(q.now + out.slots_waited * cfg.slot_T, "done", (node, pid, ttl, out))

    def arrive(node: int, pid: int, ttl: int) -> None:
        fl = flights[pid]
        if node == fl.destination:
            if fl.delivered_at is None:
                fl.delivered_at = q.now
            return
        if pid in seen[node]:
            return
        seen[node].add(pid)
        if ttl <= 0:
            reasons["ttl expired"] += 1
            return
        if len(queues[node]) >= cfg.queue_len:
            reasons["queue overflow"] += 1
            return
        queues[node].append((pid, ttl))
        if not busy[node]:
            start_service(node)

    while q:
        now, kind, payload = q.pop()
        if kind == "gen":
            src, dst, _ = flows[payload]
            flights.append(_Flight(src, dst, now))
            arrive(src, len(flights) - 1, cfg.ttl)
            nxt = now + interval
            if nxt < cfg.duration:
                q.push(nxt, "gen", payload)
        elif kind == "done":
            node, pid, ttl, out = payload
            busy[node] = False
            if out is None:
                reasons["no progress neighbors"] += 1
            elif out.forwarder is None:
                reasons["retries exhausted"] += 1
            else:
                for fwd in (out.forwarder, *out.duplicate_forwarders):
                    q.push(now, "arrive", (fwd, pid, ttl - 1))
            if queues[node]:
                start_service(node)
        else:
            arrive(*payload)

    generated = len(flights)
    delays = [f.delivered_at - f.created_at for f in flights if f.delivered_at is not None]
    delivered = len(delays)
    if generated == 0:
        nan = math.nan
        return MetricsRow(policy, topo.n, cfg.cbr, seed, nan, nan, nan, nan, 0,
                          error="no packets generated")
    return MetricsRow(
        policy=policy,
        nodes=topo.n,
        cbr=cfg.cbr,
        seed=seed,
        mean_delay_ms=1000.0 * sum(delays) / delivered if delivered else math.nan,
        pdr=delivered / generated,
        throughput=delivered / tx if tx else math.nan,
        duplicates_per_delivery=dups / delivered if delivered else math.nan,
        failures=generated - delivered,
        generated=generated,
        delivered=delivered,
        transmissions=tx,
        failure_reasons=tuple(sorted(reasons.items())),
    )

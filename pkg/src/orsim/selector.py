"""Relay-network scoring and selection.

Every relay network gets an ETX-inflated waiting delay and an ETX-deflated
expected utility. Each metric is turned into desirability ranks (low delay and
high utility rank high), the ranks are weighted by the metric's relative
variance across the candidate networks, and the top scorer wins.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.stats import rankdata

from . import rnr
from .delaymodel import SLOT_T, adjusted_utility, network_pdp, relaying_delay
from .graphmodel import CandidateSet, NeighborMatrix


class NoCandidates(ValueError):
    pass


def one_hop_etx(probs: Sequence[float]) -> float:
    return 1.0 / network_pdp(probs)


def effective_delay(probs: Sequence[float], T: float = SLOT_T) -> float:
    return relaying_delay(probs, T) * one_hop_etx(probs)


def expected_network_utility(utils: Sequence[float], probs: Sequence[float]) -> float:
    if len(utils) != len(probs):
        raise ValueError("utils and probs must align")
    total = 0.0
    miss = 1.0
    for u, p in zip(utils, probs):
        total += u * p * miss
        miss *= 1.0 - p
    return total


def effective_utility(utils: Sequence[float], probs: Sequence[float]) -> float:
    return expected_network_utility(utils, probs) * network_pdp(probs)


@dataclass(frozen=True)
class NetworkMetrics:
    pdp: float
    one_hop_etx: float
    delay: float
    effective_delay: float
    expected_utility: float
    effective_utility: float


def network_metrics(utils: Sequence[float], probs: Sequence[float], T: float = SLOT_T) -> NetworkMetrics:
    pg = network_pdp(probs)
    dt = relaying_delay(probs, T)
    ubar = expected_network_utility(utils, probs)
    return NetworkMetrics(pg, 1.0 / pg, dt, dt / pg, ubar, ubar * pg)


def relative_variance(values: Sequence[float]) -> float:
    x = np.asarray(values, dtype=float)
    if len(x) < 2:
        raise ValueError("relative variance needs at least two values")
    mean = x.mean()
    if mean == 0:
        raise ValueError("relative variance undefined for zero mean")
    return float(np.mean(((x - mean) / mean) ** 2))


def resolution_ratio(v_dt: float, v_u: float) -> float:
    if v_dt < 0 or v_u < 0:
        raise ValueError("relative variances are nonnegative")
    if v_dt == v_u:
        return 1.0
    lo, hi = sorted((v_dt, v_u))
    if lo == 0:
        return float("inf")
    return hi / lo


def order_numbers(values: Sequence[float], direction: str = "higher") -> tuple[int, ...]:
    """Desirability ranks 1..k; the most desirable value gets the largest rank.

    Ties share the lower rank.
    """
    x = np.asarray(values, dtype=float)
    if direction == "lower":
        x = -x
    elif direction != "higher":
        raise ValueError("direction is 'higher' or 'lower'")
    return tuple(int(r) for r in rankdata(x, method="min"))


@dataclass(frozen=True)
class SelectionWeights:
    v_dt: float
    v_u: float
    xi: float
    degenerate: bool = False


def selection_weights(delays: Sequence[float], utilities: Sequence[float]) -> SelectionWeights:
    if len(delays) == 1:
        return SelectionWeights(1.0, 1.0, 1.0, degenerate=True)
    v_dt = relative_variance(delays)
    v_u = relative_variance(utilities)
    if v_dt == 0 and v_u == 0:
        return SelectionWeights(0.0, 0.0, 1.0, degenerate=True)
    return SelectionWeights(v_dt, v_u, resolution_ratio(v_dt, v_u))


def score_from_ranks(weights: SelectionWeights, dt_ranks: Sequence[int], u_ranks: Sequence[int]) -> list[float]:
    return [weights.v_dt * a + weights.v_u * b for a, b in zip(dt_ranks, u_ranks, strict=True)]


def final_utilities(delays: Sequence[float], utilities: Sequence[float]):
    """Rank-weighted final scores for aligned per-network metrics.

    Returns ``(scores, weights, dt_ranks, u_ranks)``.
    """
    if not delays or len(delays) != len(utilities):
        raise ValueError("need at least one network and aligned metric lists")
    weights = selection_weights(delays, utilities)
    if len(delays) == 1:
        dt_ranks, u_ranks = (1,), (1,)
    else:
        dt_ranks = order_numbers(delays, "lower")
        u_ranks = order_numbers(utilities, "higher")
    return score_from_ranks(weights, dt_ranks, u_ranks), weights, dt_ranks, u_ranks


def legacy_weighted_utility(delay: float, utility: float, w_dt: float, w_u: float) -> float:
    """Plain weighted sum of raw metric values."""
    if w_dt < 0 or w_u < 0:
        raise ValueError("weights must be nonnegative")
    return w_dt * delay + w_u * utility


@dataclass(frozen=True)
class SelectionConfig:
    T: float = SLOT_T
    max_degree: int = rnr.DEFAULT_MAX_DEGREE
    max_count: int = rnr.DEFAULT_MAX_COUNT
    # keep only networks whose first k priorities have non-increasing P
    descending_head: int | None = None


@dataclass(frozen=True)
class Candidate:
    network: rnr.RelayNetwork
    priorities: tuple[int, ...]
    metrics: NetworkMetrics


@dataclass(frozen=True)
class SelectionResult:
    chosen: rnr.RelayNetwork
    node_priorities: tuple[int, ...]
    candidates: tuple[Candidate, ...]
    final_utilities: tuple[float, ...]
    order_numbers: tuple[tuple[int, int], ...]
    weights: SelectionWeights
    chosen_index: int
    truncated: bool = False
    fallback: bool = False

    @property
    def chosen_metrics(self) -> NetworkMetrics:
        return self.candidates[self.chosen_index].metrics


def priority_order(cfs: CandidateSet, positions: Sequence[int]) -> tuple[int, ...]:
    """Positions sorted by descending ``U_i * P_i``, ties by position."""
    score = {p: adjusted_utility(cfs.utils[p], cfs.probs[p]) for p in positions}
    return tuple(sorted(positions, key=lambda p: (-score[p], p)))


def _candidate(cfs: CandidateSet, net: rnr.RelayNetwork, T: float) -> Candidate:
    order = priority_order(cfs, net.members)
    probs = [cfs.probs[p] for p in order]
    utils = [cfs.utils[p] for p in order]
    return Candidate(net, order, network_metrics(utils, probs, T))


def _descending_head(cfs: CandidateSet, cand: Candidate, k: int) -> bool:
    head = [cfs.probs[p] for p in cand.priorities[:k]]
    return all(a >= b for a, b in zip(head, head[1:]))


def select_relay_network(cfs: CandidateSet, matrices: Sequence[NeighborMatrix],
                         config: SelectionConfig | None = None,
                         require_member: int | None = None) -> SelectionResult:
    """Pick the relay network with the highest rank-weighted score.

    ``require_member`` (a CFS position) restricts the pool to networks that
    contain it. Without any relay network of degree two or more, the single
    node with the best ``U_i * P_i`` is returned as a one-member network.
    """
    cfg = config or SelectionConfig()
    if cfs is None or len(cfs) == 0:
        raise NoCandidates("no candidates")
    found = rnr.enumerate_relay_networks(cfs, matrices, cfg.max_degree, cfg.max_count)
    nets = [n for n in found if require_member is None or require_member in n.members]
    cands = [_candidate(cfs, n, cfg.T) for n in nets]
    if cfg.descending_head:
        kept = [c for c in cands if _descending_head(cfs, c, cfg.descending_head)]
        cands = kept or cands

    if not cands:
        pool = range(len(cfs)) if require_member is None else [require_member]
        best = priority_order(cfs, pool)[0]
        single = rnr.RelayNetwork((best,), rnr.Kind.O_NETWORK, 1)
        cand = _candidate(cfs, single, cfg.T)
        w = SelectionWeights(1.0, 1.0, 1.0, degenerate=True)
        return SelectionResult(single, cand.priorities, (cand,), (2.0,), ((1, 1),), w, 0,
                               found.truncated, fallback=True)

    delays = [c.metrics.effective_delay for c in cands]
    utils = [c.metrics.effective_utility for c in cands]
    scores, weights, dt_ranks, u_ranks = final_utilities(delays, utils)
    best = min(range(len(cands)), key=lambda k: (-scores[k], delays[k], cands[k].network.members))
    return SelectionResult(
        chosen=cands[best].network,
        node_priorities=cands[best].priorities,
        candidates=tuple(cands),
        final_utilities=tuple(scores),
        order_numbers=tuple(zip(dt_ranks, u_ranks)),
        weights=weights,
        chosen_index=best,
        truncated=found.truncated,
    )

"""Delivery-probability and slotted-waiting models for a prioritized relay set.

Probabilities are listed in forwarding-priority order (index 0 forwards first).
The waiting slot ``T`` defaults to 45 ms.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Sequence

SLOT_T = 0.045
DEFAULT_DELTA_P = 0.01


@dataclass(frozen=True)
class PriorityProfile:
    probs: tuple[float, ...]
    T: float = SLOT_T

    def __post_init__(self):
        object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))
        if not self.probs:
            raise ValueError("a priority profile needs at least one node")
        if any(not 0 < p < 1 for p in self.probs):
            raise ValueError("profile probabilities must lie strictly in (0, 1)")
        if self.T <= 0:
            raise ValueError("slot duration must be positive")

    @property
    def n(self) -> int:
        return len(self.probs)


def _profile(profile, T=None) -> PriorityProfile:
    if isinstance(profile, PriorityProfile):
        return profile if T is None else PriorityProfile(profile.probs, T)
    return PriorityProfile(tuple(profile), SLOT_T if T is None else T)


def network_pdp(probs: Sequence[float]) -> float:
    """Probability that at least one member receives the packet."""
    return 1.0 - prod(1.0 - p for p in probs)


def relaying_delay(profile, T: float | None = None) -> float:
    """Expected waiting before someone forwards, for one transmission try.

    The ``i``-th priority receiver (0-based) forwards after ``i`` slots; if no
    member receives, the full ``n`` slots elapse.
    """
    prof = _profile(profile, T)
    p = prof.probs
    n = len(p)
    total = 0.0
    miss = 1.0
    for i in range(1, n):
        miss *= 1.0 - p[i - 1]
        total += i * p[i] * miss
    miss *= 1.0 - p[-1]
    total += n * miss
    return total * prof.T


def optimal_priority_order(probs: Sequence[float]) -> tuple[int, ...]:
    """Indices sorting ``probs`` descending, ties by original index."""
    return tuple(sorted(range(len(probs)), key=lambda k: (-probs[k], k)))


def delay_sensitivity(profile, i: int, delta_p: float = DEFAULT_DELTA_P, T: float | None = None) -> float:
    """Drop in expected waiting when the ``i``-th priority (1-based) gains ``delta_p``.

    Positive values mean the delay shrinks.
    """
    prof = _profile(profile, T)
    if not 1 <= i <= prof.n:
        raise ValueError(f"priority index {i} outside 1..{prof.n}")
    raised = list(prof.probs)
    raised[i - 1] += delta_p
    if not 0 < raised[i - 1] < 1:
        raise ValueError(f"P_{i} + dP = {raised[i - 1]:.6g} leaves (0, 1)")
    return relaying_delay(prof) - relaying_delay(raised, prof.T)


def sensitivity_gap(profile, i: int, j: int, delta_p: float = DEFAULT_DELTA_P, T: float | None = None) -> float:
    if not i < j:
        raise ValueError("sensitivity gap needs i < j")
    return delay_sensitivity(profile, i, delta_p, T) - delay_sensitivity(profile, j, delta_p, T)


@dataclass(frozen=True)
class SensitivityReport:
    delta_p: float
    deltas: tuple[float, ...]

    def gap(self, i: int, j: int) -> float:
        return self.deltas[i - 1] - self.deltas[j - 1]


def sensitivity_report(profile, delta_p: float = DEFAULT_DELTA_P, T: float | None = None) -> SensitivityReport:
    prof = _profile(profile, T)
    return SensitivityReport(delta_p, tuple(delay_sensitivity(prof, i, delta_p) for i in range(1, prof.n + 1)))


def closed_form_sensitivity(profile, i: int, delta_p: float = DEFAULT_DELTA_P, T: float | None = None) -> float:
    """Exact linear-in-dP form of :func:`delay_sensitivity`.

    Expected waiting equals the sum over ``k`` of the probability that the
    first ``k`` members all miss, so it is affine in each ``P_i`` and the
    change is ``dP * T * prod_{l<i}(1-P_l) * (1 + sum_{k>i} prod_{i<l<=k}(1-P_l))``.
    Kept as a cross-check.
    """
    prof = _profile(profile, T)
    p = prof.probs
    head = prod(1.0 - q for q in p[: i - 1])
    tail = 1.0
    run = 1.0
    for q in p[i:]:
        run *= 1.0 - q
        tail += run
    return delta_p * prof.T * head * tail


def adjusted_utility(utility: float, prob: float) -> float:
    """Utility discounted by one-hop ETX (``1/P``)."""
    if utility <= 0:
        raise ValueError("utility must be positive")
    if not 0 < prob <= 1:
        raise ValueError("probability must lie in (0, 1]")
    return utility * prob


def utility_priorities(utils: Sequence[float], probs: Sequence[float]) -> tuple[int, ...]:
    """1-based priority rank of each node under the ETX-discounted utility."""
    scores = [adjusted_utility(u, p) for u, p in zip(utils, probs, strict=True)]
    order = sorted(range(len(scores)), key=lambda k: (-scores[k], k))
    ranks = [0] * len(scores)
    for rank, k in enumerate(order, 1):
        ranks[k] = rank
    return tuple(ranks)

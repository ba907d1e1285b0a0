"""One hop of time-based coordination among a prioritized relay set.

Per try every member independently receives the data. The highest-priority
receiver forwards after ``(priority - 1)`` slots and broadcasts an ACK. A
lower-priority receiver that heard no ACK from any earlier forwarder by its
own slot forwards too, which is a duplicate. An ACK can only cross an
existing link. When nobody receives, all ``n`` slots elapse and the sender
retries.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

AckProb = Callable[[int, int], "float | None"]


@dataclass(frozen=True)
class CoordinationOutcome:
    forwarder: int | None
    slots_waited: int
    duplicates: int
    receivers: frozenset[int]
    retransmissions_used: int
    duplicate_forwarders: tuple[int, ...] = ()
    first_try_slots: int = 0

    @property
    def tries(self) -> int:
        return self.retransmissions_used + 1


def _streams(rng):
    if isinstance(rng, np.random.Generator):
        return rng, rng
    return rng.links, rng.acks


def coordination_round(relay: Sequence[int], probs: Sequence[float], ack_prob: AckProb,
                       rng, max_retries: int = 7) -> CoordinationOutcome:
    """Run tries until some member receives or ``max_retries`` retries are spent.

    ``relay`` lists node ids in priority order, ``probs`` the matching
    reception probabilities. ``ack_prob(a, b)`` gives the probability that
    ``b`` overhears ``a``'s ACK, or ``None`` when no link joins them.
    ``rng`` is a generator or an object with ``links`` and ``acks`` generators.
    """
    n = len(relay)
    if n == 0:
        return CoordinationOutcome(None, 0, 0, frozenset(), 0)
    links, acks = _streams(rng)
    p = np.asarray(probs, dtype=float)
    slots = 0
    first = None
    for attempt in range(max_retries + 1):
        got = np.flatnonzero(links.random(n) < p)
        if len(got) == 0:
            slots += n
            if first is None:
                first = n
            continue
        lead = int(got[0])
        slots += lead
        if first is None:
            first = lead
        forwarders = [relay[lead]]
        for k in got[1:]:
            holder = relay[int(k)]
            heard = False
            for g in forwarders:
                q = ack_prob(g, holder)
                if q is not None and (q >= 1.0 or acks.random() < q):
                    heard = True
                    break
            if not heard:
                forwarders.append(holder)
        return CoordinationOutcome(
            forwarder=forwarders[0],
            slots_waited=slots,
            duplicates=len(forwarders) - 1,
            receivers=frozenset(relay[int(k)] for k in got),
            retransmissions_used=attempt,
            duplicate_forwarders=tuple(forwarders[1:]),
            first_try_slots=first,
        )
    return CoordinationOutcome(None, slots, 0, frozenset(), max_retries, (), first)

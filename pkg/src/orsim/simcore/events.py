from __future__ import annotations

import heapq
import itertools
from typing import Any


class EventQueue:
    """Time-ordered events; equal times pop in insertion order."""

    def __init__(self):
        self.now = 0.0
        self._heap: list[tuple[float, int, str, Any]] = []
        self._seq = itertools.count()

    def __len__(self) -> int:
        return len(self._heap)

    def push(self, time: float, kind: str, payload: Any = None) -> None:
        if time < self.now:
            raise ValueError(f"event at {time} scheduled in the past (now={self.now})")
        heapq.heappush(self._heap, (time, next(self._seq), kind, payload))

    def pop(self) -> tuple[float, str, Any]:
        time, _, kind, payload = heapq.heappop(self._heap)
        self.now = time
        return time, kind, payload

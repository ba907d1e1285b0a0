from __future__ import annotations

import numpy as np

STREAMS = ("topology", "traffic", "links", "acks")


class RngStream:
    """Independent named generators derived from one integer seed.

    Topology and traffic draws never depend on which routing policy runs, so
    policies compared under the same seed see the same network and flows.
    """

    def __init__(self, seed: int):
        self.seed = int(seed)
        children = np.random.SeedSequence(self.seed).spawn(len(STREAMS))
        self._gens = {name: np.random.default_rng(c) for name, c in zip(STREAMS, children)}

    def __getattr__(self, name: str) -> np.random.Generator:
        try:
            return self.__dict__["_gens"][name]
        except KeyError:
            raise AttributeError(name) from None

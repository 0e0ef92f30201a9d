"""Eviction policies driven one request at a time.

Every policy exposes ``access(t, page) -> hit`` and the resident set
``cache``, so the robust combiner can run several of them side by side.
"""

from __future__ import annotations

from collections import OrderedDict
from typing import Sequence

import numpy as np

from .traces import INF, RequestTrace, next_arrivals


class CachePolicy:
    name = "policy"

    def __init__(self, k: int):
        if k < 1:
            raise ValueError("cache size must be positive")
        self.k = k
        self.cache: set[int] = set()
        self.misses = 0
        self.evictions: list[tuple[int, int]] = []  # (time, evicted page)

    def access(self, t: int, page: int) -> bool:
        if page in self.cache:
            self.on_hit(t, page)
            return True
        self.misses += 1
        if len(self.cache) >= self.k:
            victim = self.victim(t, page)
            self.cache.remove(victim)
            self.evictions.append((t, victim))
            self.on_evict(victim)
        self.cache.add(page)
        self.on_insert(t, page)
        return False

    def on_hit(self, t: int, page: int) -> None:
        pass

    def on_insert(self, t: int, page: int) -> None:
        self.on_hit(t, page)

    def on_evict(self, page: int) -> None:
        pass

    def victim(self, t: int, page: int) -> int:
        raise NotImplementedError


class FurthestInFuture(CachePolicy):
    """Evict the resident page whose (true or predicted) next request is latest.

    ``times[t]`` is the next-arrival time attached to the request at ``t``.
    Ties go to the smallest page id.  With ``discard_passed`` a page whose
    predicted time is already in the past is treated as never returning.
    """

    name = "fif"

    def __init__(self, k: int, times: Sequence[float], discard_passed: bool = False):
        super().__init__(k)
        self.times = np.asarray(times, dtype=np.float64)
        self.discard_passed = discard_passed
        self.key: dict[int, float] = {}

    def on_hit(self, t: int, page: int) -> None:
        self.key[page] = float(self.times[t])

    def on_evict(self, page: int) -> None:
        del self.key[page]

    def victim(self, t: int, page: int) -> int:
        def rank(p):
            when = self.key[p]
            if self.discard_passed and when <= t:
                when = INF
            return (when, -p)
        return max(self.cache, key=rank)


class LRU(CachePolicy):
    name = "lru"

    def __init__(self, k: int):
        super().__init__(k)
        self.order: OrderedDict[int, None] = OrderedDict()

    def on_hit(self, t: int, page: int) -> None:
        self.order[page] = None
        self.order.move_to_end(page)

    def on_evict(self, page: int) -> None:
        del self.order[page]

    def victim(self, t: int, page: int) -> int:
        return next(iter(self.order))


def belady(k: int, requests: Sequence[int]) -> FurthestInFuture:
    pol = FurthestInFuture(k, next_arrivals(requests))
    pol.name = "belady"
    return pol


def pfif(k: int, predictions: Sequence[float], discard_passed: bool = False) -> FurthestInFuture:
    pol = FurthestInFuture(k, predictions, discard_passed)
    pol.name = "pfif"
    return pol


def simulate(policy: CachePolicy, requests: Sequence[int]) -> CachePolicy:
    access = policy.access
    for t, p in enumerate(np.asarray(requests).tolist()):
        access(t, p)
    return policy


def _requests(trace) -> np.ndarray:
    return trace.requests if isinstance(trace, RequestTrace) else np.asarray(trace)


def run_belady(trace, k: int) -> CachePolicy:
    """Offline optimum; ``.misses`` and ``.evictions`` hold the result."""
    reqs = _requests(trace)
    return simulate(belady(k, reqs), reqs)


def run_pfif(trace, k: int, predictions: Sequence[float], discard_passed: bool = False) -> int:
    return simulate(pfif(k, predictions, discard_passed), _requests(trace)).misses


def run_lru(trace, k: int) -> int:
    return simulate(LRU(k), _requests(trace)).misses

"""Follow-the-better combiner over two eviction policies, plus eta / OPT.

Both component policies run in the background on the full trace.  The
combined cache follows one of them and switches as soon as the other's
cumulative miss count drops below half the followed one's
(``SWITCH_FACTOR``).  After a switch the cache converges lazily: on a miss it
evicts a page that the followed policy does not hold, so resynchronising
costs at most ``k`` extra misses per switch.

With every policy paying the first (compulsory) miss, this gives
``misses <= 3 * min(A, B) + 1 + k * switches`` and
``switches <= log2(max(A, B))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .policies import CachePolicy, run_belady
from .traces import RequestTrace, finite_times, next_arrivals

SWITCH_FACTOR = 2


@dataclass
class CombinedRun:
    misses: int
    misses_a: int
    misses_b: int
    switches: int


def run_combined(trace, k: int, alg_a: CachePolicy, alg_b: CachePolicy) -> CombinedRun:
    """``alg_a`` and ``alg_b`` must be fresh policy instances of capacity ``k``."""
    if alg_a.k != k or alg_b.k != k:
        raise ValueError("component policies must have capacity k")
    reqs = trace.requests if isinstance(trace, RequestTrace) else np.asarray(trace)
    algs = (alg_a, alg_b)
    follow = 0
    cache: set[int] = set()
    misses = switches = 0
    for t, p in enumerate(reqs.tolist()):
        alg_a.access(t, p)
        alg_b.access(t, p)
        other = 1 - follow
        if SWITCH_FACTOR * algs[other].misses < algs[follow].misses:
            follow = other
            switches += 1
        if p in cache:
            continue
        misses += 1
        if len(cache) >= k:
            target = algs[follow].cache
            cache.remove(min(q for q in cache if q not in target))
        cache.add(p)
    return CombinedRun(misses, alg_a.misses, alg_b.misses, switches)


def eta(requests: Sequence[int], predictions: Sequence[float]) -> float:
    """Sum over requests of ``|h(t) - next(t)|``, with ``inf`` read as the trace length."""
    n = len(requests)
    truth = finite_times(next_arrivals(requests), n)
    pred = finite_times(np.asarray(predictions, dtype=np.float64), n)
    return float(np.abs(pred - truth).sum())


def eta_over_opt(trace, k: int, predictions: Sequence[float]) -> float:
    """Prediction error normalised by the optimal (Belady) miss count, compulsory misses included.

    OPT is only zero on an empty trace; then the result is 0 when the error is
    0 and ``inf`` otherwise.
    """
    reqs = trace.requests if isinstance(trace, RequestTrace) else np.asarray(trace)
    err = eta(reqs, predictions)
    opt = run_belady(reqs, k).misses
    if opt == 0:
        return 0.0 if err == 0 else math.inf
    return err / opt

"""Search in a sorted array starting from a predicted position.

``hinted_find`` probes the hint, gallops outward with offsets 1, 2, 4, ...
until the query is bracketed, then binary-searches the bracket.  With
``eta = |hint - t(q)|`` the probe count is at most
``2 * ceil(log2(eta + 1)) + PROBE_SLACK``; a bad hint therefore costs no more
than ``2 * ceil(log2 n) + PROBE_SLACK`` probes.

``t(q)`` is the index of the first occurrence of ``q`` when present, else the
index of the largest element smaller than ``q`` (0 if there is none).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Sequence

PROBE_SLACK = 4


@dataclass(frozen=True)
class SearchOutcome:
    found: bool
    index: int  # match index, or insertion rank when not found
    probes: int


class _Probe:
    __slots__ = ("values", "count")

    def __init__(self, values: Sequence):
        self.values = values
        self.count = 0

    def __call__(self, i: int) -> Any:
        self.count += 1
        return self.values[i]


def _bisect(probe: _Probe, query, lo: int, hi: int, hi_val) -> tuple[int, Any]:
    # invariant: A[lo] < query (or lo == -1), A[hi] >= query (or hi == n)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        v = probe(mid)
        if v < query:
            lo = mid
        else:
            hi, hi_val = mid, v
    return hi, hi_val


def _outcome(probe: _Probe, query, rank: int, rank_val, n: int) -> SearchOutcome:
    found = rank < n and rank_val == query
    return SearchOutcome(found, rank, probe.count)


def binary_find(values: Sequence, query) -> SearchOutcome:
    """Lowest index holding ``query``; probes <= ceil(log2(n + 1))."""
    n = len(values)
    if n == 0:
        raise ValueError("array must be non-empty")
    probe = _Probe(values)
    rank, rank_val = _bisect(probe, query, -1, n, None)
    return _outcome(probe, query, rank, rank_val, n)


def hinted_find(values: Sequence, query, hint: int) -> SearchOutcome:
    n = len(values)
    if n == 0:
        raise ValueError("array must be non-empty")
    hint = min(max(int(hint), 0), n - 1)
    probe = _Probe(values)
    v = probe(hint)
    if v < query:
        lo, hi, hi_val = hint, n, None
        off = 1
        while lo < n - 1:
            j = min(hint + off, n - 1)
            w = probe(j)
            if w >= query:
                hi, hi_val = j, w
                break
            lo = j
            off *= 2
    else:
        lo, hi, hi_val = -1, hint, v
        off = 1
        while hi > 0:
            j = max(hint - off, 0)
            w = probe(j)
            if w < query:
                lo = j
                break
            hi, hi_val = j, w
            off *= 2
    rank, rank_val = _bisect(probe, query, lo, hi, hi_val)
    return _outcome(probe, query, rank, rank_val, n)


def true_position(values: Sequence, query) -> int:
    """``t(q)``: first index of ``q``, else the largest index holding a smaller key."""
    rank = binary_find(values, query)
    if rank.found:
        return rank.index
    return max(rank.index - 1, 0)


def probe_bound(eta: int) -> int:
    return 2 * math.ceil(math.log2(eta + 1)) + PROBE_SLACK

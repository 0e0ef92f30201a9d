"""Marking algorithms with phase, clean-element and eviction-chain accounting.

A phase ends as soon as ``k`` distinct pages have been requested (and hence
marked) in it; the marks are then cleared and the next request opens a new
phase.  A page is *clean* in phase ``i`` if it was not requested in phase
``i - 1`` and *stale* otherwise.

Eviction chains: a clean miss starts a chain of length 1.  If the page it
evicted is requested later in the phase, that stale miss extends the same
chain by one and passes the chain on to whatever it evicts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..predictions import make_rng
from .policies import CachePolicy, simulate
from .traces import RequestTrace


@dataclass
class Phase:
    start: int
    end: int = -1  # index of the last request in the phase
    pages: set = field(default_factory=set)
    clean: set = field(default_factory=set)
    stale: set = field(default_factory=set)
    chain_lengths: list = field(default_factory=list)


@dataclass
class PhaseLedger:
    phases: list[Phase] = field(default_factory=list)

    @property
    def clean_counts(self) -> list[int]:
        return [len(p.clean) for p in self.phases]

    @property
    def boundaries(self) -> list[tuple[int, int]]:
        return [(p.start, p.end) for p in self.phases]

    @property
    def chain_lengths(self) -> list[int]:
        return [c for p in self.phases for c in p.chain_lengths]

    def mean_chain_length(self, skip_first: bool = True) -> float:
        """Mean over chains; phase 1 (cold cache, no evictions) is skipped by default."""
        phases = self.phases[1:] if skip_first else self.phases
        chains = [c for p in phases for c in p.chain_lengths]
        return float(np.mean(chains)) if chains else 0.0


class Marker(CachePolicy):
    """Marking algorithm.

    ``rule="random"`` evicts a uniformly random unmarked page on every miss.
    ``rule="predictive"`` evicts, on a clean miss, the unmarked page predicted
    to return furthest in the future (ties to the smallest id), and a uniformly
    random unmarked page on a stale miss.  ``predictions[t]`` is the predicted
    next-arrival time made at request ``t``.
    """

    def __init__(self, k: int, rule: str = "random", predictions: Sequence[float] | None = None,
                 seed: int = 0):
        super().__init__(k)
        if rule not in ("random", "predictive"):
            raise ValueError(f"unknown marking rule {rule!r}")
        if rule == "predictive" and predictions is None:
            raise ValueError("predictive rule needs predictions")
        self.name = "marker" if rule == "random" else "predictive_marker"
        self.rule = rule
        self.predictions = None if predictions is None else np.asarray(predictions, np.float64)
        self.rng = make_rng(seed)
        self.marked: set[int] = set()
        self.unmarked: list[int] = []
        self._slot: dict[int, int] = {}
        self.predicted: dict[int, float] = {}
        self.ledger = PhaseLedger()
        self._prev_pages: set[int] = set()
        self._phase: Phase | None = None
        self._chain_of: dict[int, int] = {}  # evicted page -> chain index in current phase
        self._arrival_clean = False
        self._current_chain = -1

    # unmarked list with O(1) removal
    def _unmark_add(self, page: int) -> None:
        self._slot[page] = len(self.unmarked)
        self.unmarked.append(page)

    def _unmark_remove(self, page: int) -> None:
        i = self._slot.pop(page)
        last = self.unmarked.pop()
        if last != page:
            self.unmarked[i] = last
            self._slot[last] = i

    def _end_phase(self, t: int) -> None:
        self._phase.end = t
        self._prev_pages = self._phase.pages
        self._phase = None
        for p in self.marked:
            self._unmark_add(p)
        self.marked = set()

    def access(self, t: int, page: int) -> bool:
        if self._phase is None:
            self._phase = Phase(start=t)
            self.ledger.phases.append(self._phase)
            self._chain_of = {}
        if page not in self.cache and len(self.cache) >= self.k and not self.unmarked:
            # every resident page is marked: the phase boundary has been crossed
            self._end_phase(t - 1)
            return self.access(t, page)
        phase = self._phase
        if page not in phase.pages:
            phase.pages.add(page)
            if page in self._prev_pages:
                phase.stale.add(page)
                self._arrival_clean = False
            else:
                phase.clean.add(page)
                self._arrival_clean = True
        miss = page not in self.cache
        if miss:
            if self._arrival_clean:
                phase.chain_lengths.append(1)
                self._current_chain = len(phase.chain_lengths) - 1
            else:
                self._current_chain = self._chain_of.pop(page)
                phase.chain_lengths[self._current_chain] += 1
        hit = super().access(t, page)
        if self.predictions is not None:
            self.predicted[page] = float(self.predictions[t])
        if len(self.marked) == self.k:
            self._end_phase(t)
        return hit

    def on_hit(self, t: int, page: int) -> None:
        if page not in self.marked:
            if page in self._slot:
                self._unmark_remove(page)
            self.marked.add(page)

    def on_evict(self, page: int) -> None:
        self._unmark_remove(page)
        self.predicted.pop(page, None)
        self._chain_of[page] = self._current_chain

    def victim(self, t: int, page: int) -> int:
        if self.rule == "predictive" and self._arrival_clean:
            return max(self.unmarked, key=lambda p: (self.predicted[p], -p))
        return self.unmarked[int(self.rng.integers(len(self.unmarked)))]

    def finish(self, last_t: int) -> PhaseLedger:
        if self._phase is not None:
            self._phase.end = last_t
        return self.ledger


@dataclass
class MarkerRun:
    misses: int
    ledger: PhaseLedger


def run_marker(trace, k: int, rule: str = "random", predictions: Sequence[float] | None = None,
               seed: int = 0) -> MarkerRun:
    reqs = trace.requests if isinstance(trace, RequestTrace) else np.asarray(trace)
    pol = simulate(Marker(k, rule, predictions, seed), reqs)
    return MarkerRun(pol.misses, pol.finish(len(reqs) - 1))


def clean_lower_bound(ledger: PhaseLedger) -> float:
    """Half the total number of clean pages: a lower bound on any algorithm's misses."""
    return 0.5 * sum(ledger.clean_counts)

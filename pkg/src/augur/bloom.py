"""Standard, learned and sandwiched Bloom filters.

The learned score function is synthetic: each element gets a deterministic
pseudo-uniform value from a seeded hash, pushed through the inverse CDF of a
Beta distribution chosen by membership.  Nothing is trained.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Hashable, Iterable, Protocol

import numpy as np
from scipy import stats

from ._hashing import item_keys, seeded_hash, unit_interval
from .predictions import derive_seed


def fpr_theoretical(m: int, n: int, k: int) -> float:
    """``(1 - exp(-k n / m)) ** k``."""
    if m < 1 or k < 1 or n < 0:
        raise ValueError("need m >= 1, k >= 1, n >= 0")
    return (1.0 - math.exp(-k * n / m)) ** k


def optimal_k(bits_per_key: float) -> int:
    return max(1, round(bits_per_key * math.log(2)))


class BloomFilter:
    def __init__(self, m: int, k: int, seed: int = 0):
        if m < 1 or k < 1:
            raise ValueError("m and k must be positive")
        self.m = m
        self.k = k
        self.n = 0
        self.bits = np.zeros(m, dtype=bool)
        self._seeds = [derive_seed(seed, i) for i in range(k)]

    @classmethod
    def for_keys(cls, n: int, bits_per_key: float, seed: int = 0) -> "BloomFilter":
        m = max(1, round(bits_per_key * n))
        return cls(m, optimal_k(bits_per_key), seed)

    def _positions(self, items: Iterable[Hashable]) -> np.ndarray:
        keys = item_keys(items)
        m = np.uint64(self.m)
        return np.stack([(seeded_hash(keys, s) % m).astype(np.intp) for s in self._seeds])

    def add(self, item: Hashable) -> None:
        self.add_many([item])

    def add_many(self, items: Iterable[Hashable]) -> None:
        items = list(items)
        if items:
            self.bits[self._positions(items).ravel()] = True
        self.n += len(items)

    def query(self, item: Hashable) -> bool:
        return bool(self.query_many([item])[0])

    def query_many(self, items: Iterable[Hashable]) -> np.ndarray:
        items = list(items)
        if not items:
            return np.zeros(0, dtype=bool)
        return self.bits[self._positions(items)].all(axis=0)

    def __contains__(self, item: Hashable) -> bool:
        return self.query(item)

    @property
    def fill_ratio(self) -> float:
        return float(self.bits.mean())

    def fpr_expected(self) -> float:
        return fpr_theoretical(self.m, self.n, self.k)


class ScoreFunction(Protocol):
    representation_size: int

    def scores(self, items: Iterable[Hashable]) -> np.ndarray: ...


@dataclass
class BetaScorer:
    """Members score ~ Beta(*member_ab), everything else ~ Beta(*nonmember_ab)."""

    members: frozenset
    member_ab: tuple[float, float] = (5.0, 1.0)
    nonmember_ab: tuple[float, float] = (1.0, 5.0)
    seed: int = 0
    representation_size: int = 0

    def scores(self, items: Iterable[Hashable]) -> np.ndarray:
        items = list(items)
        u = unit_interval(item_keys(items), self.seed)
        is_member = np.fromiter((x in self.members for x in items), dtype=bool, count=len(items))
        out = stats.beta.ppf(u, *self.nonmember_ab)
        if is_member.any():
            out[is_member] = stats.beta.ppf(u[is_member], *self.member_ab)
        return out

    def nonmember_pass_rate(self, tau: float) -> float:
        return float(stats.beta.sf(tau, *self.nonmember_ab))


def threshold_for_coverage(members: Iterable[Hashable], score: ScoreFunction,
                           coverage: float) -> float:
    """Largest ``tau`` such that at least ``coverage`` of the members score ``>= tau``."""
    if not 0 <= coverage <= 1:
        raise ValueError("coverage must lie in [0, 1]")
    s = np.sort(score.scores(members))[::-1]
    if coverage == 0 or len(s) == 0:
        return 1.0
    return float(s[math.ceil(coverage * len(s)) - 1])


class LearnedBloom:
    """Score prefilter at threshold ``tau`` with a backup filter over the rejected members."""

    def __init__(self, members: Iterable[Hashable], score: ScoreFunction, tau: float,
                 bits_per_key: float = 8.0, seed: int = 0):
        if not 0 <= tau <= 1:
            raise ValueError("tau must lie in [0, 1]")
        members = list(members)
        self.score = score
        self.tau = tau
        s = score.scores(members) if members else np.zeros(0)
        self.backup_keys = [x for x, v in zip(members, s) if v < tau]
        self.backup = BloomFilter.for_keys(len(self.backup_keys), bits_per_key, seed)
        self.backup.add_many(self.backup_keys)

    @property
    def bits_total(self) -> int:
        return self.backup.m + self.score.representation_size

    def query_many(self, items: Iterable[Hashable]) -> np.ndarray:
        items = list(items)
        passed = self.score.scores(items) >= self.tau
        rest = ~passed
        if self.backup_keys and rest.any():
            idx = np.flatnonzero(rest)
            passed[idx] = self.backup.query_many([items[i] for i in idx])
        return passed

    def query(self, item: Hashable) -> bool:
        return bool(self.query_many([item])[0])


class SandwichedBloom:
    """Initial Bloom filter over all members, then a learned Bloom filter."""

    def __init__(self, members: Iterable[Hashable], score: ScoreFunction, tau: float,
                 initial_bits_per_key: float = 4.0, backup_bits_per_key: float = 4.0,
                 seed: int = 0):
        members = list(members)
        self.initial = BloomFilter.for_keys(len(members), initial_bits_per_key,
                                            derive_seed(seed, 0))
        self.initial.add_many(members)
        self.learned = LearnedBloom(members, score, tau, backup_bits_per_key,
                                    derive_seed(seed, 1))

    @property
    def bits_total(self) -> int:
        return self.initial.m + self.learned.bits_total

    def query_many(self, items: Iterable[Hashable]) -> np.ndarray:
        items = list(items)
        out = self.initial.query_many(items)
        idx = np.flatnonzero(out)
        if len(idx):
            out[idx] = self.learned.query_many([items[i] for i in idx])
        return out

    def query(self, item: Hashable) -> bool:
        return bool(self.query_many([item])[0])


def learned_fpr_expected(lb: LearnedBloom, pass_rate: float) -> float:
    """Non-member FPR of a learned filter, assuming score and hashes are independent."""
    backup = lb.backup.fill_ratio ** lb.backup.k if lb.backup_keys else 0.0
    return pass_rate + (1 - pass_rate) * backup


def sandwiched_fpr_expected(sb: SandwichedBloom, pass_rate: float) -> float:
    first = sb.initial.fill_ratio ** sb.initial.k
    return first * learned_fpr_expected(sb.learned, pass_rate)

"""Count-Min sketch and a learned variant with exact counters for predicted heavy hitters.

Updates are single-writer.  Queries may run concurrently with each other but
not with updates; no locking is done here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable

import numpy as np

from ._hashing import item_key, item_keys, seeded_hash
from .predictions import derive_seed, make_rng


class CountMinSketch:
    """``rows x cols`` counters; each row hashes an item to one column."""

    def __init__(self, rows: int, cols: int, seed: int = 0):
        if rows < 1 or cols < 1:
            raise ValueError("rows and cols must be positive")
        self.rows = rows
        self.cols = cols
        self.seed = seed
        self.row_seeds = [derive_seed(seed, i) for i in range(rows)]
        self.counters = np.zeros((rows, cols), dtype=np.int64)

    @property
    def size(self) -> int:
        return self.rows * self.cols

    def columns(self, keys: np.ndarray) -> np.ndarray:
        """``rows x len(keys)`` column indices."""
        c = np.uint64(self.cols)
        return np.stack([(seeded_hash(keys, s) % c).astype(np.intp) for s in self.row_seeds])

    def update(self, item: Hashable, delta: int = 1) -> None:
        if delta < 1:
            raise ValueError("delta must be a positive integer")
        cols = self.columns(np.array([item_key(item)], dtype=np.uint64))[:, 0]
        self.counters[np.arange(self.rows), cols] += delta

    def update_many(self, items: Iterable[Hashable]) -> None:
        """Add 1 for each item in the stream."""
        cols = self.columns(item_keys(items))
        for r in range(self.rows):
            self.counters[r] += np.bincount(cols[r], minlength=self.cols)

    def query(self, item: Hashable) -> int:
        cols = self.columns(np.array([item_key(item)], dtype=np.uint64))[:, 0]
        return int(self.counters[np.arange(self.rows), cols].min())

    def query_many(self, items: Iterable[Hashable]) -> np.ndarray:
        cols = self.columns(item_keys(items))
        return self.counters[np.arange(self.rows)[:, None], cols].min(axis=0)


class LearnedCountMin:
    """Exact counters for a fixed predicted-heavy set, Count-Min for the rest."""

    def __init__(self, rows: int, cols: int, heavy: Iterable[Hashable], seed: int = 0):
        self.base = CountMinSketch(rows, cols, seed)
        self.heavy_table: dict[Hashable, int] = {x: 0 for x in heavy}
        self._heavy_keys = np.array(sorted(item_key(x) for x in self.heavy_table),
                                    dtype=np.uint64)

    @property
    def size(self) -> int:
        """Counters used, dedicated slots included."""
        return self.base.size + len(self.heavy_table)

    def update(self, item: Hashable, delta: int = 1) -> None:
        if item in self.heavy_table:
            if delta < 1:
                raise ValueError("delta must be a positive integer")
            self.heavy_table[item] += delta
        else:
            self.base.update(item, delta)

    def update_many(self, items: Iterable[Hashable]) -> None:
        keys = item_keys(items)
        heavy = np.isin(keys, self._heavy_keys)
        if heavy.any():
            hk, counts = np.unique(keys[heavy], return_counts=True)
            by_key = {item_key(x): x for x in self.heavy_table}
            for k, n in zip(hk.tolist(), counts.tolist()):
                self.heavy_table[by_key[k]] += n
        self.base.update_many(keys[~heavy])

    def query(self, item: Hashable) -> int:
        if item in self.heavy_table:
            return self.heavy_table[item]
        return self.base.query(item)

    def query_many(self, items: Iterable[Hashable]) -> np.ndarray:
        items = list(items)
        out = self.base.query_many(items)
        for i, x in enumerate(items):
            if x in self.heavy_table:
                out[i] = self.heavy_table[x]
        return out


@dataclass(frozen=True)
class ZipfStream:
    """Items ``0..N-1``; item ``i`` has probability proportional to ``(i + 1) ** -z``."""

    universe: int
    exponent: float
    length: int
    seed: int = 0

    @property
    def probabilities(self) -> np.ndarray:
        w = np.arange(1, self.universe + 1, dtype=np.float64) ** -self.exponent
        return w / w.sum()

    def sample(self) -> np.ndarray:
        rng = make_rng(self.seed)
        return rng.choice(self.universe, size=self.length, p=self.probabilities)


def predicted_heavy(counts: np.ndarray, size: int, false_negative_rate: float = 0.0,
                    seed: int = 0) -> list[int]:
    """Oracle heavy-hitter predictor: the true top-``size`` items, each dropped
    with probability ``false_negative_rate`` and replaced by a random non-top item."""
    order = np.argsort(-counts, kind="stable")
    top = order[:size]
    if false_negative_rate <= 0:
        return sorted(top.tolist())
    rng = make_rng(seed)
    keep = rng.random(size) >= false_negative_rate
    rest = order[size:]
    swaps = rng.choice(rest, size=int((~keep).sum()), replace=False) if len(rest) else []
    return sorted(top[keep].tolist() + list(np.asarray(swaps).tolist()))


def space_matched_cols(rows: int, cols: int, heavy_size: int) -> int:
    """Columns for the learned base so that ``rows * c' + heavy_size <= rows * cols``."""
    c = (rows * cols - heavy_size) // rows
    if c < 1:
        raise ValueError("heavy set does not fit in the space budget")
    return c


@dataclass
class SketchComparison:
    true_counts: np.ndarray
    est_plain: np.ndarray
    est_learned: np.ndarray
    plain_size: int
    learned_size: int

    @property
    def mae_plain(self) -> float:
        return float(np.mean(self.est_plain - self.true_counts))

    @property
    def mae_learned(self) -> float:
        return float(np.mean(self.est_learned - self.true_counts))


def compare_on_zipf(universe: int = 1000, exponent: float = 1.1, length: int = 100_000,
                    rows: int = 4, cols: int = 64, heavy_size: int = 50,
                    false_negative_rate: float = 0.0, seed: int = 0) -> SketchComparison:
    """Plain vs learned Count-Min on one Zipf stream at equal total space.

    Both sketches share hash seeds.  Errors are over every item in the universe,
    ordered by true rank.  Count-Min never underestimates, so the absolute error
    is ``estimate - true``.
    """
    stream = ZipfStream(universe, exponent, length, derive_seed(seed, 0)).sample()
    counts = np.bincount(stream, minlength=universe)
    heavy = predicted_heavy(counts, heavy_size, false_negative_rate, derive_seed(seed, 1))
    hash_seed = derive_seed(seed, 2)
    plain = CountMinSketch(rows, cols, hash_seed)
    plain.update_many(stream)
    learned = LearnedCountMin(rows, space_matched_cols(rows, cols, heavy_size), heavy, hash_seed)
    learned.update_many(stream)
    order = np.argsort(-counts, kind="stable")
    return SketchComparison(counts[order], plain.query_many(order), learned.query_many(order),
                            plain.size, learned.size)

"""Seeded 64-bit mixing hashes shared by the sketch and filter structures."""

from __future__ import annotations

import hashlib
from typing import Hashable, Iterable

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    x = (x + _GOLDEN) & _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


def splitmix64_array(x: np.ndarray) -> np.ndarray:
    """Vectorised :func:`splitmix64` over a uint64 array (wrapping arithmetic)."""
    x = np.asarray(x, dtype=np.uint64)
    with np.errstate(over="ignore"):
        x = x + np.uint64(_GOLDEN)
        x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return x ^ (x >> np.uint64(31))


def item_key(item: Hashable) -> int:
    """Map an item to a stable 64-bit integer.

    Python's ``hash`` is salted per process for str/bytes, so anything that is
    not an integer goes through blake2b of its repr instead.
    """
    if isinstance(item, (int, np.integer)) and not isinstance(item, bool):
        return int(item) & _MASK
    digest = hashlib.blake2b(repr(item).encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def item_keys(items: Iterable[Hashable]) -> np.ndarray:
    if isinstance(items, np.ndarray) and items.dtype.kind in "iu":
        return items.astype(np.uint64)
    items = list(items)
    return np.fromiter((item_key(x) for x in items), dtype=np.uint64, count=len(items))


def seeded_hash(keys: np.ndarray, seed: int) -> np.ndarray:
    """Hash uint64 keys under a seed; distinct seeds give independent-looking hashes."""
    salt = np.uint64(splitmix64(seed & _MASK))
    return splitmix64_array(np.asarray(keys, dtype=np.uint64) ^ salt)


def unit_interval(keys: np.ndarray, seed: int) -> np.ndarray:
    """Deterministic pseudo-uniform value in (0, 1) per key."""
    h = seeded_hash(keys, seed) >> np.uint64(11)
    return (h.astype(np.float64) + 0.5) / float(1 << 53)

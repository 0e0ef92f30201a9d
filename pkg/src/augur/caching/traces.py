"""Request traces, next-arrival annotations and trace generators."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from ..predictions import NoiseModel, make_rng

INF = math.inf


@dataclass
class RequestTrace:
    requests: np.ndarray
    universe: int

    def __post_init__(self):
        self.requests = np.asarray(self.requests, dtype=np.int64)
        if self.requests.size and (self.requests.min() < 0 or self.requests.max() >= self.universe):
            raise ValueError("page ids must lie in [0, universe)")

    @classmethod
    def of(cls, requests: Sequence[int]) -> "RequestTrace":
        requests = list(requests)
        return cls(np.array(requests, dtype=np.int64), max(requests, default=-1) + 1)

    def __len__(self) -> int:
        return len(self.requests)

    def next_arrivals(self) -> np.ndarray:
        return next_arrivals(self.requests)


def next_arrivals(requests: Sequence[int]) -> np.ndarray:
    """``next[t]``: the next time the page requested at ``t`` is requested again, else ``inf``."""
    out = np.full(len(requests), INF)
    seen: dict[int, int] = {}
    for t in range(len(requests) - 1, -1, -1):
        p = int(requests[t])
        if p in seen:
            out[t] = seen[p]
        seen[p] = t
    return out


def finite_times(times: np.ndarray, horizon: int) -> np.ndarray:
    """Replace the ``inf`` sentinel by ``horizon`` (the trace length) for error arithmetic."""
    return np.where(np.isinf(times), float(horizon), times)


def noisy_predictions(requests: Sequence[int], noise: NoiseModel) -> np.ndarray:
    """Predicted next arrivals: the true gap ``next[t] - t`` passed through ``noise``.

    Pages that never return keep an ``inf`` prediction.
    """
    nxt = next_arrivals(requests)
    t = np.arange(len(nxt), dtype=np.float64)
    gaps = np.where(np.isinf(nxt), 0.0, nxt - t)
    noisy = noise.sample(gaps)
    return np.where(np.isinf(nxt), INF, t + noisy)


def reversed_predictions(requests: Sequence[int]) -> np.ndarray:
    """Adversarial predictions: soon-returning pages are predicted late and vice versa."""
    nxt = finite_times(next_arrivals(requests), len(requests))
    t = np.arange(len(nxt), dtype=np.float64)
    gap = nxt - t
    return t + (len(requests) - gap)


def random_trace(universe: int, length: int, seed: int = 0) -> RequestTrace:
    rng = make_rng(seed)
    return RequestTrace(rng.integers(0, universe, size=length), universe)


def zipf_trace(universe: int, length: int, exponent: float = 1.0, seed: int = 0) -> RequestTrace:
    rng = make_rng(seed)
    w = np.arange(1, universe + 1, dtype=np.float64) ** -exponent
    return RequestTrace(rng.choice(universe, size=length, p=w / w.sum()), universe)


def pfif_adversarial(pairs: int) -> tuple[RequestTrace, np.ndarray]:
    """``c, a, b, a, b, ..., a, b, c`` with ``pairs`` (a, b) pairs.

    Pages: c = 0, a = 1, b = 2.  Predictions are exact for a and b; every
    prediction for c says time 0.  Meant for a cache of size 2.
    """
    requests = [0] + [1, 2] * pairs + [0]
    preds = next_arrivals(requests).copy()
    for t, p in enumerate(requests):
        if p == 0:
            preds[t] = 0.0
    return RequestTrace(np.array(requests), 3), preds


def cyclic_trace(k: int, phases: int) -> RequestTrace:
    """Pages ``0..k`` requested round-robin: every marking phase has one clean page."""
    length = k * phases
    return RequestTrace(np.arange(length) % (k + 1), k + 1)


def write_trace(path: str | Path, requests: Sequence[int],
                predictions: Sequence[float] | None = None) -> None:
    lines = []
    for i, p in enumerate(requests):
        if predictions is None:
            lines.append(f"{int(p)}")
        else:
            h = predictions[i]
            lines.append(f"{int(p)} {'inf' if math.isinf(h) else repr(float(h))}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_trace(path: str | Path) -> tuple[RequestTrace, np.ndarray | None]:
    """Newline-delimited page ids, optionally followed by a predicted next-arrival time."""
    pages: list[int] = []
    preds: list[float] = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.replace(",", " ").split()
        try:
            pages.append(int(parts[0]))
            if len(parts) > 1:
                preds.append(float(parts[1]))
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: cannot parse {line!r}") from exc
    if preds and len(preds) != len(pages):
        raise ValueError(f"{path}: prediction column present on some lines only")
    trace = RequestTrace.of(pages)
    return trace, (np.array(preds) if preds else None)

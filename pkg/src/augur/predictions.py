"""Prediction sources, error metrics and competitive-ratio bookkeeping.

Every predictor in this package is synthetic: a ground-truth value goes in, a
noisy copy comes out.  Randomness comes from numpy's PCG64 generator, seeded
explicitly, so a ``(seed, call index, actual)`` triple always yields the same
prediction on every platform.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class NoiseKind(str, enum.Enum):
    EXACT = "exact"
    UNIFORM_MULTIPLICATIVE = "uniform-multiplicative"
    EXPONENTIAL_MEAN_X = "exponential-mean-x"
    ADDITIVE_UNIFORM = "additive-uniform"
    ADVERSARIAL_CONSTANT = "adversarial-constant"


@dataclass(frozen=True)
class PredictedValue:
    actual: float
    predicted: float

    def __post_init__(self):
        if not (self.actual >= 0 and self.predicted >= 0):
            raise ValueError(f"values must be non-negative, got {self}")

    @property
    def error(self) -> float:
        return abs(self.predicted - self.actual)


def derive_seed(master: int, index: int) -> int:
    """Counter-based child seed: ``SeedSequence(master, spawn_key=(index,))``.

    Children for distinct indices are statistically independent, and the
    mapping does not depend on how many children were drawn before.
    """
    ss = np.random.SeedSequence(master, spawn_key=(index,))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


@dataclass
class NoiseModel:
    """A seeded noise family turning true values into predictions.

    ``param`` means ``alpha`` for uniform-multiplicative, the half-width for
    additive-uniform and the constant for adversarial-constant; it is ignored
    otherwise.  Each call consumes exactly one uniform variate, whatever the
    kind, so streams from different kinds with the same seed stay aligned
    (common random numbers across an ``alpha`` sweep, for instance).
    """

    kind: NoiseKind = NoiseKind.EXACT
    param: float = 0.0
    seed: int = 0
    calls: int = field(default=0, init=False)
    _rng: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        self.kind = NoiseKind(self.kind)
        if self.kind is NoiseKind.UNIFORM_MULTIPLICATIVE and not 0 <= self.param < 1:
            raise ValueError(f"alpha must lie in [0, 1), got {self.param}")
        if self.kind is NoiseKind.ADDITIVE_UNIFORM and self.param < 0:
            raise ValueError(f"width must be non-negative, got {self.param}")
        if self.kind is NoiseKind.ADVERSARIAL_CONSTANT and self.param < 0:
            raise ValueError(f"constant must be non-negative, got {self.param}")
        self._rng = make_rng(self.seed)

    @classmethod
    def parse(cls, text: str, seed: int = 0) -> "NoiseModel":
        """Build from ``"kind"`` or ``"kind:param"``, e.g. ``uniform-multiplicative:0.5``."""
        kind, _, param = text.partition(":")
        return cls(NoiseKind(kind), float(param) if param else 0.0, seed)

    def reseeded(self, seed: int) -> "NoiseModel":
        return NoiseModel(self.kind, self.param, seed)

    def _transform(self, actual: np.ndarray, u: np.ndarray) -> np.ndarray:
        kind = self.kind
        if kind is NoiseKind.EXACT:
            return actual.copy()
        if kind is NoiseKind.UNIFORM_MULTIPLICATIVE:
            return actual * (1.0 - self.param + 2.0 * self.param * u)
        if kind is NoiseKind.EXPONENTIAL_MEAN_X:
            return -actual * np.log1p(-u)
        if kind is NoiseKind.ADDITIVE_UNIFORM:
            return np.maximum(0.0, actual + self.param * (2.0 * u - 1.0))
        return np.full_like(actual, self.param)

    def sample(self, actual: Sequence[float] | np.ndarray) -> np.ndarray:
        """Predictions for a batch; identical to calling :func:`predict` in a loop."""
        actual = np.asarray(actual, dtype=np.float64)
        if np.any(actual < 0):
            raise ValueError("actual values must be non-negative")
        u = self._rng.random(actual.shape)
        self.calls += actual.size
        return self._transform(actual, u)


def predict(model: NoiseModel, actual: float) -> PredictedValue:
    if actual < 0:
        raise ValueError(f"actual must be non-negative, got {actual}")
    y = float(model.sample(np.array([actual]))[0])
    return PredictedValue(float(actual), y)


def eta_l1(pairs: Iterable[PredictedValue]) -> float:
    """Sum of absolute prediction errors."""
    return math.fsum(p.error for p in pairs)


def _merge_count(a: list) -> tuple[list, int]:
    n = len(a)
    if n <= 1:
        return a, 0
    left, x = _merge_count(a[: n // 2])
    right, y = _merge_count(a[n // 2:])
    merged = []
    inv = x + y
    i = j = 0
    while i < len(left) and j < len(right):
        if left[i] <= right[j]:
            merged.append(left[i])
            i += 1
        else:
            merged.append(right[j])
            inv += len(left) - i
            j += 1
    merged.extend(left[i:])
    merged.extend(right[j:])
    return merged, inv


def _positions(predicted_order: Sequence, true_order: Sequence) -> list[int]:
    if len(predicted_order) != len(true_order):
        raise ValueError("orders have different lengths")
    pos = {v: i for i, v in enumerate(true_order)}
    if len(pos) != len(true_order) or set(pos) != set(predicted_order):
        raise ValueError("inputs are not permutations of the same set")
    return [pos[v] for v in predicted_order]


def count_inversions(predicted_order: Sequence, true_order: Sequence) -> int:
    """Number of pairs ordered differently by the two permutations, O(n log n)."""
    return _merge_count(_positions(predicted_order, true_order))[1]


def footrule(predicted_order: Sequence, true_order: Sequence) -> int:
    """Total displacement (Spearman's footrule) between two permutations."""
    return sum(abs(i - p) for i, p in enumerate(_positions(predicted_order, true_order)))


@dataclass(frozen=True)
class RatioReport:
    algorithm_cost: float
    opt_cost: float
    error_eta: float

    def __post_init__(self):
        if self.opt_cost <= 0:
            raise ValueError("opt_cost must be positive")
        if self.algorithm_cost < 0 or self.error_eta < 0:
            raise ValueError("costs and errors must be non-negative")

    @property
    def ratio(self) -> float:
        return self.algorithm_cost / self.opt_cost

    @property
    def error_over_opt(self) -> float:
        return self.error_eta / self.opt_cost

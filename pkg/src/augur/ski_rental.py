"""Ski rental with a predicted season length.

Renting costs $1 per day and buying costs ``b``.  A policy fixes the day on
which the skier buys; rent is paid for every day strictly before that day.
``lambda_robust`` buys on day ``ceil(lam * b)`` when the prediction exceeds
``b`` and on day ``ceil(b / lam)`` otherwise.

Days and dollars are integers.  ``lam`` is converted to an exact fraction
before taking ceilings so that, e.g., ``ceil(0.3 * 10)`` is 3 and not 4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

NEVER = math.inf


def _as_fraction(lam: float) -> Fraction:
    return Fraction(lam).limit_denominator(10**6)


def _check_lambda(lam: float) -> None:
    if not 0 < lam <= 1:
        raise ValueError(f"lambda must lie in (0, 1], got {lam}")


@dataclass(frozen=True)
class SkiInstance:
    b: int
    d_star: int
    predicted_days: int = 1

    def __post_init__(self):
        if self.b < 1 or self.d_star < 1 or self.predicted_days < 0:
            raise ValueError(f"invalid instance {self}")

    @property
    def opt(self) -> int:
        return min(self.d_star, self.b)

    @property
    def eta(self) -> int:
        return abs(self.predicted_days - self.d_star)


@dataclass(frozen=True)
class RentThenBuy:
    day: float  # NEVER to rent forever

    def buy_day(self, inst: SkiInstance) -> float:
        return self.day


@dataclass(frozen=True)
class TrustPrediction:
    """Buy on day 1 if the prediction exceeds ``b``, otherwise never buy."""

    def buy_day(self, inst: SkiInstance) -> float:
        return 1 if inst.predicted_days > inst.b else NEVER


@dataclass(frozen=True)
class LambdaRobust:
    lam: float

    def __post_init__(self):
        _check_lambda(self.lam)

    def buy_day(self, inst: SkiInstance) -> int:
        lam = _as_fraction(self.lam)
        if inst.predicted_days > inst.b:
            return max(1, math.ceil(lam * inst.b))
        return math.ceil(inst.b / lam)


SkiPolicy = RentThenBuy | TrustPrediction | LambdaRobust


def cost(inst: SkiInstance, policy: SkiPolicy) -> int:
    day = policy.buy_day(inst)
    if inst.d_star < day:
        return inst.d_star
    return int(day) - 1 + inst.b


def competitive_ratio_bound(b: int, d_star: int, h: int, lam: float) -> float:
    """``1 + min(1/lam, lam + eta / ((1 - lam) * OPT))``; at ``lam == 1`` only the first term applies."""
    _check_lambda(lam)
    opt = min(d_star, b)
    if opt < 1:
        raise ValueError("OPT must be at least 1")
    if lam == 1:
        return 2.0
    eta = abs(h - d_star)
    return 1 + min(1 / lam, lam + eta / ((1 - lam) * opt))


def lambda_robust_grid(b: np.ndarray, d_star: np.ndarray, h: np.ndarray, lam: float):
    """Vectorised cost, OPT and bound for broadcastable integer arrays.

    Returns ``(cost, opt, bound)`` arrays with the broadcast shape.
    """
    _check_lambda(lam)
    b, d_star, h = np.broadcast_arrays(np.asarray(b, np.int64), np.asarray(d_star, np.int64),
                                       np.asarray(h, np.int64))
    f = _as_fraction(lam)
    # exact integer ceilings: ceil(p*b/q) and ceil(q*b/p)
    early = -((-f.numerator * b) // f.denominator)
    early = np.maximum(early, 1)
    late = -((-f.denominator * b) // f.numerator)
    day = np.where(h > b, early, late)
    total = np.where(d_star < day, d_star, day - 1 + b)
    opt = np.minimum(d_star, b)
    if lam == 1:
        bound = np.full(total.shape, 2.0)
    else:
        eta = np.abs(h - d_star)
        bound = 1 + np.minimum(1 / lam, lam + eta / ((1 - lam) * opt))
    return total, opt, bound


def verify_grid(b_max: int = 50, d_max: int = 200, h_max: int = 200,
                lambdas=(0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9), tol: float = 1e-9):
    """Exhaustive check of cost/OPT against the bound.

    Returns ``(violations, worst_slack)`` where ``worst_slack`` is the largest
    ``cost/OPT - bound`` seen (negative when the bound always holds strictly).
    """
    b = np.arange(1, b_max + 1)[:, None, None]
    d = np.arange(1, d_max + 1)[None, :, None]
    h = np.arange(1, h_max + 1)[None, None, :]
    violations = 0
    worst = -math.inf
    for lam in lambdas:
        total, opt, bound = lambda_robust_grid(b, d, h, lam)
        slack = total / opt - bound
        violations += int(np.count_nonzero(slack > tol))
        worst = max(worst, float(slack.max()))
    return violations, worst

"""M/G/1 queue simulation under size-based and prediction-based policies.

One event loop covers every policy.  Each job has a base priority (arrival
time, true size or predicted size); SRPT-type policies subtract the service
already received.  Lower keys go first, ties go to the earlier arrival.
Non-preemptive policies choose only when the server frees up.  Preemptive
ones compare an arriving job against the running one and preempt on a
strictly smaller key.  A completion and an arrival at the same instant are
processed completion first.

SPRPT keys are ``predicted - attained`` and may go negative; such a job is
simply the most urgent one.

Trials get independent seeds ``derive_seed(seed, trial)``.  Within a trial,
the arrival, service and prediction streams have their own child seeds, so
every policy and every noise level sees the same arrival/service sample path.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numba import njit

from .distributions import (JointDensity, ServiceDistribution, UniformMultiplicative, quad)
from .predictions import NoiseKind, NoiseModel, derive_seed, make_rng


class Policy(str, enum.Enum):
    FCFS = "fcfs"
    SJF = "sjf"
    SPJF = "spjf"
    PSJF = "psjf"
    PSPJF = "pspjf"
    SRPT = "srpt"
    SPRPT = "sprpt"

    @property
    def uses_prediction(self) -> bool:
        return self in (Policy.SPJF, Policy.PSPJF, Policy.SPRPT)

    @property
    def preemptive(self) -> bool:
        return self in (Policy.PSJF, Policy.PSPJF, Policy.SRPT, Policy.SPRPT)

    @property
    def remaining_based(self) -> bool:
        return self in (Policy.SRPT, Policy.SPRPT)


@dataclass(frozen=True)
class QueueConfig:
    lam: float
    policy: Policy = Policy.FCFS
    horizon: float = 2e5
    warmup: float = 2e4
    trials: int = 50
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "policy", Policy(self.policy))
        if not 0 < self.lam < 1:
            raise ValueError(f"arrival rate must lie in (0, 1) for stability, got {self.lam}")
        if not 0 <= self.warmup < self.horizon:
            raise ValueError("need 0 <= warmup < horizon")
        if self.trials < 1:
            raise ValueError("trials must be positive")


@dataclass
class SteadyStateReport:
    policy: Policy
    mean_T: float
    mean_W: float
    stderr_T: float
    stderr_W: float
    per_trial_T: np.ndarray
    per_trial_W: np.ndarray
    per_trial_number: np.ndarray  # time-average number in system
    jobs: int = 0

    @property
    def mean_number(self) -> float:
        return float(self.per_trial_number.mean())


# heap of (key, job index) pairs, smallest key first, ties by index

@njit(cache=True, nogil=True)
def _less(k1, i1, k2, i2):
    return k1 < k2 or (k1 == k2 and i1 < i2)


@njit(cache=True, nogil=True)
def _push(hk, hi, size, key, idx):
    j = size
    hk[j] = key
    hi[j] = idx
    while j > 0:
        p = (j - 1) // 2
        if _less(hk[j], hi[j], hk[p], hi[p]):
            hk[j], hk[p] = hk[p], hk[j]
            hi[j], hi[p] = hi[p], hi[j]
            j = p
        else:
            break
    return size + 1


@njit(cache=True, nogil=True)
def _pop(hk, hi, size):
    top = hi[0]
    size -= 1
    hk[0] = hk[size]
    hi[0] = hi[size]
    j = 0
    while True:
        l = 2 * j + 1
        if l >= size:
            break
        c = l
        if l + 1 < size and _less(hk[l + 1], hi[l + 1], hk[l], hi[l]):
            c = l + 1
        if _less(hk[c], hi[c], hk[j], hi[j]):
            hk[j], hk[c] = hk[c], hk[j]
            hi[j], hi[c] = hi[c], hi[j]
            j = c
        else:
            break
    return top, size


@njit(cache=True, nogil=True)
def _run(arrivals, sizes, base, preemptive, remaining_based, horizon):
    """Returns completion times (inf if unfinished by ``horizon``) and the
    total unfinished work seen by each arrival."""
    n = arrivals.shape[0]
    completion = np.full(n, np.inf)
    work_seen = np.zeros(n)
    remaining = sizes.copy()
    hk = np.empty(n)
    hi = np.empty(n, dtype=np.int64)
    size = 0
    cur = -1
    seg_start = 0.0
    work = 0.0
    last_t = 0.0
    i = 0
    while True:
        next_arr = arrivals[i] if i < n else np.inf
        comp_t = seg_start + remaining[cur] if cur >= 0 else np.inf
        if cur < 0 and i >= n:
            break
        if comp_t <= next_arr:
            if comp_t > horizon:
                break
            t = comp_t
            work -= t - last_t
            last_t = t
            remaining[cur] = 0.0
            completion[cur] = t
            if size > 0:
                cur, size = _pop(hk, hi, size)
                seg_start = t
            else:
                cur = -1
                work = 0.0
        else:
            if next_arr > horizon:
                break
            t = next_arr
            if cur >= 0:
                work -= t - last_t
            last_t = t
            work_seen[i] = max(work, 0.0)
            work += sizes[i]
            j = i
            i += 1
            if cur < 0:
                cur = j
                seg_start = t
            elif preemptive:
                served = t - seg_start
                key_cur = base[cur]
                if remaining_based:
                    key_cur = base[cur] - (sizes[cur] - remaining[cur] + served)
                if base[j] < key_cur:
                    remaining[cur] -= served
                    size = _push(hk, hi, size, key_cur, cur)
                    cur = j
                    seg_start = t
                else:
                    size = _push(hk, hi, size, base[j], j)
            else:
                size = _push(hk, hi, size, base[j], j)
    return completion, work_seen


@dataclass
class SamplePath:
    arrivals: np.ndarray
    sizes: np.ndarray
    predicted: np.ndarray


def sample_path(lam: float, service: ServiceDistribution, noise: NoiseModel, horizon: float,
                seed: int) -> SamplePath:
    rng_arr = make_rng(derive_seed(seed, 0))
    expected = lam * horizon
    count = int(expected + 10 * math.sqrt(expected) + 100)
    gaps = rng_arr.exponential(1.0 / lam, count)
    arrivals = np.cumsum(gaps)
    while arrivals[-1] <= horizon:
        more = np.cumsum(rng_arr.exponential(1.0 / lam, count)) + arrivals[-1]
        arrivals = np.concatenate([arrivals, more])
    arrivals = arrivals[arrivals <= horizon]
    sizes = service.sample(make_rng(derive_seed(seed, 1)), len(arrivals))
    predicted = noise.reseeded(derive_seed(seed, 2)).sample(sizes)
    return SamplePath(arrivals, sizes, predicted)


def run_path(path: SamplePath, policy: Policy, horizon: float):
    policy = Policy(policy)
    if policy is Policy.FCFS:
        base = path.arrivals
    elif policy.uses_prediction:
        base = path.predicted
    else:
        base = path.sizes
    return _run(path.arrivals, path.sizes, np.ascontiguousarray(base, dtype=np.float64),
                policy.preemptive, policy.remaining_based, horizon)


def _trial(config: QueueConfig, service, noise, trial: int):
    path = sample_path(config.lam, service, noise, config.horizon, derive_seed(config.seed, trial))
    completion, _ = run_path(path, config.policy, config.horizon)
    done = completion > config.warmup  # unfinished jobs carry inf and are excluded below
    done &= np.isfinite(completion)
    resp = completion[done] - path.arrivals[done]
    wait = resp - path.sizes[done]
    # time-average number in system over [warmup, horizon]
    end = np.minimum(completion, config.horizon)
    overlap = np.clip(end - np.maximum(path.arrivals, config.warmup), 0.0, None)
    number = overlap.sum() / (config.horizon - config.warmup)
    return resp.mean(), wait.mean(), number, int(done.sum())


def worker_count() -> int:
    env = os.environ.get("AUGUR_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def simulate(config: QueueConfig, service: ServiceDistribution,
             noise: NoiseModel | None = None) -> SteadyStateReport:
    """Run ``config.trials`` independent trials and average the per-trial means."""
    noise = noise or NoiseModel(NoiseKind.EXACT)
    workers = min(worker_count(), config.trials)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            rows = list(pool.map(lambda i: _trial(config, service, noise, i),
                                 range(config.trials)))
    else:
        rows = [_trial(config, service, noise, i) for i in range(config.trials)]
    T, W, N, jobs = (np.array(c) for c in zip(*rows))
    se = (lambda a: float(a.std(ddof=1) / math.sqrt(len(a))) if len(a) > 1 else math.nan)
    return SteadyStateReport(config.policy, float(T.mean()), float(W.mean()), se(T), se(W),
                             T, W, N, int(jobs.sum()))


# analytic steady state

def fcfs_wait(service: ServiceDistribution, lam: float) -> float:
    """Pollaczek-Khinchine mean wait ``lam E[S^2] / (2 (1 - rho))``."""
    rho = lam * service.mean
    if rho >= 1:
        raise ValueError("load must be below 1")
    return lam * service.second_moment / (2 * (1 - rho))


def fcfs_response(service: ServiceDistribution, lam: float) -> float:
    return fcfs_wait(service, lam) + service.mean


def _check_load(service: ServiceDistribution, lam: float) -> None:
    if not 0 <= lam * service.mean < 1:
        raise ValueError(f"load {lam * service.mean} must lie in [0, 1)")


def sjf_integral(service: ServiceDistribution, lam: float, tol: float = 1e-8) -> float:
    """``integral f_s(x) / (1 - rho_x)^2 dx`` with ``rho_x = lam E[S; S <= x]``."""
    _check_load(service, lam)
    return quad(lambda x: service.pdf(x) / (1 - lam * service.partial_moment(x)) ** 2,
                0.0, service.upper, tol=tol)


def spjf_integral(density: JointDensity, lam: float, tol: float = 1e-8) -> float:
    """``integral f_p(y) / (1 - rho'_y)^2 dy`` with ``rho'_y = lam E[X; Y <= y]``."""
    _check_load(density.service, lam)
    if isinstance(density, UniformMultiplicative) and density.exact:
        return sjf_integral(density.service, lam, tol)
    return quad(lambda y: density.f_p(y) / (1 - lam * density.work_below(y)) ** 2,
                0.0, density.y_upper, tol=tol, points=density._y_points())


def analytic_sjf_wait(service: ServiceDistribution, lam: float) -> float:
    """Mean time in queue under non-preemptive shortest-job-first."""
    if lam == 0:
        return 0.0
    return lam * service.second_moment / 2 * sjf_integral(service, lam)


def analytic_spjf_wait(service: ServiceDistribution, lam: float, density: JointDensity) -> float:
    """Mean time in queue under shortest-predicted-job-first."""
    if lam == 0:
        return 0.0
    return lam * service.second_moment / 2 * spjf_integral(density, lam)


def price_of_misprediction_queue(service: ServiceDistribution, lam: float,
                                 density: JointDensity) -> float:
    return spjf_integral(density, lam) / sjf_integral(service, lam)

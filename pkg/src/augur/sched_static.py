"""Static scheduling with predicted job sizes: all jobs present at time 0.

Waiting times here are averages per job.  The price of misprediction is
reported as (waiting time using predictions) / (waiting time using exact
sizes), so it is at least 1 for shortest-first orderings.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .distributions import JointDensity, quad

DEFAULT_TOL = 1e-4


class Info(str, enum.Enum):
    FULL = "full"
    NONE = "none"
    PREDICTED = "predicted"


@dataclass(frozen=True)
class TwoTypeInstance:
    """``n_s`` short jobs of size ``s`` and ``n_l`` long jobs of size ``l``.

    A short job is predicted long with probability ``p``; a long job is
    predicted short with probability ``q``.
    """

    n_s: int
    n_l: int
    s: float
    l: float
    p: float = 0.0
    q: float = 0.0

    def __post_init__(self):
        if self.n_s < 0 or self.n_l < 0 or self.n_s + self.n_l < 1:
            raise ValueError("need at least one job")
        if not 0 < self.s < self.l:
            raise ValueError("need 0 < s < l")
        if not (0 <= self.p <= 1 and 0 <= self.q <= 1):
            raise ValueError("p and q must lie in [0, 1]")

    @property
    def n(self) -> int:
        return self.n_s + self.n_l


def two_type_wait(inst: TwoTypeInstance, info: Info | str) -> float:
    """Expected average waiting time for shortest-first on full, no, or predicted information."""
    info = Info(info)
    ns, nl, s, l, p, q = inst.n_s, inst.n_l, inst.s, inst.l, inst.p, inst.q
    if info is Info.FULL:
        total = ns * (ns - 1) / 2 * s + nl * (nl - 1) / 2 * l + nl * ns * s
    elif info is Info.NONE:
        total = (ns * ((ns - 1) / 2 * s + nl / 2 * l)
                 + nl * (ns / 2 * s + (nl - 1) / 2 * l))
    else:
        total = ((1 - p) * ns * ((1 - p) * (ns - 1) / 2 * s + q * nl / 2 * l)
                 + p * ns * ((1 - p) * (ns - 1) * s + p * (ns - 1) / 2 * s
                             + (1 - q) * nl / 2 * l + q * nl * l)
                 + (1 - q) * nl * ((1 - q) * (nl - 1) / 2 * l + q * (nl - 1) * l
                                   + p * ns / 2 * s + (1 - p) * ns * s)
                 + q * nl * (q * (nl - 1) / 2 * l + (1 - p) * ns / 2 * s))
    return total / inst.n


def full_info_integral(density: JointDensity, tol: float = DEFAULT_TOL) -> float:
    """``integral f_s(x) E[S; S <= x] dx``: per-pair wait under shortest-job-first."""
    svc = density.service
    return quad(lambda x: density.f_s(x) * svc.partial_moment(x), 0.0, svc.upper, tol=tol * 1e-2)


def predicted_info_integral(density: JointDensity, tol: float = DEFAULT_TOL) -> float:
    """``integral f_p(y) E[X; Y <= y] dy``: per-pair wait under shortest-predicted-first."""
    return quad(lambda y: density.f_p(y) * density.work_below(y), 0.0, density.y_upper,
                tol=tol * 1e-2, points=density._y_points())


def continuous_wait(density: JointDensity, info: Info | str, n: int,
                    tol: float = DEFAULT_TOL) -> float:
    """Expected waiting time of a job among ``n`` when jobs are drawn from ``density``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    density.check_normalized()
    info = Info(info)
    if info is Info.FULL:
        return (n - 1) * full_info_integral(density, tol)
    if info is Info.PREDICTED:
        return (n - 1) * predicted_info_integral(density, tol)
    raise ValueError("continuous model supports only full and predicted information")


def price_of_misprediction_static(density: JointDensity, n: int = 2,
                                  tol: float = DEFAULT_TOL) -> float:
    """Predicted-information wait over full-information wait (the ``n - 1`` factors cancel)."""
    full = full_info_integral(density, tol)
    if full <= 0:
        raise ValueError("full-information waiting time is zero")
    return predicted_info_integral(density, tol) / full

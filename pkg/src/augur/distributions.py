"""Service-time distributions and joint (actual, predicted) service densities.

Integrals over ``[0, inf)`` are truncated at the point where the relevant
survival function drops to ``TAIL`` (1e-8).  Closed forms are used where they
exist; the generic numeric routes in :class:`JointDensity` stay available so
the two can be checked against each other.
"""

from __future__ import annotations

import math
from functools import cached_property

import numpy as np
from scipy import integrate, optimize, special

TAIL = 1e-8
QUAD_LIMIT = 200


def quad(f, a: float, b: float, tol: float = 1e-10, points=None) -> float:
    value, _ = integrate.quad(f, a, b, epsabs=tol, epsrel=tol, limit=QUAD_LIMIT, points=points)
    return value


class ServiceDistribution:
    name = "service"
    mean = 1.0
    second_moment = 1.0

    def pdf(self, x: float) -> float:
        raise NotImplementedError

    def sf(self, x: float) -> float:
        raise NotImplementedError

    def partial_moment(self, x: float) -> float:
        """``E[S; S <= x] = integral_0^x t f(t) dt``."""
        raise NotImplementedError

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        raise NotImplementedError

    @cached_property
    def upper(self) -> float:
        """Truncation point where the survival function reaches ``TAIL``."""
        return optimize.brentq(lambda x: self.sf(x) - TAIL, 1e-12, 1e6, xtol=1e-12)

    def numeric_partial_moment(self, x: float) -> float:
        return quad(lambda t: t * self.pdf(t), 0.0, x)


class Exponential(ServiceDistribution):
    """Exponential with mean 1."""

    name = "exponential"
    mean = 1.0
    second_moment = 2.0

    def pdf(self, x):
        return math.exp(-x) if x >= 0 else 0.0

    def sf(self, x):
        return math.exp(-x) if x >= 0 else 1.0

    def partial_moment(self, x):
        return 1.0 - math.exp(-x) * (1.0 + x)

    def sample(self, rng, size):
        return rng.exponential(1.0, size)


class Weibull(ServiceDistribution):
    """CDF ``1 - exp(-sqrt(2x))``: mean 1, second moment 6.

    ``S = U**2 / 2`` with ``U`` a unit exponential, so sampling uses
    ``x = (ln u)**2 / 2`` for ``u`` uniform on (0, 1].
    """

    name = "weibull"
    mean = 1.0
    second_moment = 6.0

    def pdf(self, x):
        if x <= 0:
            return 0.0
        r = math.sqrt(2.0 * x)
        return math.exp(-r) / r

    def sf(self, x):
        return math.exp(-math.sqrt(2.0 * x)) if x > 0 else 1.0

    def partial_moment(self, x):
        if x <= 0:
            return 0.0
        u = math.sqrt(2.0 * x)
        return 0.5 * (2.0 - math.exp(-u) * (u * u + 2.0 * u + 2.0))

    def sample(self, rng, size):
        u = 1.0 - rng.random(size)  # (0, 1]
        return np.log(u) ** 2 / 2.0


SERVICES = {"exponential": Exponential, "mm1": Exponential, "weibull": Weibull}


def service_distribution(name: str) -> ServiceDistribution:
    try:
        return SERVICES[name]()
    except KeyError:
        raise ValueError(f"unknown service distribution {name!r}; "
                         f"choose from {sorted(SERVICES)}") from None


class JointDensity:
    """Density ``g(x, y)`` of (service time, predicted service time).

    Subclasses provide the service marginal and the conditional CDF of the
    prediction given the service time; everything else has a numeric default.
    """

    name = "joint"

    def __init__(self, service: ServiceDistribution):
        self.service = service

    def g(self, x: float, y: float) -> float:
        raise NotImplementedError

    def cond_cdf(self, y: float, x: float) -> float:
        """``P(Y <= y | X = x)``."""
        raise NotImplementedError

    def f_s(self, x: float) -> float:
        return self.service.pdf(x)

    def f_p(self, y: float) -> float:
        return self.numeric_f_p(y)

    def work_below(self, y: float) -> float:
        """``E[X; Y <= y]``: mean work from jobs predicted at most ``y``."""
        return self.numeric_work_below(y)

    def numeric_f_p(self, y: float) -> float:
        return quad(lambda x: self.g(x, y), 0.0, self.service.upper, points=self._x_points(y))

    def numeric_work_below(self, y: float) -> float:
        return quad(lambda x: x * self.f_s(x) * self.cond_cdf(y, x), 0.0, self.service.upper,
                    points=self._x_points(y))

    def _x_points(self, y: float):
        return None

    def prediction_sf(self, y: float) -> float:
        return quad(lambda x: self.f_s(x) * (1.0 - self.cond_cdf(y, x)), 0.0, self.service.upper)

    @cached_property
    def y_upper(self) -> float:
        return optimize.brentq(lambda y: self.prediction_sf(y) - TAIL, 1e-9, 1e6, xtol=1e-9)

    def total_mass(self) -> tuple[float, float]:
        """Numeric ``(integral of f_s, integral of f_p)``; both should be 1."""
        return (quad(self.f_s, 0.0, self.service.upper),
                quad(self.f_p, 0.0, self.y_upper, tol=1e-11, points=self._y_points()))

    def _y_points(self):
        return None

    def check_normalized(self, tol: float = 1e-6) -> None:
        for mass in self.total_mass():
            if abs(mass - 1.0) > tol:
                raise ValueError(f"{self.name} density is not normalised (mass {mass:.8g})")


class UniformMultiplicative(JointDensity):
    """Prediction uniform on ``[(1 - alpha) x, (1 + alpha) x]``; ``alpha = 0`` is exact."""

    name = "uniform-multiplicative"

    def __init__(self, service: ServiceDistribution, alpha: float):
        super().__init__(service)
        if not 0 <= alpha < 1:
            raise ValueError(f"alpha must lie in [0, 1), got {alpha}")
        self.alpha = alpha

    @property
    def exact(self) -> bool:
        return self.alpha == 0

    def g(self, x, y):
        a = self.alpha
        if self.exact or x <= 0 or not (1 - a) * x <= y <= (1 + a) * x:
            return 0.0
        return self.f_s(x) / (2 * a * x)

    def cond_cdf(self, y, x):
        if x <= 0:
            return 1.0
        a = self.alpha
        if self.exact:
            return 1.0 if y >= x else 0.0
        return min(1.0, max(0.0, (y / x - (1 - a)) / (2 * a)))

    def f_p(self, y):
        if self.exact:
            return self.f_s(y)
        a = self.alpha
        lo, hi = y / (1 + a), min(y / (1 - a), self.service.upper)
        if hi <= lo:
            return 0.0
        return quad(lambda x: self.f_s(x) / x, lo, hi) / (2 * a)

    def work_below(self, y):
        if self.exact:
            return self.service.partial_moment(y)
        a = self.alpha
        lo, hi = y / (1 + a), y / (1 - a)
        # jobs with x <= lo are always predicted below y; x in (lo, hi) partially
        return (self.service.partial_moment(lo)
                + quad(lambda x: x * self.f_s(x) * self.cond_cdf(y, x), lo, hi))

    def _x_points(self, y):
        a = self.alpha
        if self.exact or y <= 0:
            return None
        return [p for p in (y / (1 + a), y / (1 - a)) if p < self.service.upper]

    @cached_property
    def y_upper(self):
        return (1 + self.alpha) * self.service.upper


class ExpExp(JointDensity):
    """Unit-mean exponential service; prediction exponential with mean ``x``.

    Closed forms: ``f_p(y) = 2 K0(2 sqrt y)`` and
    ``E[X; Y <= y] = 1 - 2 y K2(2 sqrt y)``.
    """

    name = "exp-exp"

    def __init__(self):
        super().__init__(Exponential())

    def g(self, x, y):
        if x <= 0 or y < 0:
            return 0.0
        return math.exp(-x - y / x) / x

    def cond_cdf(self, y, x):
        if x <= 0:
            return 1.0
        return -math.expm1(-y / x)

    def f_p(self, y):
        if y <= 0:
            return math.inf
        return 2.0 * special.k0(2.0 * math.sqrt(y))

    def work_below(self, y):
        if y <= 0:
            return 0.0
        return 1.0 - 2.0 * y * special.kn(2, 2.0 * math.sqrt(y))

    def prediction_sf(self, y):
        r = 2.0 * math.sqrt(y)
        return r * special.k1(r) if y > 0 else 1.0

    def _y_points(self):
        return [1.0]


def joint_density(preset: str, alpha: float = 0.0, service: str = "exponential") -> JointDensity:
    if preset == "exp-exp":
        return ExpExp()
    if preset == "uniform-multiplicative":
        return UniformMultiplicative(service_distribution(service), alpha)
    raise ValueError(f"unknown density preset {preset!r}")

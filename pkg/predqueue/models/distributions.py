"""Service-time distributions.

Every distribution exposes vectorized `pdf` / `cdf` / `sf`, a sampler that takes
an explicit `np.random.Generator`, raw moments, and *partial* moments
``∫_0^x t^k f(t) dt`` in closed form. The latter are what loads such as
``ρ_x = λ ∫_0^x t f(t) dt`` are made of.

"""

__author__ = "Jonas Van Der Donckt, Jeroen Van Der Donckt"

import math
from abc import ABC, abstractmethod
from typing import Sequence, Tuple, Union

import numpy as np
from scipy import special

from ..utils.classes import FrozenClass

ArrayLike = Union[float, np.ndarray]


class ServiceDistribution(FrozenClass, ABC):
    """Abstract base class of a (non-negative) service-time distribution."""

    name: str = "abstract"
    is_discrete: bool = False

    @abstractmethod
    def cdf(self, x: ArrayLike) -> ArrayLike:
        """Return ``P(S <= x)``."""
        raise NotImplementedError

    def sf(self, x: ArrayLike) -> ArrayLike:
        """Return the survival function ``P(S > x)``."""
        return 1.0 - self.cdf(x)

    @abstractmethod
    def moment(self, k: int) -> float:
        """Return the raw moment ``E[S^k]``."""
        raise NotImplementedError

    @abstractmethod
    def partial_moment(self, k: int, x: ArrayLike) -> ArrayLike:
        """Return ``E[S^k 1{S <= x}]``."""
        raise NotImplementedError

    @abstractmethod
    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Draw `size` i.i.d. service times with the given generator."""
        raise NotImplementedError

    @abstractmethod
    def upper_bound(self, eps: float) -> float:
        """Return a bound ``b`` with ``P(S > b) <= eps``."""
        raise NotImplementedError

    @property
    def mean(self) -> float:
        return self.moment(1)

    @property
    def second_moment(self) -> float:
        return self.moment(2)

    def truncation(self, eps: float = 1e-12) -> float:
        """Return the default truncation bound of integrals over the service time.

        This is 50 mean service times, or more when the tail is heavier than
        exponential (so that the neglected mass stays below `eps`).

        """
        return max(50.0 * self.mean, self.upper_bound(eps))


class ContinuousDistribution(ServiceDistribution, ABC):
    """A service-time distribution with a density."""

    @abstractmethod
    def pdf(self, x: ArrayLike) -> ArrayLike:
        """Return the density ``f(x)``."""
        raise NotImplementedError

    def breakpoints(self) -> Sequence[float]:
        """Points where the density is not smooth."""
        return ()


class Exponential(ContinuousDistribution):
    """Exponential service times.

    Parameters
    ----------
    mean : float, optional
        The mean service time, by default 1.0.

    """

    name = "exp"

    def __init__(self, mean: float = 1.0):
        if not mean > 0:
            raise ValueError(f"mean must be > 0, got {mean}")
        self.mu = float(mean)
        self._freeze()

    def pdf(self, x: ArrayLike) -> ArrayLike:
        x = np.asarray(x, dtype=float)
        return np.where(x >= 0, np.exp(-np.maximum(x, 0) / self.mu) / self.mu, 0.0)

    def cdf(self, x: ArrayLike) -> ArrayLike:
        x = np.asarray(x, dtype=float)
        return -np.expm1(-np.maximum(x, 0.0) / self.mu)

    def sf(self, x: ArrayLike) -> ArrayLike:
        x = np.asarray(x, dtype=float)
        return np.exp(-np.maximum(x, 0.0) / self.mu)

    def moment(self, k: int) -> float:
        return self.mu**k * math.factorial(k)

    def partial_moment(self, k: int, x: ArrayLike) -> ArrayLike:
        x = np.maximum(np.asarray(x, dtype=float), 0.0)
        return self.moment(k) * special.gammainc(k + 1, x / self.mu)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.exponential(self.mu, size)

    def upper_bound(self, eps: float) -> float:
        return self.mu * math.log(1.0 / eps)

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(mean={self.mu})"


class Weibull(ContinuousDistribution):
    """Weibull service times with CDF ``1 - exp(-(x / scale)^shape)``.

    Parameters
    ----------
    shape : float
        The shape parameter; ``shape < 1`` gives a heavier than exponential tail.
    scale : float
        The scale parameter.

    """

    name = "weibull"

    def __init__(self, shape: float, scale: float):
        if not (shape > 0 and scale > 0):
            raise ValueError("Weibull shape and scale must be > 0")
        self.shape = float(shape)
        self.scale = float(scale)
        self._freeze()

    @classmethod
    def sqrt_tail(cls) -> "Weibull":
        """Return the unit-mean Weibull with CDF ``1 - exp(-sqrt(2x))``.

        Shape 1/2 and scale 1/2 give mean 1 and second moment 6.

        """
        return cls(shape=0.5, scale=0.5)

    def _z(self, x: ArrayLike) -> np.ndarray:
        return (np.maximum(np.asarray(x, dtype=float), 0.0) / self.scale) ** self.shape

    def pdf(self, x: ArrayLike) -> ArrayLike:
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            z = self._z(x)
            dens = self.shape / self.scale * z ** (1 - 1 / self.shape) * np.exp(-z)
        return np.where(x >= 0, dens, 0.0)

    def cdf(self, x: ArrayLike) -> ArrayLike:
        return -np.expm1(-self._z(x))

    def sf(self, x: ArrayLike) -> ArrayLike:
        return np.exp(-self._z(x))

    def moment(self, k: int) -> float:
        return self.scale**k * math.gamma(1 + k / self.shape)

    def partial_moment(self, k: int, x: ArrayLike) -> ArrayLike:
        return self.moment(k) * special.gammainc(1 + k / self.shape, self._z(x))

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return self.scale * rng.weibull(self.shape, size)

    def upper_bound(self, eps: float) -> float:
        return self.scale * math.log(1.0 / eps) ** (1.0 / self.shape)

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(shape={self.shape}, scale={self.scale})"


class Discrete(ServiceDistribution):
    """Service times taking finitely many values.

    Parameters
    ----------
    values : Sequence[float]
        The (positive) support points.
    probabilities : Sequence[float]
        Their probabilities; must sum to 1.

    """

    name = "discrete"
    is_discrete = True

    def __init__(self, values: Sequence[float], probabilities: Sequence[float]):
        values = np.asarray(values, dtype=float)
        probabilities = np.asarray(probabilities, dtype=float)
        if values.shape != probabilities.shape or values.ndim != 1:
            raise ValueError("values and probabilities must be 1D of equal length")
        if np.any(values <= 0):
            raise ValueError("service times must be > 0")
        if np.any(probabilities < 0) or abs(probabilities.sum() - 1) > 1e-12:
            raise ValueError("probabilities must be >= 0 and sum to 1")
        order = np.argsort(values, kind="stable")
        self.values = values[order]
        self.probabilities = probabilities[order]
        self._freeze()

    @property
    def atoms(self) -> Tuple[Tuple[float, float], ...]:
        """The ``(value, probability)`` pairs, sorted by value."""
        return tuple(zip(self.values.tolist(), self.probabilities.tolist()))

    def cdf(self, x: ArrayLike) -> ArrayLike:
        x = np.asarray(x, dtype=float)
        return np.sum(
            self.probabilities * (self.values <= x[..., None]), axis=-1
        )

    def moment(self, k: int) -> float:
        return float(np.sum(self.probabilities * self.values**k))

    def partial_moment(self, k: int, x: ArrayLike) -> ArrayLike:
        x = np.asarray(x, dtype=float)
        return np.sum(
            self.probabilities * self.values**k * (self.values <= x[..., None]),
            axis=-1,
        )

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.choice(self.values, size=size, p=self.probabilities)

    def upper_bound(self, eps: float) -> float:
        return float(self.values[-1])

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({self.atoms})"


class Deterministic(Discrete):
    """A constant service time."""

    name = "deterministic"

    def __init__(self, value: float):
        super().__init__([value], [1.0])

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return np.full(size, self.values[0])

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({self.values[0]})"


def distribution_from_name(name: str, mean: float = 1.0) -> ServiceDistribution:
    """Construct a service-time distribution from its configuration name.

    Parameters
    ----------
    name : str
        One of ``"exp"``, ``"weibull"`` (the heavy-tailed ``1 - exp(-sqrt(2x/mean))``
        family), or ``"deterministic"``.
    mean : float, optional
        The mean service time, by default 1.0.

    Returns
    -------
    ServiceDistribution
        The distribution.

    Raises
    ------
    ValueError
        Raised when the name is unknown.

    """
    name = name.lower()
    if name in ("exp", "exponential"):
        return Exponential(mean)
    if name == "weibull":
        return Weibull(shape=0.5, scale=0.5 * mean)
    if name in ("det", "deterministic"):
        return Deterministic(mean)
    raise ValueError(f"unknown service distribution {name!r}")

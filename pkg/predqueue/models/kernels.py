"""Prediction kernels ``h(y | x)``: the law of the prediction given the service time.

A structured model has joint density ``g(x, y) = f_s(x) h(y | x)``. All the
predicted-size quantities the analytic engine needs can then be written as a
*single* integral over x of closed-form kernel moments:

* ``truncated_moment(k, y, x)`` = ``E[Y^k 1{Y <= y} | X = x]``
  (k = 0 gives the conditional CDF ``H(y | x)``),
* ``excess_moment(k, q, x)`` = ``E[((x + q - Y)^+)^k 1{Y > q} | X = x]``, the
  work (k = 1) that a job predicted above q still has left once its remaining
  prediction drops to q.

Kernels without a closed form fall back to adaptive quadrature over y.

"""

__author__ = "Jonas Van Der Donckt"

import math
from abc import ABC, abstractmethod
from typing import Dict, Sequence, Tuple, Union

import numpy as np
from scipy import special

from ..utils.classes import FrozenClass
from ..utils.quadrature import DEFAULT_SETTINGS, quad

ArrayLike = Union[float, np.ndarray]


class PredictionKernel(FrozenClass, ABC):
    """Abstract conditional law of the predicted time Y given the service time x."""

    name: str = "abstract"
    is_exact: bool = False

    @abstractmethod
    def pdf(self, y: ArrayLike, x: ArrayLike) -> ArrayLike:
        """Return the conditional density ``h(y | x)``."""
        raise NotImplementedError

    @abstractmethod
    def sample(self, rng: np.random.Generator, x: np.ndarray) -> np.ndarray:
        """Draw one prediction for every service time in `x`."""
        raise NotImplementedError

    def y_support(self, x: float) -> Tuple[float, float]:
        """Return the support ``(lower, upper)`` of ``h(. | x)``."""
        return 0.0, np.inf

    def x_breakpoints(self, y: float) -> Sequence[float]:
        """Service times where ``x -> h(y | x)`` or ``x -> H(y | x)`` has a kink."""
        return ()

    def excess_breakpoints(self, q: float) -> Sequence[float]:
        """Service times where ``x -> excess_moment(k, q, x)`` has a kink."""
        return (q,)

    def truncated_moment(self, k: int, y: float, x: ArrayLike) -> ArrayLike:
        """Return ``E[Y^k 1{Y <= y} | X = x]``, by quadrature over y."""

        def _single(xi: float) -> float:
            lo, hi = self.y_support(xi)
            return quad(
                lambda t: t**k * self.pdf(t, xi),
                lo,
                min(y, hi),
                DEFAULT_SETTINGS.loosened(),
            )[0]

        return _map(_single, x)

    def excess_moment(self, k: int, q: float, x: ArrayLike) -> ArrayLike:
        """Return ``E[((x + q - Y)^+)^k 1{Y > q} | X = x]``, by quadrature over y."""

        def _single(xi: float) -> float:
            lo, hi = self.y_support(xi)
            lo, hi = max(lo, q), min(hi, q + xi)
            return quad(
                lambda t: (xi + q - t) ** k * self.pdf(t, xi),
                lo,
                hi,
                DEFAULT_SETTINGS.loosened(),
            )[0]

        return _map(_single, x)

    def cdf(self, y: float, x: ArrayLike) -> ArrayLike:
        """Return the conditional CDF ``H(y | x)``."""
        return self.truncated_moment(0, y, x)

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}()"


def _map(func, x: ArrayLike) -> ArrayLike:
    if np.ndim(x) == 0:
        return func(float(x))
    x = np.asarray(x, dtype=float)
    return np.array([func(xi) for xi in x.ravel()]).reshape(x.shape)


class ExactPrediction(PredictionKernel):
    """The prediction equals the service time (``Y = X``)."""

    name = "exact"
    is_exact = True

    def __init__(self):
        self._freeze()

    def pdf(self, y, x):
        raise TypeError("an exact prediction has no conditional density (Y = X)")

    def sample(self, rng: np.random.Generator, x: np.ndarray) -> np.ndarray:
        return np.array(x, dtype=float, copy=True)

    def y_support(self, x: float) -> Tuple[float, float]:
        return x, x

    def x_breakpoints(self, y: float) -> Sequence[float]:
        return (y,)

    def truncated_moment(self, k: int, y: float, x: ArrayLike) -> ArrayLike:
        x = np.asarray(x, dtype=float)
        return np.where(x <= y, x**k, 0.0)

    def excess_moment(self, k: int, q: float, x: ArrayLike) -> ArrayLike:
        # the remaining prediction hits q with exactly q of work left
        x = np.asarray(x, dtype=float)
        return np.where(x > q, float(q) ** k, 0.0)


# ∫_0^1 (1 - u)^k e^{-u} du
_EXP_EXCESS: Dict[int, float] = {
    0: 1.0 - math.exp(-1.0),
    1: math.exp(-1.0),
    2: 1.0 - 2.0 * math.exp(-1.0),
}


class ExponentialMeanX(PredictionKernel):
    """The prediction is exponentially distributed with mean x."""

    name = "exp_mean_x"

    def __init__(self):
        self._freeze()

    def pdf(self, y: ArrayLike, x: ArrayLike) -> ArrayLike:
        y, x = np.asarray(y, dtype=float), np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            dens = np.exp(-y / x) / x
        return np.where((x > 0) & (y >= 0), dens, 0.0)

    def sample(self, rng: np.random.Generator, x: np.ndarray) -> np.ndarray:
        return rng.exponential(np.asarray(x, dtype=float))

    def x_breakpoints(self, y: float) -> Sequence[float]:
        # x -> exp(-y / x) / x peaks at x = y; decades above it resolve the 1/x tail
        return tuple(y * 10.0**j for j in range(12)) if y > 0 else ()

    def truncated_moment(self, k: int, y: float, x: ArrayLike) -> ArrayLike:
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = x**k * math.factorial(k) * special.gammainc(k + 1, y / x)
        return np.where(x > 0, out, float(k == 0 and y >= 0))

    def excess_moment(self, k: int, q: float, x: ArrayLike) -> ArrayLike:
        if k not in _EXP_EXCESS:
            return super().excess_moment(k, q, x)
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            out = np.exp(-q / x) * x**k * _EXP_EXCESS[k]
        return np.where(x > 0, out, 0.0)


class ExponentialMeanInvX(PredictionKernel):
    """The prediction is exponentially distributed with mean 1/x.

    Longer jobs get *shorter* predictions, so that ordering by prediction
    reverses the ordering by service time.

    """

    name = "exp_mean_inv_x"

    def __init__(self):
        self._freeze()

    def pdf(self, y: ArrayLike, x: ArrayLike) -> ArrayLike:
        y, x = np.asarray(y, dtype=float), np.asarray(x, dtype=float)
        return np.where((x > 0) & (y >= 0), x * np.exp(-x * y), 0.0)

    def sample(self, rng: np.random.Generator, x: np.ndarray) -> np.ndarray:
        return rng.exponential(1.0 / np.asarray(x, dtype=float))

    def x_breakpoints(self, y: float) -> Sequence[float]:
        return (1.0 / y,) if y > 0 else ()

    def truncated_moment(self, k: int, y: float, x: ArrayLike) -> ArrayLike:
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = math.factorial(k) * special.gammainc(k + 1, x * y) / x**k
        # for x -> 0 the prediction escapes to infinity
        return np.where(x > 0, out, 0.0)


class UniformMultiplicative(PredictionKernel):
    """The prediction is uniform on ``[(1 - alpha) x, (1 + alpha) x]``.

    Parameters
    ----------
    alpha : float
        The relative spread, in (0, 1]. Use `ExactPrediction` for alpha = 0.

    """

    name = "uniform_alpha"

    def __init__(self, alpha: float):
        if not 0 < alpha <= 1:
            raise ValueError(f"alpha must be in (0, 1], got {alpha}")
        self.alpha = float(alpha)
        self._freeze()

    def _bounds(self, x: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
        x = np.asarray(x, dtype=float)
        return (1 - self.alpha) * x, (1 + self.alpha) * x

    def pdf(self, y: ArrayLike, x: ArrayLike) -> ArrayLike:
        y, x = np.asarray(y, dtype=float), np.asarray(x, dtype=float)
        lo, hi = self._bounds(x)
        with np.errstate(divide="ignore"):
            dens = 1.0 / (2 * self.alpha * x)
        return np.where((x > 0) & (y >= lo) & (y <= hi), dens, 0.0)

    def sample(self, rng: np.random.Generator, x: np.ndarray) -> np.ndarray:
        lo, hi = self._bounds(x)
        return rng.uniform(lo, hi)

    def y_support(self, x: float) -> Tuple[float, float]:
        lo, hi = self._bounds(x)
        return float(lo), float(hi)

    def x_breakpoints(self, y: float) -> Sequence[float]:
        points = [y / (1 + self.alpha)]
        if self.alpha < 1:
            points.append(y / (1 - self.alpha))
        return tuple(points)

    def excess_breakpoints(self, q: float) -> Sequence[float]:
        return self.x_breakpoints(q) + (q / self.alpha,)

    def truncated_moment(self, k: int, y: float, x: ArrayLike) -> ArrayLike:
        x = np.asarray(x, dtype=float)
        lo, hi = self._bounds(x)
        top = np.minimum(y, hi)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = (top ** (k + 1) - lo ** (k + 1)) / ((k + 1) * 2 * self.alpha * x)
        return np.where((x > 0) & (top > lo), out, 0.0)

    def excess_moment(self, k: int, q: float, x: ArrayLike) -> ArrayLike:
        x = np.asarray(x, dtype=float)
        lo, hi = self._bounds(x)
        a = np.maximum(q, lo)
        b = np.minimum(hi, q + x)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = ((x + q - a) ** (k + 1) - (x + q - b) ** (k + 1)) / (
                (k + 1) * 2 * self.alpha * x
            )
        return np.where((x > 0) & (b > a), out, 0.0)

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(alpha={self.alpha})"

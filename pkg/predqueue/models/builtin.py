"""The built-in workload models."""

__author__ = "Jonas Van Der Donckt"

from typing import Optional, Tuple

import numpy as np

from .distributions import (
    ContinuousDistribution,
    Exponential,
    Weibull,
    distribution_from_name,
)
from .kernels import (
    ExactPrediction,
    ExponentialMeanInvX,
    ExponentialMeanX,
    UniformMultiplicative,
)
from .prediction_model import DiscreteModel, KernelPredictionModel


def exact(base_dist: Optional[ContinuousDistribution] = None, name: str = "exact"):
    """Return the model whose prediction equals the service time.

    Parameters
    ----------
    base_dist : ContinuousDistribution, optional
        The service-time distribution, by default exponential with mean 1.
    name : str, optional
        The model name, by default "exact".

    """
    return KernelPredictionModel(base_dist or Exponential(1.0), ExactPrediction(), name=name)


def exponential_mean_x(mean: float = 1.0) -> KernelPredictionModel:
    """Exponential service times; the prediction of a job of size x is Exp(mean x).

    The joint density is ``g(x, y) = exp(-x - y / x) / x`` for unit mean.

    """
    return KernelPredictionModel(Exponential(mean), ExponentialMeanX(), name="exp_mean_x")


def _reversed_predicted_pdf(y):
    return 1.0 / (1.0 + np.asarray(y, dtype=float)) ** 2


def reversed_exponential_mean_inv_x() -> KernelPredictionModel:
    """Exp(1) service times; the prediction of a job of size x is Exp(mean 1/x).

    The predicted density has the closed form ``1 / (1 + y)^2``; its heavy tail
    makes the default y truncation bound about 1.6e6.

    """
    return KernelPredictionModel(
        Exponential(1.0),
        ExponentialMeanInvX(),
        name="reversed_exp",
        predicted_pdf=_reversed_predicted_pdf,
    )


def uniform_multiplicative(
    base_dist: Optional[ContinuousDistribution] = None, alpha: float = 0.5
) -> KernelPredictionModel:
    """Predictions uniform on ``[(1 - alpha) x, (1 + alpha) x]``.

    Parameters
    ----------
    base_dist : ContinuousDistribution, optional
        The service-time distribution, by default exponential with mean 1.
    alpha : float, optional
        The relative spread in [0, 1], by default 0.5. For ``alpha = 0`` the
        prediction is exact.

    """
    if not 0 <= alpha <= 1:
        raise ValueError(f"alpha must be in [0, 1], got {alpha}")
    base_dist = base_dist or Exponential(1.0)
    if alpha == 0:
        return exact(base_dist, name="uniform_alpha")
    return KernelPredictionModel(
        base_dist, UniformMultiplicative(alpha), name="uniform_alpha"
    )


def weibull_base() -> Weibull:
    """Return the unit-mean Weibull service distribution ``1 - exp(-sqrt(2x))``."""
    return Weibull.sqrt_tail()


def two_type(
    s: float,
    l: float,  # noqa: E741
    fractions: Tuple[float, float] = (0.5, 0.5),
    p: float = 0.0,
    q: float = 0.0,
) -> DiscreteModel:
    """Return the short/long model with misclassification.

    Parameters
    ----------
    s : float
        The short service time.
    l : float
        The long service time, ``l > s``.
    fractions : Tuple[float, float], optional
        The fractions of short and long jobs, by default (0.5, 0.5).
    p : float, optional
        Probability that a short job is predicted long, by default 0.
    q : float, optional
        Probability that a long job is predicted short, by default 0.

    Returns
    -------
    DiscreteModel
        A model whose predictions are ``s`` or ``l``.

    """
    if not 0 < s < l:
        raise ValueError(f"need 0 < s < l, got s={s}, l={l}")
    f_s, f_l = fractions
    if min(f_s, f_l) < 0 or abs(f_s + f_l - 1) > 1e-12:
        raise ValueError("fractions must be >= 0 and sum to 1")
    if not (0 <= p <= 1 and 0 <= q <= 1):
        raise ValueError("p and q must be probabilities")
    atoms = [
        (s, s, f_s * (1 - p)),
        (s, l, f_s * p),
        (l, l, f_l * (1 - q)),
        (l, s, f_l * q),
    ]
    return DiscreteModel(atoms, name="two_type")


MODEL_NAMES = (
    "exp",
    "weibull",
    "exact",
    "exp_mean_x",
    "reversed_exp",
    "uniform_alpha",
    "two_type",
)


def model_from_config(
    name: str,
    base: str = "exp",
    mean: float = 1.0,
    alpha: float = 0.5,
    short: float = 1.0,
    long: float = 3.0,
    short_fraction: float = 0.5,
    p: float = 0.0,
    q: float = 0.0,
):
    """Construct a model from its configuration fields.

    Parameters
    ----------
    name : str
        One of `MODEL_NAMES`: ``"exp"`` and ``"weibull"`` are exact predictions
        over that base, ``"exact"`` over `base`.
    base : str, optional
        The base service distribution name, by default "exp".
    mean : float, optional
        The mean service time, by default 1.0.
    alpha : float, optional
        The spread of ``"uniform_alpha"``, by default 0.5.
    short, long, short_fraction, p, q : float, optional
        The parameters of ``"two_type"``.

    Raises
    ------
    ValueError
        Raised for an unknown name or invalid parameters.

    """
    if name == "exp":
        return exact(Exponential(mean), name="exp")
    if name == "weibull":
        return exact(distribution_from_name("weibull", mean), name="weibull")
    if name == "exact":
        return exact(distribution_from_name(base, mean))
    if name == "exp_mean_x":
        return exponential_mean_x(mean)
    if name == "reversed_exp":
        if mean != 1.0:
            raise ValueError("reversed_exp is defined for unit-mean service times")
        return reversed_exponential_mean_inv_x()
    if name == "uniform_alpha":
        return uniform_multiplicative(distribution_from_name(base, mean), alpha)
    if name == "two_type":
        return two_type(short, long, (short_fraction, 1 - short_fraction), p, q)
    raise ValueError(f"unknown model {name!r}; choose from {MODEL_NAMES}")

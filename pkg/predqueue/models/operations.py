"""Model-level operations: marginal densities, loads and conditional means.

These dispatch to the model, which uses a registered closed form when it has one
and adaptive quadrature otherwise. Quadrature failures surface as
`NonConvergence` with the best estimate and its residual.

"""

__author__ = "Jonas Van Der Donckt"

from typing import Optional

import numpy as np

from ..utils.quadrature import QuadratureSettings


def _require_density(model, what: str):
    if getattr(model, "is_discrete", False):
        raise TypeError(
            f"{model!r} has point masses and no {what}; use its probability mass"
            " functions instead"
        )


def service_density(model, x: float, settings: Optional[QuadratureSettings] = None) -> float:
    """Return the service-time density ``f_s(x) = ∫ g(x, y) dy``.

    Parameters
    ----------
    model : PredictionModel
        The workload model.
    x : float
        The service time, > 0.
    settings : QuadratureSettings, optional
        The quadrature settings.

    Raises
    ------
    ValueError
        Raised when ``x <= 0``.
    TypeError
        Raised for models with point masses.

    """
    if not x > 0:
        raise ValueError(f"x must be > 0, got {x}")
    _require_density(model, "service density")
    return model.service_density(x, settings)


def predicted_density(model, y: float, settings: Optional[QuadratureSettings] = None) -> float:
    """Return the predicted-time density ``f_p(y) = ∫ g(x, y) dx`` (``y >= 0``)."""
    if not y >= 0:
        raise ValueError(f"y must be >= 0, got {y}")
    _require_density(model, "predicted density")
    return model.predicted_density(y, settings)


def load_below_service(
    model, lam: float, x: float, settings: Optional[QuadratureSettings] = None
) -> float:
    """Return ``ρ_x = λ ∫_0^x t f_s(t) dt``, the load of jobs of size at most x.

    Nondecreasing in x; tends to ``ρ = λ E[S]`` for ``x -> ∞``.

    """
    if not lam > 0:
        raise ValueError(f"lam must be > 0, got {lam}")
    if x <= 0:
        return 0.0
    return model.load_below_service(lam, x, settings)


def load_below_predicted(
    model, lam: float, y: float, settings: Optional[QuadratureSettings] = None
) -> float:
    """Return ``ρ'_y = λ ∫_0^y ∫ x g(x, t) dx dt``, the load of jobs predicted at most y.

    Nondecreasing in y; tends to ``ρ`` for ``y -> ∞`` and is 0 at ``y = 0`` for
    continuous predictions.

    """
    if not lam > 0:
        raise ValueError(f"lam must be > 0, got {lam}")
    if y < 0 or (y == 0 and not getattr(model, "is_discrete", False)):
        return 0.0
    return model.load_below_predicted(lam, y, settings)


def conditional_mean_service(
    model, y: float, settings: Optional[QuadratureSettings] = None
) -> float:
    """Return ``E[X | Y = y] = ∫ x g(x, y) dx / f_p(y)``.

    Raises
    ------
    DensityDomainError
        Raised when ``f_p(y)`` is below the density threshold (or, for discrete
        models, when y is not a possible prediction).

    """
    return model.conditional_mean_service(y, settings)


def is_order_faithful(model, grid: Optional[np.ndarray] = None) -> bool:
    """Whether ordering by prediction orders jobs by expected service time."""
    return model.mean_order(grid) == 1

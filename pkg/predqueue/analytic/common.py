"""Helpers shared by the analytic operations."""

__author__ = "Jonas Van Der Donckt"

from typing import Callable, Tuple

from ..models.prediction_model import ClassModel, total_rate_matches
from ..models.profile import PredictionProfile
from ..utils.errors import Unstable
from ..utils.quadrature import quad


def check_stable(model, lam: float) -> float:
    """Return the load ``ρ = λ E[S]``; raise `Unstable` when it is >= 1."""
    if not lam > 0:
        raise ValueError(f"lam must be > 0, got {lam}")
    if not total_rate_matches(model, lam):
        raise ValueError(
            f"lam={lam} differs from the total arrival rate {model.total_rate} of {model!r}"
        )
    rho = lam * model.mean_service
    if rho >= 1:
        raise Unstable(rho)
    return rho


def require_density_model(model, policy: str):
    if model.is_discrete:
        raise TypeError(f"{policy} on {model!r} needs a model with a density")


def require_pair_model(model, policy: str):
    if isinstance(model, ClassModel):
        raise TypeError(f"{policy} needs (service, predicted) pairs, not classes")


def decade_points(scale: float, upper: float) -> Tuple[float, ...]:
    """Break points ``scale * 10^k`` below `upper`, for integrands with heavy tails."""
    points = []
    p = scale
    while p < upper:
        points.append(p)
        p *= 10
    return tuple(points)


def predicted_pdf_function(model, profile: PredictionProfile) -> Callable[[float], float]:
    """Return a fast evaluator of the predicted density ``f_p``.

    A registered closed form is used when the model has one, otherwise the
    derivative of the interpolated predicted CDF.

    """
    base = getattr(model, "base", None)
    if model.is_exact and base is not None:
        return lambda y: float(base.pdf(y))
    closed = getattr(model, "_predicted_pdf", None)
    if closed is not None:
        return lambda y: float(closed(y))
    return lambda y: profile.derivative("cdf", y)


def predicted_tail(profile: PredictionProfile) -> float:
    """``P(Y > y_max)`` as seen by the profile (the truncated mass)."""
    return max(0.0, 1.0 - float(profile.node_values("cdf")[-1]))


def one_minus(rho: float) -> float:
    """Return ``1 - rho``, raising `Unstable` when it is not positive."""
    gap = 1.0 - rho
    if not gap > 0:
        raise Unstable(rho)
    return gap


def service_partial_moment(model, k: int, x: float) -> float:
    """``E[X^k 1{X <= x}]`` from the base distribution or the model's loads."""
    base = getattr(model, "base", None)
    if base is not None:
        return float(base.partial_moment(k, x))
    if k == 1:
        return model.load_below_service(1.0, x)
    s = model.resolve()
    return quad(lambda t: t**k * model.service_density(t, s), 0.0, min(x, s.x_max), s)[0]

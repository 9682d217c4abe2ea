"""Adaptive quadrature core shared by the models and the analytic engine.

All integrals of the package go through `quad` (scalar integrands) or
`quad_vector` (vector valued integrands), thin wrappers around the QUADPACK
adaptive Gauss-Kronrod routines of `scipy.integrate` that

* accept break points on (semi-)infinite intervals,
* return ``(value, error_estimate)``,
* raise `NonConvergence` (carrying the best estimate and its residual) when the
  requested tolerance is not met.

"""

__author__ = "Jonas Van Der Donckt, Jeroen Van Der Donckt"

import math
import warnings
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate

from .errors import NonConvergence


@dataclass(frozen=True)
class QuadratureSettings:
    """Tolerances and truncation bounds of the adaptive quadrature.

    Parameters
    ----------
    rel_tol : float, optional
        Relative tolerance, by default 1e-8.
    abs_tol : float, optional
        Absolute tolerance, by default 1e-10.
    max_subdivisions : int, optional
        Maximum number of subintervals of the adaptive rule, by default 200.
    x_max : float, optional
        Truncation bound for integrals over the service time. If None, the
        model's ``support_hint`` is used.
    y_max : float, optional
        Truncation bound for integrals over the predicted time. If None, the
        model's ``support_hint`` is used (50 for the unit-mean built-ins).
    interpolation_tol : float, optional
        Relative error allowed for the memoized profile interpolants, verified at
        off-grid points, by default 1e-7.

    """

    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    max_subdivisions: int = 200
    x_max: Optional[float] = None
    y_max: Optional[float] = None
    interpolation_tol: float = 1e-7

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("quadrature tolerances must be > 0")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        for bound in (self.x_max, self.y_max):
            if bound is not None and not bound > 0:
                raise ValueError("truncation bounds must be > 0")
        if not self.interpolation_tol > 0:
            raise ValueError("interpolation_tol must be > 0")

    def loosened(self, factor: float = 100.0) -> "QuadratureSettings":
        """Return settings with tolerances multiplied by `factor` (inner integrals)."""
        return replace(
            self, rel_tol=self.rel_tol * factor, abs_tol=self.abs_tol * factor
        )

    def over_profile(self, factor: float = 100.0) -> "QuadratureSettings":
        """Return settings for integrands read from a `PredictionProfile`.

        Such integrands carry the interpolation error of the profile (and the
        kinks of its piecewise polynomials), so the relative tolerance cannot be
        tighter than `factor` times ``interpolation_tol``.

        """
        return replace(
            self,
            rel_tol=max(self.rel_tol, factor * self.interpolation_tol),
            max_subdivisions=max(self.max_subdivisions, 1000),
        )


DEFAULT_SETTINGS = QuadratureSettings()


def _split(
    lower: float, upper: float, points: Optional[Sequence[float]]
) -> Tuple[Optional[list], Optional[float]]:
    """Keep the break points strictly inside (lower, upper).

    When `upper` is infinite, QUADPACK does not accept break points; the interval
    is then split at the largest break point, which is returned separately.

    """
    if points is None:
        return None, None
    inner = sorted(
        {float(p) for p in points if np.isfinite(p) and lower < p < upper}
    )
    if not len(inner):
        return None, None
    if math.isinf(upper):
        return inner[:-1] or None, inner[-1]
    return inner, None


def _check(value, error, tol_value, message: str, settings: QuadratureSettings):
    allowed = max(settings.abs_tol, settings.rel_tol * abs(tol_value))
    if not np.all(np.isfinite(value)) or error > allowed:
        raise NonConvergence(message, value, error)


def quad(
    integrand: Callable[[float], float],
    lower: float,
    upper: float,
    settings: Optional[QuadratureSettings] = None,
    points: Optional[Sequence[float]] = None,
) -> Tuple[float, float]:
    """Integrate a scalar function with adaptive Gauss-Kronrod quadrature.

    Parameters
    ----------
    integrand : Callable[[float], float]
        The function to integrate. Integrable end-point singularities are allowed.
    lower : float
        The lower integration bound.
    upper : float
        The upper integration bound, may be ``np.inf``.
    settings : QuadratureSettings, optional
        Tolerances, by default `DEFAULT_SETTINGS`.
    points : Sequence[float], optional
        Break points (kinks, discontinuities) of the integrand. Points outside the
        open interval are ignored.

    Returns
    -------
    Tuple[float, float]
        The integral and its absolute error estimate.

    Raises
    ------
    NonConvergence
        Raised when the error estimate exceeds
        ``max(abs_tol, rel_tol * |value|)``.

    """
    settings = settings or DEFAULT_SETTINGS
    if upper <= lower:
        return 0.0, 0.0
    inner, cut = _split(lower, upper, points)
    if cut is not None:
        v1, e1 = quad(integrand, lower, cut, settings, inner)
        v2, e2 = quad(integrand, cut, upper, settings)
        return v1 + v2, e1 + e2

    with warnings.catch_warnings():
        # convergence is judged below, on the returned error estimate
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(
            integrand,
            lower,
            upper,
            epsabs=settings.abs_tol,
            epsrel=settings.rel_tol,
            limit=settings.max_subdivisions,
            points=inner,
            full_output=1,
        )
    value, error = out[0], out[1]
    _check(value, error, value, f"quad on [{lower}, {upper}]", settings)
    return value, error


def quad_vector(
    integrand: Callable[[float], np.ndarray],
    lower: float,
    upper: float,
    settings: Optional[QuadratureSettings] = None,
    points: Optional[Sequence[float]] = None,
) -> Tuple[np.ndarray, float]:
    """Integrate a vector valued function with adaptive Gauss-Kronrod quadrature.

    All components share the subdivision, which makes this the method of choice
    for a handful of moments (e.g. orders 0, 1 and 2) of the same density.

    Parameters
    ----------
    integrand : Callable[[float], np.ndarray]
        The function to integrate; must return an array of fixed shape.
    lower : float
        The lower integration bound.
    upper : float
        The upper integration bound, may be ``np.inf``.
    settings : QuadratureSettings, optional
        Tolerances, by default `DEFAULT_SETTINGS`.
    points : Sequence[float], optional
        Break points of the integrand.

    Returns
    -------
    Tuple[np.ndarray, float]
        The integrals and the (max-norm) error estimate.

    Raises
    ------
    NonConvergence
        Raised when the error estimate exceeds the tolerance, relative to the
        largest component.

    """
    settings = settings or DEFAULT_SETTINGS
    if upper <= lower:
        return np.zeros_like(np.asarray(integrand(lower), dtype=float)), 0.0
    inner, cut = _split(lower, upper, points)
    if cut is not None:
        v1, e1 = quad_vector(integrand, lower, cut, settings, inner)
        v2, e2 = quad_vector(integrand, cut, upper, settings)
        return v1 + v2, e1 + e2

    value, error, info = integrate.quad_vec(
        integrand,
        lower,
        upper,
        epsabs=settings.abs_tol,
        epsrel=settings.rel_tol,
        norm="max",
        limit=settings.max_subdivisions * 10,
        points=inner,
        full_output=True,
    )
    value = np.asarray(value, dtype=float)
    _check(
        value,
        float(error),
        float(np.max(np.abs(value))),
        f"quad_vector on [{lower}, {upper}]",
        settings,
    )
    return value, float(error)

"""Shortest remaining (predicted) processing time.

SRPT is evaluated with the classic Schrage-Miller formulas

    W(x) = λ (E[S^2 1{S <= x}] + x^2 P(S > x)) / (2 (1 - ρ_x)^2),
    R(x) = ∫_0^x dt / (1 - ρ_t).

For SPRPT a job's priority is its remaining predicted time ``(y - a)^+`` after
``a`` units of service; a job whose remaining prediction reached 0 keeps
priority 0 and cannot be preempted. A tagged job with prediction q waits for
the busy periods of the work with priority below q:

* ``b(q) = ρ'_q + λ T_1(q)``, the probability that the server works on a job of
  priority below q, where ``T_k(q) = E[((X + q - Y)^+)^k 1{Y > q}]`` are the
  moments of the work a job predicted above q does once its priority dropped
  under q;
* ``d(q) = (1 - b(q)) F_p(q) + T_0(q)``, the rate at which level-q busy periods
  start;
* ``a_1 = (1 - b) E[X 1{Y <= q}] + T_1`` and ``a_2 = (1 - b) E[X^2 1{Y <= q}] + T_2``,
  which give the initiator work moments ``E[Z] = a_1 / d`` and
  ``E[Z^2] = a_2 / d``.

The wait is ``b (a_2 / (2 a_1 (1 - ρ'_q)) + λ E[X^2 1{Y <= q}] / (2 (1 - ρ'_q)^2))``
and the residence of a job (x, y) is ``Φ(y) - Φ((y - x)^+) + (x - y)^+`` with
``Φ(y) = ∫_0^y du / (1 - ρ'_u)``. Averaged over all jobs this residence is
``∫ T_0(u) / (1 - ρ'_u) du + T_1(0)``.

"""

__author__ = "Jonas Van Der Donckt"

from typing import Callable, NamedTuple, Optional

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from ..simulation.policy import Discipline
from ..utils.errors import DegenerateInitiator, DensityDomainError
from ..utils.quadrature import QuadratureSettings, quad
from .common import (
    check_stable,
    decade_points,
    one_minus,
    predicted_pdf_function,
    predicted_tail,
    require_density_model,
    service_partial_moment,
)
from .logger import log_duration
from .result import AnalyticResult

# Below this initiator probability no level-q busy period is considered to start
INITIATOR_THRESHOLD = 1e-12


class BusyPeriodMoments(NamedTuple):
    """First and second moments of the level-q busy-period quantities.

    X(q) is the size of a job predicted at most q, Z(q) the work of the job that
    initiates a level-q busy period and Y(q) the length of that busy period.

    """

    x1: float
    x2: float
    z1: float
    z2: float
    y1: float
    y2: float


# ------------------------------------------------------------------------- SRPT
@log_duration
def srpt_time(
    model, lam: float, x: Optional[float] = None, settings: Optional[QuadratureSettings] = None
) -> AnalyticResult:
    """Return the SRPT (full information) result for a job of size `x` or overall.

    Parameters
    ----------
    model : PredictionModel
        The workload (with a density); only the service-time marginal matters.
    lam : float
        The arrival rate.
    x : float, optional
        The service time; if None the result is averaged over ``f_s``.
    settings : QuadratureSettings, optional
        The quadrature settings.

    """
    require_density_model(model, "SRPT")
    check_stable(model, lam)
    s = model.resolve(settings)
    base = getattr(model, "base", None)
    points = tuple(base.breakpoints()) if base is not None else None

    def _load(t: float) -> float:
        return model.load_below_service(lam, t, s)

    def _wait(t: float) -> float:
        tail = 1.0 - service_partial_moment(model, 0, t)
        second = service_partial_moment(model, 2, t) + t * t * tail
        return lam * second / (2 * (1 - _load(t)) ** 2)

    def _slowdown(t: float) -> float:
        return 1.0 / (1 - _load(t))

    if x is not None:
        one_minus(_load(x))
        residence = quad(_slowdown, 0.0, x, s, points)[0]
        return AnalyticResult(Discipline.SRPT, lam, _wait(x), residence)

    wait, e_w = quad(lambda t: model.service_density(t, s) * _wait(t), 0.0, s.x_max, s, points)
    # E[R] = ∫ P(S > t) / (1 - ρ_t) dt
    residence, e_r = quad(
        lambda t: (1.0 - service_partial_moment(model, 0, t)) * _slowdown(t),
        0.0,
        s.x_max,
        s,
        points,
    )
    return AnalyticResult(Discipline.SRPT, lam, wait, residence, error_estimate=e_w + e_r)


# ------------------------------------------------------------------------ SPRPT
class _LevelQuantities(NamedTuple):
    cdf: float
    load1: float
    load2: float
    excess0: float
    excess1: float
    excess2: float
    rho_q: float
    b: float
    d: float
    a1: float
    a2: float


def _level(model, lam: float, q: float, s: QuadratureSettings) -> _LevelQuantities:
    if q < 0:
        raise ValueError(f"q must be >= 0, got {q}")
    load, excess = model.profile("load", s), model.profile("excess", s)
    cdf, m1, m2 = load("cdf", q), load("load1", q), load("load2", q)
    t0, t1, t2 = excess("excess0", q), excess("excess1", q), excess("excess2", q)
    rho_q = lam * m1
    b = rho_q + lam * t1
    d = (1 - b) * cdf + t0
    a1 = (1 - b) * m1 + t1
    a2 = (1 - b) * m2 + t2
    return _LevelQuantities(cdf, m1, m2, t0, t1, t2, rho_q, b, d, a1, a2)


def sprpt_b(
    model, lam: float, q: float, settings: Optional[QuadratureSettings] = None
) -> float:
    """Return ``b(q) = ρ'_q + λ E[((X + q - Y)^+) 1{Y > q}]``.

    The probability that an arriving job finds the server busy with a job whose
    remaining predicted time is below q; nondecreasing in q with ``b(∞) = ρ``.

    """
    require_density_model(model, "SPRPT")
    check_stable(model, lam)
    return float(_level(model, lam, q, model.resolve(settings)).b)


def sprpt_d(
    model, lam: float, q: float, settings: Optional[QuadratureSettings] = None
) -> float:
    """Return ``d(q) = (1 - b(q)) F_p(q) + P(q < Y <= X + q)``.

    The probability that a level-q busy period is initiated, per arrival.

    """
    require_density_model(model, "SPRPT")
    check_stable(model, lam)
    return float(_level(model, lam, q, model.resolve(settings)).d)


def sprpt_busy_moments(
    model, lam: float, q: float, settings: Optional[QuadratureSettings] = None
) -> BusyPeriodMoments:
    """Return the moments of X(q), Z(q) and Y(q).

    Raises
    ------
    DensityDomainError
        Raised when no prediction is at most q (``F_p(q) = 0``).
    DegenerateInitiator
        Raised when ``d(q)`` is below the threshold.

    """
    require_density_model(model, "SPRPT")
    check_stable(model, lam)
    lv = _level(model, lam, q, model.resolve(settings))
    if not lv.cdf > 0:
        raise DensityDomainError(f"no prediction is at most q={q}: F_p(q) = {lv.cdf}")
    if not lv.d > INITIATOR_THRESHOLD:
        raise DegenerateInitiator(q, lv.d)
    gap = one_minus(lv.rho_q)
    x1, x2 = lv.load1 / lv.cdf, lv.load2 / lv.cdf
    z1, z2 = lv.a1 / lv.d, lv.a2 / lv.d
    y1 = z1 / gap
    y2 = z2 / gap**2 + lam * z1 * lv.cdf * x2 / gap**3
    return BusyPeriodMoments(x1, x2, z1, z2, y1, y2)


def _sprpt_wait(lv: _LevelQuantities, lam: float) -> float:
    gap = one_minus(lv.rho_q)
    if lv.a1 <= 0:
        # λ a_1 = b (1 - ρ'_q), so no work is ever ahead
        return 0.0
    return lv.b * (lv.a2 / (2 * lv.a1 * gap) + lam * lv.load2 / (2 * gap**2))


def sprpt_wait(
    model, lam: float, q: float, settings: Optional[QuadratureSettings] = None
) -> float:
    """Return the expected wait ``E[W(q)]`` of a job predicted q."""
    require_density_model(model, "SPRPT")
    check_stable(model, lam)
    return _sprpt_wait(_level(model, lam, q, model.resolve(settings)), lam)


def _phi(model, lam: float, s: QuadratureSettings) -> Callable[[np.ndarray], np.ndarray]:
    """``Φ(y) = ∫_0^y du / (1 - ρ'_u)``, as a spline antiderivative (linear beyond)."""
    profile = model.profile("load", s)
    nodes = profile.nodes
    gap = 1 - lam * profile("load1", nodes)
    slope = lam * profile.derivative("load1", nodes) / gap**2
    phi = CubicHermiteSpline(nodes, 1 / gap, slope).antiderivative()
    upper, end, last = nodes[-1], float(phi(nodes[-1])), 1 / gap[-1]

    def _evaluate(y):
        y = np.asarray(y, dtype=float)
        out = np.where(y <= upper, phi(np.clip(y, 0.0, upper)), end + (y - upper) * last)
        return float(out) if np.ndim(out) == 0 else out

    return _evaluate


def _residence_at(model, lam: float, y: float, s: QuadratureSettings, phi) -> float:
    """``E[Φ(y) - Φ((y - X)^+) + (X - y)^+ | Y = y]``."""
    phi_y = phi(y)
    return model.conditional_expectation(
        lambda x: phi_y - phi(max(y - x, 0.0)) + max(x - y, 0.0), y, s, points=(y,)
    )


@log_duration
def sprpt_time(
    model, lam: float, y: Optional[float] = None, settings: Optional[QuadratureSettings] = None
) -> AnalyticResult:
    """Return the SPRPT result for a job predicted `y` (or over all jobs).

    Parameters
    ----------
    model : PredictionModel
        The workload (with a density).
    lam : float
        The arrival rate.
    y : float, optional
        The prediction; if None the result is averaged over ``f_p``.
    settings : QuadratureSettings, optional
        The quadrature settings.

    Returns
    -------
    AnalyticResult
        Its `details` hold the wait and residence integrals and the truncated
        predicted mass.

    Raises
    ------
    Unstable
        Raised when ``ρ >= 1``.
    NonConvergence
        Raised when an integral does not converge; carries the partial estimate.

    """
    require_density_model(model, "SPRPT")
    check_stable(model, lam)
    s = model.resolve(settings)
    if y is not None:
        wait = _sprpt_wait(_level(model, lam, y, s), lam)
        return AnalyticResult(
            Discipline.SPRPT, lam, wait, _residence_at(model, lam, y, s, _phi(model, lam, s))
        )

    load, excess = model.profile("load", s), model.profile("excess", s)
    f_p = predicted_pdf_function(model, load)
    points = decade_points(model.mean_service, s.y_max)
    outer = s.over_profile()
    wait, e_w = quad(
        lambda q: f_p(q) * _sprpt_wait(_level(model, lam, q, s), lam), 0.0, s.y_max, outer, points
    )
    residence, e_r = quad(
        lambda u: excess("excess0", u) / (1 - lam * load("load1", u)),
        0.0,
        s.y_max,
        outer,
        points,
    )
    residence += excess("excess1", 0.0)
    truncated = predicted_tail(load)
    tail = truncated * _sprpt_wait(_level(model, lam, s.y_max, s), lam)
    return AnalyticResult(
        Discipline.SPRPT,
        lam,
        wait,
        residence,
        error_estimate=e_w + e_r + tail,
        details={"wait": wait, "residence": residence, "truncated_mass": truncated},
    )

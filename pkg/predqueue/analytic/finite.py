"""Waiting times of a finite batch of jobs that are all present at time 0.

Two settings are covered:

* the *two-type* batch of ``n_s`` short jobs (size s) and ``n_l`` long jobs
  (size l), where a short job is predicted long with probability p and a long
  job short with probability q;
* a batch of n i.i.d. jobs drawn from a general model, sequenced on their true
  (full information) or predicted size.

Jobs with the same key are sequenced uniformly at random.

"""

__author__ = "Jonas Van Der Donckt"

import itertools
import math
from typing import Optional

import numpy as np

from ..models.prediction_model import ClassModel, DiscreteModel
from ..utils.quadrature import QuadratureSettings, quad
from .common import decade_points, predicted_pdf_function

MODES = ("full", "random", "predicted")
FORMS = ("exact", "asymptotic")


def _check_two_type(n_s, n_l, s, l, p, q):  # noqa: E741
    if not 0 < s < l:
        raise ValueError(f"need 0 < s < l, got s={s}, l={l}")
    if not (0 <= p <= 1 and 0 <= q <= 1):
        raise ValueError(f"p and q must be probabilities, got p={p}, q={q}")
    if not (n_s >= 1 and n_l >= 1):
        raise ValueError(f"need at least one job of each type, got {n_s}, {n_l}")


def two_type_wait(
    n_s: float,
    n_l: float,
    s: float,
    l: float,  # noqa: E741
    p: float = 0.0,
    q: float = 0.0,
    mode: str = "predicted",
    form: str = "exact",
) -> float:
    """Return the expected per-job wait of the two-type batch.

    Parameters
    ----------
    n_s, n_l : float
        The number of short and long jobs (>= 1).
    s, l : float
        The short and long service times, ``0 < s < l``.
    p : float, optional
        Probability that a short job is predicted long, by default 0.
    q : float, optional
        Probability that a long job is predicted short, by default 0.
    mode : str, optional
        ``"full"`` (shortest job first with known sizes), ``"random"`` (no
        information, random order) or ``"predicted"`` (shortest predicted job
        first), by default "predicted".
    form : str, optional
        ``"exact"`` or ``"asymptotic"`` (the leading order in n, where a job's
        own class mate count ``n_s - 1`` is replaced by ``n_s``), by default
        "exact".

    Returns
    -------
    float
        The expected waiting time averaged over all n jobs.

    """
    _check_two_type(n_s, n_l, s, l, p, q)
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if form not in FORMS:
        raise ValueError(f"form must be one of {FORMS}, got {form!r}")
    n = n_s + n_l

    if form == "asymptotic":
        common = n_s**2 * s + n_l**2 * l
        if mode == "full":
            return (common + 2 * n_s * n_l * s) / (2 * n)
        if mode == "random":
            return (common + n_s * n_l * (s + l)) / (2 * n)
        mixed = (2 - (p + q)) * s + (p + q) * l
        return (common + n_s * n_l * mixed) / (2 * n)

    if mode == "full":
        return (n_s * (n_s - 1) / 2 * s + n_l * (n_l - 1) / 2 * l + n_s * n_l * s) / n
    if mode == "random":
        short = (n_s - 1) / 2 * s + n_l / 2 * l
        long = n_s / 2 * s + (n_l - 1) / 2 * l
        return (n_s * short + n_l * long) / n

    # Short predicted short; short predicted long; long predicted long; long
    # predicted short. Mates sharing the prediction are ahead with probability 1/2.
    short_short = (1 - p) * (n_s - 1) / 2 * s + q * n_l / 2 * l
    short_long = (
        (1 - p) * (n_s - 1) * s
        + p * (n_s - 1) / 2 * s
        + (1 - q) * n_l / 2 * l
        + q * n_l * l
    )
    long_long = (
        (1 - q) * (n_l - 1) / 2 * l
        + q * (n_l - 1) * l
        + p * n_s / 2 * s
        + (1 - p) * n_s * s
    )
    long_short = q * (n_l - 1) / 2 * l + (1 - p) * n_s / 2 * s
    total = n_s * ((1 - p) * short_short + p * short_long) + n_l * (
        (1 - q) * long_long + q * long_short
    )
    return total / n


def two_type_pom(
    n_s: float,
    n_l: float,
    s: float,
    l: float,  # noqa: E741
    p: float,
    q: float,
    form: str = "asymptotic",
) -> float:
    """Return the price of misprediction R (predicted over full-information wait)."""
    return price_of_misprediction(
        two_type_wait(n_s, n_l, s, l, p, q, mode="full", form=form),
        two_type_wait(n_s, n_l, s, l, p, q, mode="predicted", form=form),
    )


def two_type_pom_bound(s: float, l: float, p: float, q: float) -> float:  # noqa: E741
    """Return the bound ``1 + (p + q)(sqrt(l / s) - 1) / 2`` on the two-type price.

    The asymptotic ratio is largest for ``n_s / n_l = sqrt(l / s)``, where it
    equals the bound.

    """
    if not 0 < s < l:
        raise ValueError(f"need 0 < s < l, got s={s}, l={l}")
    if not (0 <= p <= 1 and 0 <= q <= 1):
        raise ValueError(f"p and q must be probabilities, got p={p}, q={q}")
    return 1.0 + (p + q) * (math.sqrt(l / s) - 1.0) / 2.0


def two_type_enumerate(
    n_s: int,
    n_l: int,
    s: float,
    l: float,  # noqa: E741
    p: float,
    q: float,
) -> float:
    """Return the predicted two-type wait by enumerating every classification.

    Each of the ``2^n`` prediction outcomes is weighted by its probability; for
    an outcome, jobs predicted short go first and the expected wait of random
    order within each predicted group is summed pairwise. Intended for small
    batches (``n <= 12``) as an independent check of `two_type_wait`.

    """
    _check_two_type(n_s, n_l, s, l, p, q)
    sizes = [s] * int(n_s) + [l] * int(n_l)
    flip = [p] * int(n_s) + [q] * int(n_l)
    n = len(sizes)
    expected = 0.0
    for outcome in itertools.product((0, 1), repeat=n):
        # 1 means the prediction is wrong
        weight = 1.0
        for wrong, prob in zip(outcome, flip):
            weight *= prob if wrong else 1 - prob
        if weight == 0:
            continue
        predicted_long = [
            (size == l) != bool(wrong) for size, wrong in zip(sizes, outcome)
        ]
        wait = 0.0
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                if predicted_long[j] < predicted_long[i]:
                    wait += sizes[j]
                elif predicted_long[j] == predicted_long[i]:
                    wait += sizes[j] / 2
        expected += weight * wait / n
    return expected


def price_of_misprediction(full: float, predicted: float) -> float:
    """Return the price of misprediction ``predicted / full``.

    Parameters
    ----------
    full : float
        The metric with full information (> 0).
    predicted : float
        The same metric when scheduling on predictions.

    """
    if not (np.isfinite(full) and np.isfinite(predicted)):
        raise ValueError(f"metrics must be finite, got {full}, {predicted}")
    if not full > 0:
        raise ValueError(f"the full-information metric must be > 0, got {full}")
    return predicted / full


def _check_n(n: int):
    if not n >= 2:
        raise ValueError(f"n must be >= 2, got {n}")


def _check_batch_model(model):
    if isinstance(model, ClassModel):
        raise TypeError("finite batches need a model of (service, predicted) pairs")


def _pairwise_wait(model: DiscreteModel, keys: np.ndarray) -> float:
    """``Σ_ij p_i p_j x_j (1{k_j < k_i} + 1{k_j = k_i} / 2)`` over the atoms."""
    p, x = model.probability, model.service
    ahead = (keys[None, :] < keys[:, None]) + 0.5 * (keys[None, :] == keys[:, None])
    return float(np.sum(p[:, None] * p[None, :] * x[None, :] * ahead))


def finite_n_wait_full(model, n: int, settings: Optional[QuadratureSettings] = None) -> float:
    """Return ``(n - 1) ∫ f_s(x) ∫_0^x z f_s(z) dz dx``, the per-job SJF batch wait.

    Parameters
    ----------
    model : PredictionModel or DiscreteModel
        The workload; only the service-time marginal matters.
    n : int
        The batch size, >= 2.
    settings : QuadratureSettings, optional
        The quadrature settings.

    """
    _check_n(n)
    _check_batch_model(model)
    if model.is_discrete:
        return (n - 1) * _pairwise_wait(model, model.service)
    s = model.resolve(settings)
    base = getattr(model, "base", None)
    points = tuple(base.breakpoints()) if base is not None else None
    value = quad(
        lambda x: model.service_density(x, s) * model.load_below_service(1.0, x, s),
        0.0,
        s.x_max,
        s,
        points,
    )[0]
    return (n - 1) * value


def finite_n_wait_predicted(
    model, n: int, settings: Optional[QuadratureSettings] = None
) -> float:
    """Return ``(n - 1) ∫ f_p(y) E[X 1{Y <= y}] dy``, the per-job SPJF batch wait.

    For the exact-prediction model this equals `finite_n_wait_full`.

    """
    _check_n(n)
    _check_batch_model(model)
    if model.is_discrete:
        return (n - 1) * _pairwise_wait(model, model.predicted)
    if model.is_exact:
        return finite_n_wait_full(model, n, settings)
    s = model.resolve(settings)
    profile = model.profile("load", s)
    f_p = predicted_pdf_function(model, profile)
    value = quad(
        lambda y: f_p(y) * profile("load1", y),
        0.0,
        s.y_max,
        s.over_profile(),
        decade_points(model.mean_service, s.y_max),
    )[0]
    return (n - 1) * value


def finite_n_wait_random(model, n: int) -> float:
    """Return ``(n - 1) E[S] / 2``, the per-job batch wait in random order."""
    _check_n(n)
    _check_batch_model(model)
    return (n - 1) * model.mean_service / 2

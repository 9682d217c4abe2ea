"""Non-preemptive priority classes, with true or predicted class labels.

Class 0 has the highest priority. With loads ``ρ_i`` and ``σ_i = Σ_{j<=i} ρ_j``
the expected wait of class i is

    E[W(i)] = Σ_j λ_j E[S_j^2] / (2 (1 - σ_i)(1 - σ_{i-1})).

When jobs are prioritized on a predicted label, the same formula holds with the
predicted loads ``ρ'_i = Σ_j λ_j E[S_j] m_ji``; the numerator does not depend on
the predictions.

"""

__author__ = "Jonas Van Der Donckt"

from typing import Optional

import numpy as np

from ..models.prediction_model import ClassModel
from ..simulation.policy import Discipline
from ..utils.errors import Unstable
from .common import check_stable
from .logger import log_duration
from .result import AnalyticResult


def _class_waits(loads: np.ndarray, residual: float, upto: Optional[int] = None) -> np.ndarray:
    """Waits of classes ``0..upto`` for the given loads and mean residual work."""
    loads = np.asarray(loads, dtype=float)
    upto = len(loads) - 1 if upto is None else upto
    sigma = np.cumsum(loads)[: upto + 1]
    previous = sigma - loads[: upto + 1]
    for i, cum in enumerate(sigma):
        if cum >= 1:
            raise Unstable(float(cum), class_index=i)
    return residual / ((1 - sigma) * (1 - previous))


def _residual(cm: ClassModel) -> float:
    """``λ E[S^2] / 2``, the same with or without predictions."""
    return float(np.sum(cm.arrival_rates * cm.second_moments) / 2)


def _check_class(cm: ClassModel, i: int):
    if not isinstance(cm, ClassModel):
        raise TypeError(f"priority formulas need a ClassModel, got {cm!r}")
    if not 0 <= i < cm.n_classes:
        raise IndexError(f"class index {i} out of range for {cm.n_classes} classes")


def priority_wait(cm: ClassModel, i: int, predicted: bool = False) -> float:
    """Return the expected wait of the jobs of (predicted) class i.

    Parameters
    ----------
    cm : ClassModel
        The class system.
    i : int
        The 0-based class index.
    predicted : bool, optional
        Whether jobs are prioritized on their predicted class, by default False.

    Raises
    ------
    Unstable
        Raised when the cumulative load up to class i is >= 1; names the class.

    """
    _check_class(cm, i)
    loads = cm.predicted_loads if predicted else cm.loads
    return float(_class_waits(loads, _residual(cm), upto=i)[i])


def priority_mean_wait(cm: ClassModel, predicted: bool = False) -> float:
    """Return the wait averaged over all jobs (weighted by the class arrival rates)."""
    _check_class(cm, 0)
    loads = cm.predicted_loads if predicted else cm.loads
    rates = cm.predicted_rates if predicted else cm.arrival_rates
    waits = _class_waits(loads, _residual(cm))
    return float(np.sum(rates * waits) / cm.total_rate)


def priority_wait_true_class(cm: ClassModel, i: int) -> float:
    """Return the expected wait of true class i when scheduling on predicted labels.

    A job of class i is labelled j with probability ``m_ij`` and then waits like
    predicted class j: ``Σ_j m_ij E[W'(j)]``.

    """
    _check_class(cm, i)
    waits = _class_waits(cm.predicted_loads, _residual(cm))
    return float(cm.confusion[i] @ waits)


def priority_pom(cm: ClassModel) -> float:
    """Return the price of misprediction of the class system.

    This is the ratio of ``Σ_i λ'_i / ((1 - σ'_i)(1 - σ'_{i-1}))`` to
    ``Σ_i λ_i / ((1 - σ_i)(1 - σ_{i-1}))``, i.e. the mean wait with predicted
    labels over the mean wait with true labels.

    Raises
    ------
    Unstable
        Raised when the total load is >= 1.

    """
    _check_class(cm, 0)
    predicted = _class_waits(cm.predicted_loads, 1.0)
    informed = _class_waits(cm.loads, 1.0)
    return float(np.sum(cm.predicted_rates * predicted) / np.sum(cm.arrival_rates * informed))


@log_duration
def priority_time(cm: ClassModel, lam: Optional[float] = None, predicted: bool = False):
    """Return the `AnalyticResult` of (predicted) priority scheduling.

    Parameters
    ----------
    cm : ClassModel
        The class system.
    lam : float, optional
        The total arrival rate; must match that of `cm` when given.
    predicted : bool, optional
        Whether jobs are prioritized on their predicted class, by default False.

    """
    _check_class(cm, 0)
    lam = cm.total_rate if lam is None else lam
    check_stable(cm, lam)
    return AnalyticResult(
        Discipline.PRED_PRIORITY if predicted else Discipline.PRIORITY,
        lam,
        expected_wait=priority_mean_wait(cm, predicted),
        expected_residence=cm.mean_service,
    )


@log_duration
def fifo_time(model, lam: float) -> AnalyticResult:
    """Return the M/G/1 FIFO result ``E[T] = E[S] + λ E[S^2] / (2 (1 - ρ))``.

    The wait is the single-class case of the priority formula; it does not
    depend on predictions.

    Raises
    ------
    Unstable
        Raised when ``ρ = λ E[S] >= 1``.

    """
    rho = check_stable(model, lam)
    wait = _class_waits([rho], lam * model.second_moment_service / 2)[0]
    return AnalyticResult(
        Discipline.FIFO,
        lam,
        expected_wait=wait,
        expected_residence=model.mean_service,
        details={"load": rho},
    )

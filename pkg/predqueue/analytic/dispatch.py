"""Map a scheduling policy and a model to its analytic evaluation."""

__author__ = "Jonas Van Der Donckt, Jeroen Van Der Donckt"

from pathlib import Path
from typing import Iterable, Optional, Union

import numpy as np
import pandas as pd

from ..models.prediction_model import ClassModel
from ..simulation.policy import Discipline, PolicySpec
from ..utils.data import to_list
from ..utils.errors import DegenerateInitiator, NonConvergence, Unstable
from ..utils.logging import log_to_file
from ..utils.quadrature import QuadratureSettings
from .logger import logger
from .priority import fifo_time, priority_time
from .result import AnalyticResult
from .sjf import pspjf_time, psjf_time, sjf_time, spept_time, spjf_time
from .srpt import sprpt_time, srpt_time

_DENSITY_ONLY = {
    Discipline.PSJF: psjf_time,
    Discipline.PSPJF: pspjf_time,
    Discipline.SRPT: srpt_time,
    Discipline.SPRPT: sprpt_time,
    Discipline.SPEPT: spept_time,
}


def has_analytic(policy: Union[PolicySpec, str], model) -> bool:
    """Whether `analyze` has a formula for this policy on this kind of model."""
    discipline = PolicySpec.parse(policy).discipline
    if discipline == Discipline.FIFO:
        return True
    if isinstance(model, ClassModel):
        return discipline in (Discipline.PRIORITY, Discipline.PRED_PRIORITY)
    if model.is_discrete:
        return discipline in (
            Discipline.SJF,
            Discipline.SPJF,
            Discipline.PRIORITY,
            Discipline.PRED_PRIORITY,
        )
    return discipline not in (Discipline.PRIORITY, Discipline.PRED_PRIORITY)


def analyze(
    policy: Union[PolicySpec, Discipline, str],
    model,
    lam: float,
    settings: Optional[QuadratureSettings] = None,
) -> AnalyticResult:
    """Return the overall `AnalyticResult` of `policy` for `model` at rate `lam`.

    Parameters
    ----------
    policy : Union[PolicySpec, Discipline, str]
        The scheduling policy.
    model : PredictionModel, DiscreteModel or ClassModel
        The workload.
    lam : float
        The arrival rate.
    settings : QuadratureSettings, optional
        The quadrature settings.

    Raises
    ------
    TypeError
        Raised when there is no formula for this policy on this kind of model.
    Unstable
        Raised when ``ρ >= 1``.
    NonConvergence
        Raised when the quadrature fails.

    """
    spec = PolicySpec.parse(policy)
    discipline = spec.discipline
    if not has_analytic(spec, model):
        raise TypeError(f"no analytic formula for {spec.name} on {model!r}")
    if discipline == Discipline.FIFO:
        return fifo_time(model, lam)
    if discipline in (Discipline.PRIORITY, Discipline.PRED_PRIORITY):
        predicted = discipline == Discipline.PRED_PRIORITY
        if not isinstance(model, ClassModel):
            model = model.to_class_model(lam, by="predicted" if predicted else "service")
        return priority_time(model, lam, predicted)
    if discipline == Discipline.SJF:
        return sjf_time(model, lam, settings)
    if discipline == Discipline.SPJF:
        return spjf_time(model, lam, settings)
    return _DENSITY_ONLY[discipline](model, lam, settings=settings)


def analytic_table(
    model,
    policies: Iterable[Union[PolicySpec, str]],
    lambdas: Iterable[float],
    settings: Optional[QuadratureSettings] = None,
    logging_file_path: Optional[Union[str, Path]] = None,
) -> pd.DataFrame:
    """Evaluate every (λ, policy) cell; failures are recorded, not raised.

    Parameters
    ----------
    model : PredictionModel, DiscreteModel or ClassModel
        The workload.
    policies : Iterable[Union[PolicySpec, str]]
        The policies.
    lambdas : Iterable[float]
        The arrival rates.
    settings : QuadratureSettings, optional
        The quadrature settings.
    logging_file_path : Union[str, Path], optional
        The file path where the evaluation durations are logged. Be aware that
        the file is cleared first. If not provided, nothing is logged to a file.

    Returns
    -------
    pd.DataFrame
        One row per cell with ``lambda, policy, expected_wait,
        expected_residence, expected_total, error_estimate, note``; cells that
        are unstable, fail to converge or have no formula hold NaN and a note.

    """
    rows = []
    with log_to_file(logging_file_path, logger):
        for lam in to_list(lambdas):
            for policy in to_list(policies):
                spec = PolicySpec.parse(policy)
                row = {"lambda": float(lam), "policy": spec.name}
                try:
                    row.update(analyze(spec, model, lam, settings).to_dict())
                    row["note"] = ""
                except (Unstable, NonConvergence, DegenerateInitiator, TypeError) as e:
                    logger.warning(f"{spec.name} at lambda {lam}: {e}")
                    row.update(
                        {
                            k: np.nan
                            for k in (
                                "expected_wait",
                                "expected_residence",
                                "expected_total",
                                "error_estimate",
                            )
                        }
                    )
                    row["note"] = f"{type(e).__name__}: {e}"
                rows.append(row)
    return pd.DataFrame(rows)

"""Replicated simulation experiments and analytic comparison tables.

.. include:: ../../docs/pdoc_include/experiment.md

"""

__author__ = "Jonas Van Der Donckt, Jeroen Van Der Donckt"

from .. import __pdoc__
from .harness import (
    alpha_sweep,
    analytic_column,
    default_n_jobs,
    run_plan,
    simulate_plan,
)
from .logger import get_cell_stats, get_trial_logs
from .plan import ExperimentPlan
from .stats import TrialSummary, summarize
from .table import ExperimentTable

__pdoc__["ExperimentPlan.__init__"] = False

__all__ = [
    "ExperimentPlan",
    "ExperimentTable",
    "TrialSummary",
    "run_plan",
    "simulate_plan",
    "analytic_column",
    "alpha_sweep",
    "summarize",
    "default_n_jobs",
    "get_trial_logs",
    "get_cell_stats",
]

"""Analytic waiting and response times of scheduling policies with predictions.

.. include:: ../../docs/pdoc_include/analytic.md

"""

__author__ = "Jonas Van Der Donckt, Jeroen Van Der Donckt"

from .. import __pdoc__
from ..utils.quadrature import DEFAULT_SETTINGS, QuadratureSettings, quad, quad_vector
from .dispatch import analytic_table, analyze, has_analytic
from .finite import (
    finite_n_wait_full,
    finite_n_wait_predicted,
    finite_n_wait_random,
    price_of_misprediction,
    two_type_enumerate,
    two_type_pom,
    two_type_pom_bound,
    two_type_wait,
)
from .logger import get_analytic_logs, get_analytic_stats
from .priority import (
    fifo_time,
    priority_mean_wait,
    priority_pom,
    priority_time,
    priority_wait,
    priority_wait_true_class,
)
from .result import AnalyticResult
from .sjf import (
    psjf_time,
    pspjf_time,
    sjf_time,
    sjf_wait,
    spept_time,
    spjf_pom,
    spjf_time,
    spjf_wait,
)
from .srpt import (
    BusyPeriodMoments,
    sprpt_b,
    sprpt_busy_moments,
    sprpt_d,
    sprpt_time,
    sprpt_wait,
    srpt_time,
)

__pdoc__["AnalyticResult.__init__"] = False

__all__ = [
    # quadrature
    "quad",
    "quad_vector",
    "QuadratureSettings",
    "DEFAULT_SETTINGS",
    # results & dispatch
    "AnalyticResult",
    "analyze",
    "analytic_table",
    "has_analytic",
    # finite batches
    "two_type_wait",
    "two_type_pom",
    "two_type_pom_bound",
    "two_type_enumerate",
    "finite_n_wait_full",
    "finite_n_wait_predicted",
    "finite_n_wait_random",
    "price_of_misprediction",
    # priority classes
    "priority_wait",
    "priority_mean_wait",
    "priority_wait_true_class",
    "priority_pom",
    "priority_time",
    "fifo_time",
    # shortest (predicted) job first
    "sjf_wait",
    "sjf_time",
    "spjf_wait",
    "spjf_time",
    "spjf_pom",
    "psjf_time",
    "pspjf_time",
    "spept_time",
    # shortest remaining (predicted) processing time
    "srpt_time",
    "sprpt_b",
    "sprpt_d",
    "sprpt_wait",
    "sprpt_busy_moments",
    "sprpt_time",
    "BusyPeriodMoments",
    # logging
    "get_analytic_logs",
    "get_analytic_stats",
]

"""Discrete-event simulation of a single-server queue with predictions.

.. include:: ../../docs/pdoc_include/simulation.md

"""

__author__ = "Jonas Van Der Donckt, Jeroen Van Der Donckt"

from .. import __pdoc__
from .job import Job
from .logger import get_simulation_logs
from .policy import INFORMED, PREEMPTIVE, Discipline, PolicySpec
from .simulator import (
    EventCalendar,
    ReadySet,
    SimConfig,
    TrialResult,
    run_finite_batches,
    run_trial,
    run_trial_finite,
    run_trace,
)

__pdoc__["SimConfig.__init__"] = False

__all__ = [
    "Discipline",
    "PolicySpec",
    "PREEMPTIVE",
    "INFORMED",
    "Job",
    "SimConfig",
    "TrialResult",
    "EventCalendar",
    "ReadySet",
    "run_trial",
    "run_trial_finite",
    "run_trace",
    "run_finite_batches",
    "get_simulation_logs",
]

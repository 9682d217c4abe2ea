"""Replicated simulation trials, compared against the analytic engine.

The trials of a plan are independent, so they are executed in a process pool;
the aggregation does not depend on their completion order.

"""

__author__ = "Jonas Van Der Donckt, Jeroen Van Der Donckt"

import os
import time
import traceback
from pathlib import Path
from typing import Iterable, List, Optional, Tuple, Union

import numpy as np
import pandas as pd
from multiprocess import Pool
from tqdm.auto import tqdm

from ..analytic import analyze, has_analytic
from ..models import Exponential, uniform_multiplicative, weibull_base
from ..simulation import PolicySpec, SimConfig, TrialResult, run_trial
from ..simulation.logger import logger as simulation_logger
from ..utils.data import parse_float_list
from ..utils.errors import PredQueueError
from ..utils.logging import log_to_file
from ..utils.quadrature import QuadratureSettings
from .logger import logger
from .plan import ExperimentPlan
from .table import TRIAL_COLUMNS, ExperimentTable

BASE_DISTRIBUTIONS = ("exponential", "weibull")

# Domain failures of the analytic engine are reported per cell; argument errors
# and bugs are raised
_CELL_ERRORS = (PredQueueError,)

_Task = Tuple[int, int, SimConfig]

ALPHA_SWEEP_COLUMNS = [
    "alpha",
    "policy",
    "mean",
    "stddev",
    "ci_low",
    "ci_high",
    "n_trials",
    "analytic_spjf",
]


def default_n_jobs() -> Optional[int]:
    """Return the number of processes set by ``PREDQUEUE_N_JOBS`` (None if unset)."""
    value = os.environ.get("PREDQUEUE_N_JOBS", "").strip()
    return int(value) if value else None


def _executor(task: _Task) -> Tuple[int, int, SimConfig, TrialResult]:
    idx, trial, config = task
    t_start = time.time()
    result = run_trial(config)
    logger.info(
        f"Finished trial [{trial}] of [{config.policy.name}] for model "
        f"[{getattr(config.model, 'name', config.model)}] at lambda [{config.lam}] "
        f"with seed [{config.seed}] in [{time.time() - t_start} seconds]!"
    )
    return idx, trial, config, result


def _run_tasks(tasks: List[_Task], n_jobs: Optional[int], show_progress: bool) -> list:
    """Execute the trials, sequentially or in a process pool."""
    if n_jobs is None:
        n_jobs = default_n_jobs()
    if n_jobs is None:
        n_jobs = os.cpu_count()
    n_jobs = min(n_jobs, len(tasks))

    outputs = None
    if n_jobs in [0, 1]:
        it = tqdm(tasks) if show_progress else tasks
        try:
            outputs = [_executor(task) for task in it]
        except Exception:
            traceback.print_exc()
    else:
        with Pool(processes=n_jobs) as pool:
            results = pool.imap_unordered(_executor, tasks)
            if show_progress:
                results = tqdm(results, total=len(tasks))
            try:
                outputs = [r for r in results]
            except Exception:
                traceback.print_exc()
                pool.terminate()
            finally:
                # Close & join because: https://github.com/uqfoundation/pathos/issues/131
                pool.close()
                pool.join()

    if outputs is None:
        raise RuntimeError(
            "Simulation halted due to error while running one (or multiple) trial(s)! "
            + "See stack trace above."
        )
    return sorted(outputs, key=lambda out: out[0])


def simulate_plan(
    plan: ExperimentPlan, n_jobs: Optional[int] = None, show_progress: bool = False
) -> pd.DataFrame:
    """Run every trial of a plan; return one row per trial, in plan order.

    The rows have the columns ``lambda, policy, trial, seed, completed,
    mean_total, mean_wait``.

    """
    tasks = [(idx, idx % plan.trials, config) for idx, config in enumerate(plan.configs())]
    rows = [
        {
            "lambda": config.lam,
            "policy": config.policy.name,
            "trial": trial,
            "seed": config.seed,
            "completed": result.completed_count,
            "mean_total": result.mean_time_in_system,
            "mean_wait": result.mean_wait,
        }
        for _, trial, config, result in _run_tasks(tasks, n_jobs, show_progress)
    ]
    return pd.DataFrame(rows, columns=TRIAL_COLUMNS)


def analytic_column(
    model,
    lambdas: Iterable[float],
    policies: Iterable[Union[PolicySpec, str]],
    settings: Optional[QuadratureSettings] = None,
) -> pd.DataFrame:
    """Return ``lambda, policy, analytic_total, note`` for every cell.

    Cells without a formula, unstable cells and cells whose quadrature fails
    hold NaN and a note.

    """
    rows = []
    for lam in lambdas:
        for policy in policies:
            spec = PolicySpec.parse(policy)
            row = {"lambda": float(lam), "policy": spec.name, "analytic_total": np.nan}
            if not has_analytic(spec, model):
                row["note"] = "no analytic formula"
            else:
                try:
                    row["analytic_total"] = analyze(spec, model, lam, settings).expected_total
                    row["note"] = ""
                except _CELL_ERRORS as e:
                    logger.warning(f"analytic {spec.name} at lambda {lam}: {e}")
                    row["note"] = f"{type(e).__name__}: {e}"
            rows.append(row)
    return pd.DataFrame(rows, columns=["lambda", "policy", "analytic_total", "note"])


def run_plan(
    plan: ExperimentPlan,
    n_jobs: Optional[int] = None,
    show_progress: bool = False,
    analytic: bool = True,
    logging_file_path: Optional[Union[str, Path]] = None,
) -> ExperimentTable:
    """Run every trial of a plan and compare the cells with the analytic values.

    Parameters
    ----------
    plan : ExperimentPlan
        The experiment.
    n_jobs : int, optional
        The number of processes. If None, ``PREDQUEUE_N_JOBS`` is used, and
        when that is unset the number of CPUs; 0 or 1 run sequentially. By
        default None.
    show_progress : bool, optional
        Whether a progress bar is shown, by default False.
    analytic : bool, optional
        Whether the analytic column is computed, by default True.
    logging_file_path : Union[str, Path], optional
        The file path where the trial durations are logged. Be aware that the
        file is cleared first. If not provided, nothing is logged to a file.

    Returns
    -------
    ExperimentTable
        One summary row per cell (in plan order) and one row per trial.
        Identical plans give identical tables.

    Raises
    ------
    RuntimeError
        Raised when a trial fails; its stack trace is printed.

    """
    with log_to_file(logging_file_path, logger, simulation_logger):
        trials = simulate_plan(plan, n_jobs, show_progress)
        columns = None
        if analytic:
            columns = analytic_column(plan.model, plan.lambdas, plan.policies, plan.settings)

    return ExperimentTable.from_trials(trials, columns)


def alpha_sweep(
    base_dist: str = "exponential",
    lam: float = 0.95,
    alphas: Union[str, Iterable[float]] = (0.0, 0.25, 0.5, 0.75, 1.0),
    policies: Iterable[Union[PolicySpec, str]] = ("SPJF", "SPRPT"),
    trials: int = 50,
    horizon: float = 200_000,
    warmup: float = 20_000,
    base_seed: int = 0,
    analytic: bool = True,
    n_jobs: Optional[int] = None,
    show_progress: bool = False,
    logging_file_path: Optional[Union[str, Path]] = None,
) -> pd.DataFrame:
    """Simulate policies under predictions uniform on ``[(1-α)x, (1+α)x]``.

    Every α uses the same seeds, so the sweep compares the policies on common
    arrival streams. For ``α = 0`` the predictions are exact.

    Parameters
    ----------
    base_dist : str, optional
        ``"exponential"`` (mean 1) or ``"weibull"`` (``1 - exp(-sqrt(2x))``,
        mean 1), by default "exponential".
    lam : float, optional
        The arrival rate, by default 0.95.
    alphas : Union[str, Iterable[float]], optional
        The spreads, each in [0, 1], by default (0, 0.25, 0.5, 0.75, 1).
    policies : Iterable[Union[PolicySpec, str]], optional
        The policies, by default ("SPJF", "SPRPT").
    trials, horizon, warmup, base_seed : optional
        As in `ExperimentPlan`.
    analytic : bool, optional
        Whether the ``analytic_spjf`` column (the SPJF total of the α-model) is
        computed, by default True.
    n_jobs, show_progress, logging_file_path : optional
        As in `run_plan`.

    Returns
    -------
    pd.DataFrame
        One row per (α, policy) with ``alpha, policy, mean, stddev, ci_low,
        ci_high, n_trials, analytic_spjf``.

    """
    if base_dist not in BASE_DISTRIBUTIONS:
        raise ValueError(f"base_dist must be one of {BASE_DISTRIBUTIONS}, got {base_dist!r}")
    alphas = parse_float_list(alphas)
    if not len(alphas) or any(not 0 <= a <= 1 for a in alphas):
        raise ValueError(f"every alpha must be in [0, 1], got {alphas}")
    base = Exponential(1.0) if base_dist == "exponential" else weibull_base()

    rows = []
    with log_to_file(logging_file_path, logger, simulation_logger):
        for a in alphas:
            model = uniform_multiplicative(base, a)
            plan = ExperimentPlan(model, [lam], policies, trials, horizon, warmup, base_seed)
            table = ExperimentTable.from_trials(simulate_plan(plan, n_jobs, show_progress))
            spjf = np.nan
            if analytic:
                try:
                    spjf = analyze("SPJF", model, lam).expected_total
                except _CELL_ERRORS as e:
                    logger.warning(f"analytic SPJF at alpha {a}: {e}")
            for r in table.summary.itertuples(index=False):
                rows.append(
                    {
                        "alpha": a,
                        "policy": r.policy,
                        "mean": r.sim_mean_total,
                        "stddev": r.sim_stddev,
                        "ci_low": r.ci_low,
                        "ci_high": r.ci_high,
                        "n_trials": r.n_trials,
                        "analytic_spjf": spjf,
                    }
                )

    return pd.DataFrame(rows, columns=ALPHA_SWEEP_COLUMNS)

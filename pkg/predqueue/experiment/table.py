"""Analytic-versus-simulation result tables."""

__author__ = "Jeroen Van Der Donckt, Jonas Van Der Donckt"

import math
from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd

from .stats import summarize

SUMMARY_COLUMNS = [
    "lambda",
    "policy",
    "analytic_total",
    "sim_mean_total",
    "sim_stddev",
    "ci_low",
    "ci_high",
    "n_trials",
    "rel_error",
    "note",
]

TRIAL_COLUMNS = ["lambda", "policy", "trial", "seed", "completed", "mean_total", "mean_wait"]

# The summary columns computed from the trials alone
_SIMULATED_COLUMNS = ["lambda", "policy"] + SUMMARY_COLUMNS[3:8]


def format_number(value, digits: int = 6) -> str:
    """Format a number with `digits` significant digits (empty for NaN)."""
    if isinstance(value, str):
        return value
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{value:.{digits}g}"


def to_markdown(df: pd.DataFrame, digits: int = 6) -> str:
    """Render a DataFrame as a Markdown (pipe) table with `digits` significant digits."""
    header = "| " + " | ".join(str(c) for c in df.columns) + " |"
    rule = "|" + "|".join("---" for _ in df.columns) + "|"
    rows = [
        "| " + " | ".join(format_number(v, digits) for v in row) + " |"
        for row in df.itertuples(index=False)
    ]
    return "\n".join([header, rule] + rows) + "\n"


class ExperimentTable:
    """The per-trial results of an experiment and their per-cell summary.

    Parameters
    ----------
    summary : pd.DataFrame
        One row per (lambda, policy) cell with the `SUMMARY_COLUMNS`.
    trials : pd.DataFrame, optional
        One row per trial with the `TRIAL_COLUMNS`.

    Note
    ----
    ``rel_error = |analytic_total - sim_mean_total| / analytic_total`` and is NaN
    when there is no analytic value.

    """

    def __init__(self, summary: pd.DataFrame, trials: Optional[pd.DataFrame] = None):
        missing = set(SUMMARY_COLUMNS).difference(summary.columns)
        assert not missing, f"summary misses the columns {sorted(missing)}"
        self.summary = summary[SUMMARY_COLUMNS].reset_index(drop=True)
        self.trials = (
            pd.DataFrame(columns=TRIAL_COLUMNS) if trials is None else trials.reset_index(drop=True)
        )

    @staticmethod
    def relative_error(analytic: pd.Series, simulated: pd.Series) -> pd.Series:
        analytic = analytic.astype(float)
        return (analytic - simulated.astype(float)).abs() / analytic

    @classmethod
    def from_trials(
        cls, trials: pd.DataFrame, analytic: Optional[pd.DataFrame] = None
    ) -> "ExperimentTable":
        """Summarize per-trial rows into a table.

        Parameters
        ----------
        trials : pd.DataFrame
            The per-trial rows (`TRIAL_COLUMNS`).
        analytic : pd.DataFrame, optional
            Rows of ``lambda, policy, analytic_total, note``; cells without a row
            get a NaN analytic value.

        """
        rows = []
        for (lam, policy), cell in trials.groupby(["lambda", "policy"], sort=False):
            s = summarize(cell["mean_total"].to_numpy(dtype=float))
            rows.append(
                {
                    "lambda": lam,
                    "policy": policy,
                    "sim_mean_total": s.mean,
                    "sim_stddev": s.stddev,
                    "ci_low": s.ci_low,
                    "ci_high": s.ci_high,
                    "n_trials": s.n,
                }
            )
        summary = pd.DataFrame(
            rows,
            columns=_SIMULATED_COLUMNS,
        )
        if analytic is None:
            analytic = pd.DataFrame(
                {
                    "lambda": pd.Series(dtype=float),
                    "policy": pd.Series(dtype=object),
                    "analytic_total": pd.Series(dtype=float),
                    "note": pd.Series(dtype=object),
                }
            )
        summary = summary.merge(
            analytic[["lambda", "policy", "analytic_total", "note"]],
            on=["lambda", "policy"],
            how="left",
        )
        summary["analytic_total"] = summary["analytic_total"].astype(float)
        summary["note"] = summary["note"].fillna("")
        summary["rel_error"] = cls.relative_error(
            summary["analytic_total"], summary["sim_mean_total"]
        )
        return cls(summary, trials)

    # ------------------------------------------------------------------ output
    def to_csv(self, path: Optional[Union[str, Path]] = None) -> Optional[str]:
        """Write the summary as CSV (full precision); return it if no path is given."""
        return self.summary.to_csv(path, index=False)

    def trials_to_csv(self, path: Optional[Union[str, Path]] = None) -> Optional[str]:
        """Write the per-trial rows as CSV (full precision)."""
        return self.trials[TRIAL_COLUMNS].to_csv(path, index=False)

    def to_markdown(self, digits: int = 6) -> str:
        """Return the summary as a Markdown table with `digits` significant digits."""
        return to_markdown(self.summary, digits)

    @classmethod
    def read_trials_csv(
        cls, path: Union[str, Path], analytic: Optional[pd.DataFrame] = None
    ) -> "ExperimentTable":
        """Re-read a per-trial CSV and recompute its summary.

        Floats are parsed with round-trip precision so that the recomputed
        statistics equal those of the table that wrote the file.

        """
        trials = pd.read_csv(path, float_precision="round_trip")
        return cls.from_trials(trials, analytic)

    @classmethod
    def from_csv(cls, path: Union[str, Path]) -> "ExperimentTable":
        """Re-read a summary CSV written by `to_csv`."""
        summary = pd.read_csv(path, float_precision="round_trip", keep_default_na=True)
        summary["note"] = summary["note"].fillna("")
        return cls(summary)

    def __len__(self) -> int:
        return len(self.summary)

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({len(self)} cells, {len(self.trials)} trials)"

"""Statistics across independent trials."""

__author__ = "Jonas Van Der Donckt"

import math
from typing import Iterable, NamedTuple, Union

import numpy as np
from scipy.stats import norm

from ..simulation import TrialResult


class TrialSummary(NamedTuple):
    """The mean, trial-to-trial standard deviation and CI of trial means."""

    mean: float
    stddev: float
    ci_low: float
    ci_high: float
    n: int

    @property
    def standard_error(self) -> float:
        return self.stddev / math.sqrt(self.n) if self.n else math.nan

    @property
    def relative_stddev(self) -> float:
        return self.stddev / self.mean


def summarize(
    results: Iterable[Union[TrialResult, float]], confidence: float = 0.95
) -> TrialSummary:
    """Summarize the mean times in system of independent trials.

    Parameters
    ----------
    results : Iterable[Union[TrialResult, float]]
        The trial results, or their mean times in system. Trials without
        completed jobs (NaN means) are left out.
    confidence : float, optional
        The confidence level of the normal-approximation interval, by default
        0.95.

    Returns
    -------
    TrialSummary
        The mean, the sample standard deviation (``ddof=1``) and the interval
        ``mean ± z * stddev / sqrt(n)``. With fewer than 2 trials the standard
        deviation and the interval are NaN.

    """
    if not 0 < confidence < 1:
        raise ValueError(f"confidence must be in (0, 1), got {confidence}")
    values = np.array(
        [r.mean_time_in_system if isinstance(r, TrialResult) else r for r in results],
        dtype=float,
    )
    values = values[np.isfinite(values)]
    n = len(values)
    if n == 0:
        return TrialSummary(math.nan, math.nan, math.nan, math.nan, 0)
    mean = float(values.mean())
    if n < 2:
        return TrialSummary(mean, math.nan, math.nan, math.nan, n)
    stddev = float(values.std(ddof=1))
    half = norm.ppf(0.5 + confidence / 2) * stddev / math.sqrt(n)
    return TrialSummary(mean, stddev, mean - half, mean + half, n)

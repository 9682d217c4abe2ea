"""The value object returned by the analytic time-in-system operations."""

__author__ = "Jonas Van Der Donckt"

from typing import Dict, Optional, Union

from ..simulation.policy import Discipline, PolicySpec
from ..utils.classes import FrozenClass


class AnalyticResult(FrozenClass):
    """Expected waiting, residence and total time of a policy at arrival rate λ.

    Parameters
    ----------
    policy : Union[PolicySpec, Discipline, str]
        The scheduling policy.
    lam : float
        The arrival rate.
    expected_wait : float
        The expected time before the first service.
    expected_residence : float
        The expected time from the first service until departure.
    error_estimate : float, optional
        Combined quadrature error and truncated tail contribution, by default 0.
    details : Dict[str, float], optional
        The integrals backing the result, by name.

    Note
    ----
    ``expected_total`` is always ``expected_wait + expected_residence``.

    """

    def __init__(
        self,
        policy: Union[PolicySpec, Discipline, str],
        lam: float,
        expected_wait: float,
        expected_residence: float,
        error_estimate: float = 0.0,
        details: Optional[Dict[str, float]] = None,
    ):
        self.policy = PolicySpec.parse(policy)
        self.lam = float(lam)
        self.expected_wait = float(expected_wait)
        self.expected_residence = float(expected_residence)
        self.expected_total = self.expected_wait + self.expected_residence
        self.error_estimate = float(error_estimate)
        self.details = dict(details or {})
        self._freeze()

    def to_dict(self) -> Dict[str, Union[str, float]]:
        """Return the result as a flat dict (used for tables and CLI output)."""
        return {
            "policy": self.policy.name,
            "lambda": self.lam,
            "expected_wait": self.expected_wait,
            "expected_residence": self.expected_residence,
            "expected_total": self.expected_total,
            "error_estimate": self.error_estimate,
        }

    def __repr__(self) -> str:
        return (
            f"{self.__class__.__name__}(policy={self.policy.name}, lam={self.lam}, "
            f"wait={self.expected_wait:.6g}, residence={self.expected_residence:.6g}, "
            f"total={self.expected_total:.6g}, error={self.error_estimate:.2g})"
        )

"""The description of a replicated simulation experiment."""

__author__ = "Jonas Van Der Donckt"

from typing import Iterable, List, Optional, Union

from ..simulation import PolicySpec, SimConfig
from ..utils.classes import FrozenClass
from ..utils.data import parse_float_list, to_list
from ..utils.quadrature import QuadratureSettings


class ExperimentPlan(FrozenClass):
    """A grid of (arrival rate, policy) cells, each simulated `trials` times.

    Trial ``i`` of every cell uses the seed ``base_seed + i``, so that all
    policies of a cell see the same arrival streams and a plan is reproducible.

    Parameters
    ----------
    model : PredictionModel, DiscreteModel or ClassModel
        The workload.
    lambdas : Union[float, Iterable[float]]
        The arrival rates; a comma separated string is accepted too.
    policies : Union[str, PolicySpec, Iterable[Union[str, PolicySpec]]]
        The scheduling policies.
    trials : int, optional
        The number of trials per cell, by default 50.
    horizon : float, optional
        The simulated time of a trial, by default 200 000.
    warmup : float, optional
        The warmup of a trial, by default 20 000.
    base_seed : int, optional
        The seed of the first trial, by default 0.
    settings : QuadratureSettings, optional
        The settings of the analytic column, by default those of the model.

    Raises
    ------
    ValueError
        Raised when ``trials < 1``, a grid is empty, an arrival rate is not
        positive or the horizon / warmup are invalid.

    Note
    ----
    Arrival rates at or above saturation are allowed: their simulated queue
    grows and their analytic value is reported as unstable.

    """

    def __init__(
        self,
        model,
        lambdas: Union[float, str, Iterable[float]],
        policies: Union[str, PolicySpec, Iterable[Union[str, PolicySpec]]],
        trials: int = 50,
        horizon: float = 200_000,
        warmup: float = 20_000,
        base_seed: int = 0,
        settings: Optional[QuadratureSettings] = None,
    ):
        lambdas = parse_float_list(lambdas)
        if isinstance(policies, str):
            policies = policies.replace(";", ",").split(",")
        policies = [
            PolicySpec.parse(p.strip() if isinstance(p, str) else p) for p in to_list(policies)
        ]
        if not len(lambdas) or not len(policies):
            raise ValueError("a plan needs at least one arrival rate and one policy")
        if any(lam <= 0 for lam in lambdas):
            raise ValueError(f"arrival rates must be > 0, got {lambdas}")
        if int(trials) < 1:
            raise ValueError(f"trials must be >= 1, got {trials}")
        # validates horizon & warmup
        SimConfig(lambdas[0], model, policies[0], horizon, warmup, base_seed)

        self.model = model
        self.lambdas: List[float] = lambdas
        self.policies: List[PolicySpec] = policies
        self.trials = int(trials)
        self.horizon = float(horizon)
        self.warmup = float(warmup)
        self.base_seed = int(base_seed)
        self.settings = settings
        self._freeze()

    @property
    def model_name(self) -> str:
        return getattr(self.model, "name", repr(self.model))

    @property
    def n_cells(self) -> int:
        return len(self.lambdas) * len(self.policies)

    def seed(self, trial: int) -> int:
        """Return the seed of trial `trial` (of every cell)."""
        return self.base_seed + trial

    def configs(self) -> List[SimConfig]:
        """Return the `SimConfig` of every trial, cell by cell."""
        return [
            SimConfig(lam, self.model, policy, self.horizon, self.warmup, self.seed(i))
            for lam in self.lambdas
            for policy in self.policies
            for i in range(self.trials)
        ]

    def __repr__(self) -> str:
        return (
            f"{self.__class__.__name__}(model={self.model_name}, "
            f"lambdas={self.lambdas}, policies={[p.name for p in self.policies]}, "
            f"trials={self.trials}, horizon={self.horizon}, warmup={self.warmup}, "
            f"base_seed={self.base_seed})"
        )

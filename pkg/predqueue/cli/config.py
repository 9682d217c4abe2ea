"""The run-configuration file of the command line interface.

A run configuration is an INI file with the sections ``[model]``, ``[plan]``,
``[analytic]`` and ``[output]``::

    [model]
    name = exp_mean_x

    [plan]
    lambdas = 0.5, 0.7, 0.9
    policies = SJF, SPJF
    trials = 50
    horizon = 200000
    warmup = 20000
    seed = 0

    [analytic]
    rel_tol = 1e-8

    [output]
    format = csv
    path = results.csv

Unknown sections and keys are rejected; the raised `ConfigError` names the
offending ``section.key``.

"""

__author__ = "Jonas Van Der Donckt"

import configparser
from pathlib import Path
from typing import List, Literal, Optional, Union

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    field_validator,
    model_validator,
)

from ..models import MODEL_NAMES, model_from_config
from ..simulation import PolicySpec
from ..utils.data import parse_float_list
from ..utils.errors import ConfigError
from ..utils.quadrature import QuadratureSettings


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class ModelSection(_Section):
    name: str
    base: Literal["exp", "weibull"] = "exp"
    mean: float = Field(1.0, gt=0)
    alpha: float = Field(0.5, ge=0, le=1)
    short: float = Field(1.0, gt=0)
    long: float = Field(3.0, gt=0)
    short_fraction: float = Field(0.5, ge=0, le=1)
    p: float = Field(0.0, ge=0, le=1)
    q: float = Field(0.0, ge=0, le=1)

    @field_validator("name")
    @classmethod
    def _known_model(cls, v: str) -> str:
        if v not in MODEL_NAMES:
            raise ValueError(f"unknown model {v!r}; choose from {MODEL_NAMES}")
        return v

    def build(self):
        """Construct the configured model."""
        return model_from_config(**self.model_dump())


class PlanSection(_Section):
    lambdas: List[float]
    policies: List[str]
    trials: int = Field(50, ge=1)
    horizon: float = Field(200_000, gt=0)
    warmup: float = Field(20_000, ge=0)
    seed: int = Field(0, ge=0)
    n_jobs: Optional[int] = Field(None, ge=0)

    @field_validator("lambdas", mode="before")
    @classmethod
    def _parse_lambdas(cls, v):
        values = parse_float_list(v)
        if not values or any(lam <= 0 for lam in values):
            raise ValueError("need at least one arrival rate, all > 0")
        return values

    @field_validator("policies", mode="before")
    @classmethod
    def _parse_policies(cls, v):
        if isinstance(v, str):
            v = [p.strip() for p in v.replace(";", ",").split(",") if p.strip()]
        if not v:
            raise ValueError("need at least one policy")
        return [PolicySpec.parse(p).name for p in v]

    @model_validator(mode="after")
    def _warmup_before_horizon(self):
        if self.warmup >= self.horizon:
            raise ValueError(f"warmup ({self.warmup}) must be < horizon ({self.horizon})")
        return self


class AnalyticSection(_Section):
    rel_tol: float = Field(1e-8, gt=0)
    abs_tol: float = Field(1e-10, gt=0)
    max_subdivisions: int = Field(200, ge=1)
    x_max: Optional[float] = Field(None, gt=0)
    y_max: Optional[float] = Field(None, gt=0)
    interpolation_tol: float = Field(1e-7, gt=0)

    def settings(self) -> QuadratureSettings:
        return QuadratureSettings(**self.model_dump())


class OutputSection(_Section):
    format: Literal["csv", "markdown"] = "csv"
    path: Optional[Path] = None
    trials_path: Optional[Path] = None
    digits: int = Field(6, ge=1, le=17)


class RunConfig(_Section):
    """A validated run configuration."""

    model: ModelSection
    plan: PlanSection
    analytic: AnalyticSection = AnalyticSection()
    output: OutputSection = OutputSection()


def _error_key(error: dict) -> str:
    loc = [str(part) for part in error["loc"]]
    # list items are reported as "plan.lambdas.0"; the key is what matters
    return ".".join(loc[:2]) if loc else "<root>"


def parse_run_config(source: Union[str, Path, dict]) -> RunConfig:
    """Parse and validate a run configuration.

    Parameters
    ----------
    source : Union[str, Path, dict]
        The path of an INI file, or the already parsed ``{section: {key: value}}``.

    Returns
    -------
    RunConfig
        The validated configuration.

    Raises
    ------
    ConfigError
        Raised when the file cannot be read or parsed, a section or key is
        unknown, or a value is invalid. Its ``key`` is ``"section.key"``.

    """
    if isinstance(source, dict):
        sections = source
    else:
        parser = configparser.ConfigParser(interpolation=None)
        parser.optionxform = str
        try:
            with open(source, "r") as f:
                parser.read_file(f)
        except OSError as e:
            raise ConfigError("<file>", f"cannot read {source}: {e}") from None
        except configparser.Error as e:
            raise ConfigError("<file>", f"malformed configuration: {e}") from None
        sections = {name: dict(parser.items(name)) for name in parser.sections()}

    try:
        return RunConfig.model_validate(sections)
    except ValidationError as e:
        error = e.errors()[0]
        raise ConfigError(_error_key(error), error["msg"]) from None

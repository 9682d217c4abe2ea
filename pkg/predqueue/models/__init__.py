"""Workload models: joint laws of service time and predicted service time.

.. include:: ../../docs/pdoc_include/models.md

"""

__author__ = "Jonas Van Der Donckt, Jeroen Van Der Donckt"

from .. import __pdoc__
from .builtin import (
    MODEL_NAMES,
    exact,
    exponential_mean_x,
    model_from_config,
    reversed_exponential_mean_inv_x,
    two_type,
    uniform_multiplicative,
    weibull_base,
)
from .distributions import (
    Deterministic,
    Discrete,
    Exponential,
    ServiceDistribution,
    Weibull,
    distribution_from_name,
)
from .kernels import (
    ExactPrediction,
    ExponentialMeanInvX,
    ExponentialMeanX,
    PredictionKernel,
    UniformMultiplicative,
)
from .operations import (
    conditional_mean_service,
    is_order_faithful,
    load_below_predicted,
    load_below_service,
    predicted_density,
    service_density,
)
from .prediction_model import (
    ClassModel,
    DiscreteModel,
    KernelPredictionModel,
    PredictionModel,
)
from .profile import PredictionProfile

__pdoc__["PredictionProfile.__call__"] = True

__all__ = [
    # models
    "PredictionModel",
    "KernelPredictionModel",
    "DiscreteModel",
    "ClassModel",
    "PredictionProfile",
    # building blocks
    "ServiceDistribution",
    "Exponential",
    "Weibull",
    "Discrete",
    "Deterministic",
    "distribution_from_name",
    "PredictionKernel",
    "ExactPrediction",
    "ExponentialMeanX",
    "ExponentialMeanInvX",
    "UniformMultiplicative",
    # built-ins
    "exact",
    "exponential_mean_x",
    "reversed_exponential_mean_inv_x",
    "uniform_multiplicative",
    "two_type",
    "weibull_base",
    "model_from_config",
    "MODEL_NAMES",
    # operations
    "service_density",
    "predicted_density",
    "load_below_service",
    "load_below_predicted",
    "conditional_mean_service",
    "is_order_faithful",
]

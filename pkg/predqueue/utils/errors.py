"""Exceptions raised by the predqueue analytic engine, simulator and CLI."""

__author__ = "Jonas Van Der Donckt, Jeroen Van Der Donckt"

from typing import Optional


class PredQueueError(Exception):
    """Root of all predqueue specific errors."""


class NonConvergence(PredQueueError):
    """Adaptive quadrature did not reach the requested tolerance.

    Parameters
    ----------
    message : str
        Human readable description (which integral, which interval).
    estimate : float
        The best estimate of the integral that was obtained.
    residual : float
        The error estimate that accompanies `estimate`.

    """

    def __init__(self, message: str, estimate: float, residual: float):
        super().__init__(f"{message} (estimate={estimate!r}, residual={residual!r})")
        self.estimate = estimate
        self.residual = residual


class Unstable(PredQueueError):
    """The load is too high for a formula that needs a stable queue.

    Parameters
    ----------
    load : float
        The offending (cumulative) load.
    class_index : int, optional
        The (0-based) priority class for which stability fails, if applicable.

    """

    def __init__(self, load: float, class_index: Optional[int] = None):
        where = "" if class_index is None else f" for class {class_index}"
        super().__init__(f"Unstable system{where}: load {load!r} >= 1")
        self.load = load
        self.class_index = class_index


class DegenerateInitiator(PredQueueError):
    """No busy period can be initiated at the given level q (d(q) ~ 0)."""

    def __init__(self, level: float, probability: float):
        super().__init__(
            f"Busy-period initiator probability d({level!r}) = {probability!r} is"
            " below threshold"
        )
        self.level = level
        self.probability = probability


class DensityDomainError(PredQueueError, ValueError):
    """A conditional quantity was requested where the predicted density vanishes."""


class ConfigError(PredQueueError, ValueError):
    """An invalid run configuration.

    Parameters
    ----------
    key : str
        The offending key, as ``"section.key"``.
    message : str
        What is wrong with it.

    """

    def __init__(self, key: str, message: str):
        super().__init__(f"[{key}] {message}")
        self.key = key

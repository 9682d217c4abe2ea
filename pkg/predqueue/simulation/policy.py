"""Scheduling disciplines and their preemption semantics."""

__author__ = "Jonas Van Der Donckt"

from enum import Enum
from typing import Union

from ..utils.classes import FrozenClass


class Discipline(str, Enum):
    """The scheduling disciplines of the single-server queue."""

    FIFO = "FIFO"
    SJF = "SJF"
    PSJF = "PSJF"
    SRPT = "SRPT"
    SPJF = "SPJF"
    PSPJF = "PSPJF"
    SPRPT = "SPRPT"
    SPEPT = "SPEPT"
    PRIORITY = "PRIORITY"
    PRED_PRIORITY = "PRED_PRIORITY"


PREEMPTIVE = frozenset({Discipline.PSJF, Discipline.PSPJF, Discipline.SRPT, Discipline.SPRPT})

# The full-information counterpart of every prediction-based discipline
INFORMED = {
    Discipline.SPJF: Discipline.SJF,
    Discipline.PSPJF: Discipline.PSJF,
    Discipline.SPRPT: Discipline.SRPT,
    Discipline.SPEPT: Discipline.SJF,
    Discipline.PRED_PRIORITY: Discipline.PRIORITY,
}

TIE_BREAKS = ("arrival", "last_arrival")


class PolicySpec(FrozenClass):
    """A scheduling discipline plus its tie-breaking rule.

    Parameters
    ----------
    discipline : Union[Discipline, str]
        The discipline, or its (case-insensitive) name.
    tie_break : str, optional
        Which job wins among equal keys: ``"arrival"`` (the earlier arrival,
        the default) or ``"last_arrival"``.

    """

    def __init__(self, discipline: Union[Discipline, str], tie_break: str = "arrival"):
        if isinstance(discipline, str) and not isinstance(discipline, Discipline):
            try:
                discipline = Discipline(discipline.upper())
            except ValueError:
                raise ValueError(
                    f"unknown discipline {discipline!r}; choose from "
                    f"{[d.value for d in Discipline]}"
                ) from None
        if tie_break not in TIE_BREAKS:
            raise ValueError(f"tie_break must be one of {TIE_BREAKS}, got {tie_break!r}")
        self.discipline = discipline
        self.tie_break = tie_break
        self._freeze()

    @classmethod
    def parse(cls, policy: Union["PolicySpec", Discipline, str]) -> "PolicySpec":
        """Coerce a policy name, discipline or spec to a `PolicySpec`."""
        if isinstance(policy, PolicySpec):
            return policy
        return cls(policy)

    @property
    def name(self) -> str:
        return self.discipline.value

    @property
    def preemptive(self) -> bool:
        return self.discipline in PREEMPTIVE

    @property
    def uses_prediction(self) -> bool:
        return self.discipline in INFORMED

    @property
    def uses_classes(self) -> bool:
        return self.discipline in (Discipline.PRIORITY, Discipline.PRED_PRIORITY)

    def informed(self) -> "PolicySpec":
        """Return the full-information counterpart (itself if it uses no prediction)."""
        return PolicySpec(INFORMED.get(self.discipline, self.discipline), self.tie_break)

    def __eq__(self, other) -> bool:
        if isinstance(other, (str, Discipline)):
            try:
                other = PolicySpec(other)
            except ValueError:
                return False
        if not isinstance(other, PolicySpec):
            return NotImplemented
        return (self.discipline, self.tie_break) == (other.discipline, other.tie_break)

    def __hash__(self) -> int:
        return hash((self.discipline, self.tie_break))

    def __str__(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({self.name}, tie_break={self.tie_break!r})"

"""A job of the simulated queue."""

__author__ = "Jonas Van Der Donckt"

from typing import Optional


class Job:
    """A job with its true and predicted size and its service progress.

    Parameters
    ----------
    id : int
        The arrival index.
    arrival_time : float
        The arrival time.
    service_time : float
        The true size x.
    predicted_time : float
        The predicted size y.
    class_label : int, optional
        The true priority class.
    predicted_class : int, optional
        The predicted priority class.
    expected_time : float, optional
        The conditional mean size given the prediction (the SPEPT key), by
        default the prediction itself.

    """

    __slots__ = (
        "id",
        "arrival_time",
        "service_time",
        "predicted_time",
        "class_label",
        "predicted_class",
        "expected_time",
        "attained",
        "first_service_time",
        "completion_time",
    )

    def __init__(
        self,
        id: int,
        arrival_time: float,
        service_time: float,
        predicted_time: float,
        class_label: Optional[int] = None,
        predicted_class: Optional[int] = None,
        expected_time: Optional[float] = None,
    ):
        self.id = id
        self.arrival_time = arrival_time
        self.service_time = service_time
        self.predicted_time = predicted_time
        self.class_label = class_label
        self.predicted_class = predicted_class
        self.expected_time = predicted_time if expected_time is None else expected_time
        self.attained = 0.0
        self.first_service_time: Optional[float] = None
        self.completion_time: Optional[float] = None

    @property
    def remaining_service(self) -> float:
        return max(self.service_time - self.attained, 0.0)

    @property
    def remaining_predicted(self) -> float:
        """The remaining prediction, clamped at 0 once the job outlived it."""
        return max(self.predicted_time - self.attained, 0.0)

    @property
    def started(self) -> bool:
        return self.first_service_time is not None

    def __repr__(self) -> str:
        return (
            f"Job(id={self.id}, arrival={self.arrival_time:.6g}, "
            f"x={self.service_time:.6g}, y={self.predicted_time:.6g}, "
            f"attained={self.attained:.6g})"
        )

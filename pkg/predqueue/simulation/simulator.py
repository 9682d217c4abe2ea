"""Discrete-event simulation of a single-server queue with Poisson arrivals.

At every arrival and departure the server works on the job with the smallest
key of its policy. Preemptive policies compare a new arrival's key to the key
of the job in service and preempt only when it is strictly smaller; preempted
work is kept (preempt-resume). Among simultaneous events departures come first,
and an idle server only picks its next job once all of them are processed;
among equal keys the earlier arrival wins (unless the policy says otherwise).

"""

__author__ = "Jonas Van Der Donckt, Jeroen Van Der Donckt"

import heapq
import itertools
import math
import time
import warnings
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..models.prediction_model import total_rate_matches
from ..utils.classes import FrozenClass
from .job import Job
from .logger import logger
from .policy import Discipline, PolicySpec

DEPARTURE, ARRIVAL = 0, 1

# Number of jobs drawn from the model at once
CHUNK_SIZE = 4096


class SimConfig(FrozenClass):
    """The parameters of one simulation trial.

    Parameters
    ----------
    lam : float
        The arrival rate (>= 0; 0 gives an empty trial).
    model : PredictionModel, DiscreteModel or ClassModel
        The workload. A `ClassModel` brings its own rates; `lam` must match them.
    policy : Union[PolicySpec, str]
        The scheduling policy.
    horizon : float, optional
        The simulated time, by default 1e6.
    warmup : float, optional
        Jobs completing before this time are not counted, by default 1e5.
    seed : int, optional
        The seed of the trial's ``PCG64`` generator, by default 0.
    record_events : bool, optional
        Whether to keep the event log of the trial, by default False.

    Raises
    ------
    ValueError
        Raised when ``lam < 0``, ``horizon <= 0`` or ``warmup`` is not in
        ``[0, horizon)``.

    """

    def __init__(
        self,
        lam: float,
        model,
        policy: Union[PolicySpec, Discipline, str],
        horizon: float = 1e6,
        warmup: float = 1e5,
        seed: int = 0,
        record_events: bool = False,
    ):
        if not lam >= 0:
            raise ValueError(f"lam must be >= 0, got {lam}")
        if not horizon > 0:
            raise ValueError(f"horizon must be > 0, got {horizon}")
        if not 0 <= warmup < horizon:
            raise ValueError(f"need 0 <= warmup < horizon, got {warmup}, {horizon}")
        if lam > 0 and not total_rate_matches(model, lam):
            raise ValueError(f"lam={lam} differs from the arrival rate of {model!r}")
        self.lam = float(lam)
        self.model = model
        self.policy = PolicySpec.parse(policy)
        self.horizon = float(horizon)
        self.warmup = float(warmup)
        self.seed = int(seed)
        self.record_events = record_events
        self._freeze()

    def with_seed(self, seed: int) -> "SimConfig":
        """Return a copy with another seed."""
        return SimConfig(
            self.lam,
            self.model,
            self.policy,
            self.horizon,
            self.warmup,
            seed,
            self.record_events,
        )

    def __repr__(self) -> str:
        return (
            f"{self.__class__.__name__}(lam={self.lam}, model={self.model!r}, "
            f"policy={self.policy.name}, horizon={self.horizon}, "
            f"warmup={self.warmup}, seed={self.seed})"
        )


class TrialResult(FrozenClass):
    """The statistics of one trial, over the jobs completing after the warmup.

    Attributes
    ----------
    seed : int
        The seed of the trial.
    policy : str
        The policy name.
    lam : float
        The arrival rate.
    completed_count : int
        The number of counted jobs; 0 makes all means NaN.
    mean_time_in_system, mean_wait, mean_service : float
        The means of the counted jobs.
    class_means : Dict[int, float]
        Mean time in system per true class (class models only).
    time_average_in_system : float
        The time-average number of jobs in the system after the warmup.
    busy_time : float
        The total time the server was busy.
    served_work : float
        The total service given (completed plus partially served jobs).
    arrivals : int
        The number of arrivals before the horizon.
    final_queue_length : int
        The number of jobs in the system at the horizon.
    preemptions : int
        The number of preemptions.
    events : List[Tuple[float, str, int]], optional
        The ``(time, event, job id)`` log if it was recorded; events are
        ``"arrival"``, ``"start"``, ``"resume"``, ``"preempt"`` and ``"departure"``.

    """

    def __init__(
        self,
        seed: int,
        policy: str,
        lam: float,
        completed_count: int,
        mean_time_in_system: float,
        mean_wait: float,
        mean_service: float,
        class_means: Dict[int, float],
        time_average_in_system: float,
        busy_time: float,
        served_work: float,
        arrivals: int,
        final_queue_length: int,
        preemptions: int,
        events: Optional[List[Tuple[float, str, int]]] = None,
    ):
        self.seed = seed
        self.policy = policy
        self.lam = lam
        self.completed_count = completed_count
        self.mean_time_in_system = mean_time_in_system
        self.mean_wait = mean_wait
        self.mean_service = mean_service
        self.class_means = class_means
        self.time_average_in_system = time_average_in_system
        self.busy_time = busy_time
        self.served_work = served_work
        self.arrivals = arrivals
        self.final_queue_length = final_queue_length
        self.preemptions = preemptions
        self.events = events
        self._freeze()

    @property
    def is_empty(self) -> bool:
        """Whether no job was counted (e.g. ``lam = 0``)."""
        return self.completed_count == 0

    def to_dict(self) -> Dict[str, Union[int, float, str]]:
        """Return the scalar statistics as a flat dict."""
        return {
            "lambda": self.lam,
            "policy": self.policy,
            "seed": self.seed,
            "completed": self.completed_count,
            "mean_total": self.mean_time_in_system,
            "mean_wait": self.mean_wait,
            "mean_service": self.mean_service,
            "time_average_in_system": self.time_average_in_system,
            "final_queue_length": self.final_queue_length,
            "preemptions": self.preemptions,
        }

    def __repr__(self) -> str:
        return (
            f"{self.__class__.__name__}(policy={self.policy}, lam={self.lam}, "
            f"seed={self.seed}, completed={self.completed_count}, "
            f"mean_time_in_system={self.mean_time_in_system:.6g})"
        )


class EventCalendar:
    """Time-ordered pending events with lazy cancellation.

    Departures precede arrivals at equal times; otherwise events are served in
    insertion order.

    """

    def __init__(self):
        self._heap: List = []
        self._counter = itertools.count()
        self._cancelled = set()

    def push(self, t: float, kind: int, job: Job) -> int:
        """Schedule an event and return its token (for `cancel`)."""
        token = next(self._counter)
        heapq.heappush(self._heap, (t, kind, token, job))
        return token

    def cancel(self, token: int):
        self._cancelled.add(token)

    def pop(self) -> Tuple[float, int, Job]:
        """Remove and return the earliest live ``(time, kind, job)``."""
        while self._heap:
            t, kind, token, job = heapq.heappop(self._heap)
            if token in self._cancelled:
                self._cancelled.discard(token)
                continue
            return t, kind, job
        raise IndexError("pop from an empty event calendar")

    def peek_time(self) -> float:
        """Return the time of the earliest live event (``inf`` when there is none)."""
        while self._heap and self._heap[0][2] in self._cancelled:
            self._cancelled.discard(heapq.heappop(self._heap)[2])
        return self._heap[0][0] if self._heap else math.inf

    def __len__(self) -> int:
        return len(self._heap) - len(self._cancelled)

    def __bool__(self) -> bool:
        return len(self) > 0


class ReadySet:
    """Key-ordered waiting jobs.

    Parameters
    ----------
    tie_break : str, optional
        ``"arrival"`` (earlier arrival first, the default) or ``"last_arrival"``.

    """

    def __init__(self, tie_break: str = "arrival"):
        self._heap: List = []
        self._sign = 1.0 if tie_break == "arrival" else -1.0

    def push(self, job: Job, key: float):
        heapq.heappush(self._heap, (key, self._sign * job.arrival_time, job.id, job))

    def pop(self) -> Job:
        """Remove and return the job with the smallest key."""
        return heapq.heappop(self._heap)[-1]

    def jobs(self) -> Iterator[Job]:
        """Iterate over the waiting jobs, in no particular order."""
        return (entry[-1] for entry in self._heap)

    def __len__(self) -> int:
        return len(self._heap)


def _key_function(discipline: Discipline):
    """Return the priority key of a job (lower is served first)."""
    if discipline == Discipline.FIFO:
        return lambda job: job.arrival_time
    if discipline in (Discipline.SJF, Discipline.PSJF):
        return lambda job: job.service_time
    if discipline in (Discipline.SPJF, Discipline.PSPJF):
        return lambda job: job.predicted_time
    if discipline == Discipline.SRPT:
        return lambda job: job.remaining_service
    if discipline == Discipline.SPRPT:
        return lambda job: job.remaining_predicted
    if discipline == Discipline.SPEPT:
        return lambda job: job.expected_time
    if discipline == Discipline.PRIORITY:
        return lambda job: job.class_label
    return lambda job: job.predicted_class


def _job_stream(config: SimConfig, rng: np.random.Generator) -> Iterator[Job]:
    """Generate the arrivals of a trial, drawing the jobs in chunks."""
    spec, model = config.policy, config.model
    needs_classes = spec.uses_classes
    job_id, t = 0, 0.0
    while True:
        gaps = rng.exponential(1.0 / config.lam, CHUNK_SIZE)
        attrs = model.sample_jobs(rng, CHUNK_SIZE)
        if needs_classes and "class_label" not in attrs:
            raise ValueError(f"{spec.name} needs a model with class labels, got {model!r}")
        expected = None
        if spec.discipline == Discipline.SPEPT and hasattr(model, "spept_key"):
            expected = model.spept_key(attrs["predicted"])
        for i in range(CHUNK_SIZE):
            t += gaps[i]
            yield Job(
                job_id,
                t,
                float(attrs["service"][i]),
                float(attrs["predicted"][i]),
                int(attrs["class_label"][i]) if "class_label" in attrs else None,
                int(attrs["predicted_class"][i]) if "predicted_class" in attrs else None,
                float(expected[i]) if expected is not None else None,
            )
            job_id += 1


def _simulate(
    stream: Iterator[Job],
    spec: PolicySpec,
    horizon: float,
    warmup: float,
    record_events: bool,
) -> Dict:
    """Run the event loop over an arrival-ordered job stream; return the statistics."""
    key = _key_function(spec.discipline)
    events = [] if record_events else None
    calendar = EventCalendar()
    ready = ReadySet(spec.tie_break)

    def _schedule_next_arrival():
        job = next(stream, None)
        if job is not None and job.arrival_time <= horizon:
            calendar.push(job.arrival_time, ARRIVAL, job)
            return 1
        return 0

    arrivals = _schedule_next_arrival()
    now, in_system, area = 0.0, 0, 0.0
    busy_time, preemptions = 0.0, 0
    current: Optional[Job] = None
    current_token: Optional[int] = None
    completed: List[Job] = []
    completed_work = 0.0

    def _advance(t: float):
        nonlocal now, area, busy_time
        lo = max(now, warmup)
        if t > lo:
            area += in_system * (t - lo)
        if current is not None:
            current.attained += t - now
            busy_time += t - now
        now = t

    def _start(job: Job):
        nonlocal current, current_token
        if events is not None:
            events.append((now, "resume" if job.started else "start", job.id))
        if job.first_service_time is None:
            job.first_service_time = now
        current = job
        current_token = calendar.push(now + job.remaining_service, DEPARTURE, job)

    while calendar:
        t, kind, job = calendar.pop()
        if t > horizon:
            break
        _advance(t)
        if kind == DEPARTURE:
            job.attained = job.service_time
            job.completion_time = now
            completed_work += job.service_time
            in_system -= 1
            current = None
            if events is not None:
                events.append((now, "departure", job.id))
            if now >= warmup:
                completed.append(job)
        else:
            in_system += 1
            arrivals += _schedule_next_arrival()
            if events is not None:
                events.append((now, "arrival", job.id))
            if current is not None and spec.preemptive and key(job) < key(current):
                calendar.cancel(current_token)
                preempted = current
                preemptions += 1
                if events is not None:
                    events.append((now, "preempt", preempted.id))
                ready.push(preempted, key(preempted))
                _start(job)
            else:
                ready.push(job, key(job))

        # an idle server picks its job once every event of this instant is in
        if current is None and len(ready) and calendar.peek_time() > now:
            _start(ready.pop())

    _advance(horizon)
    served_work = completed_work + (current.attained if current is not None else 0.0)
    served_work += sum(j.attained for j in ready.jobs())

    n = len(completed)
    class_means: Dict[int, float] = {}
    if n:
        total = np.array([j.completion_time - j.arrival_time for j in completed])
        wait = np.array([j.first_service_time - j.arrival_time for j in completed])
        service = np.array([j.service_time for j in completed])
        if completed[0].class_label is not None:
            labels = np.array([j.class_label for j in completed])
            class_means = {int(c): float(total[labels == c].mean()) for c in np.unique(labels)}
        means = (float(total.mean()), float(wait.mean()), float(service.mean()))
    else:
        means = (math.nan, math.nan, math.nan)

    return dict(
        completed_count=n,
        mean_time_in_system=means[0],
        mean_wait=means[1],
        mean_service=means[2],
        class_means=class_means,
        time_average_in_system=area / (horizon - warmup),
        busy_time=busy_time,
        served_work=served_work,
        arrivals=arrivals,
        final_queue_length=in_system,
        preemptions=preemptions,
        events=events,
    )


def run_trial(config: SimConfig) -> TrialResult:
    """Simulate one trial.

    The trial is deterministic given its configuration (and seed). Instability
    is not an error: the queue grows, which shows in `final_queue_length`.

    Parameters
    ----------
    config : SimConfig
        The trial configuration.

    Returns
    -------
    TrialResult
        The statistics of the jobs completing in ``[warmup, horizon]``.

    """
    t_start = time.time()
    spec = config.policy
    load = config.lam * config.model.mean_service
    if config.lam > 0 and load >= 1:
        msg = f"load {load:.4g} >= 1: the queue of {spec.name} grows without bound"
        logger.warning(msg)
        warnings.warn(msg, RuntimeWarning)

    rng = np.random.Generator(np.random.PCG64(config.seed))
    stream = _job_stream(config, rng) if config.lam > 0 else iter(())
    stats = _simulate(stream, spec, config.horizon, config.warmup, config.record_events)
    result = TrialResult(seed=config.seed, policy=spec.name, lam=config.lam, **stats)
    logger.info(
        f"Finished simulation of [{spec.name}] for model "
        f"[{getattr(config.model, 'name', config.model)}] at lambda [{config.lam}] with "
        f"seed [{config.seed}] completing [{result.completed_count}] jobs in "
        f"[{time.time() - t_start} seconds]!"
    )
    return result


def run_trace(
    arrival_times: Sequence[float],
    service_times: Sequence[float],
    policy: Union[PolicySpec, Discipline, str],
    predicted_times: Optional[Sequence[float]] = None,
    horizon: Optional[float] = None,
    warmup: float = 0.0,
    record_events: bool = True,
) -> TrialResult:
    """Replay a given arrival sequence through the queue.

    Parameters
    ----------
    arrival_times : Sequence[float]
        The nondecreasing arrival times.
    service_times : Sequence[float]
        The service time of every job.
    policy : Union[PolicySpec, Discipline, str]
        The scheduling policy (not a class-based one).
    predicted_times : Sequence[float], optional
        The predictions, by default the service times.
    horizon : float, optional
        The end of the run, by default when the last job could have finished.
    warmup : float, optional
        Jobs completing before this time are not counted, by default 0.
    record_events : bool, optional
        Whether to keep the event log, by default True.

    """
    spec = PolicySpec.parse(policy)
    if spec.uses_classes:
        raise ValueError(f"{spec.name} needs class labels; use run_trial with a ClassModel")
    arrival_times = np.asarray(arrival_times, dtype=float)
    service_times = np.asarray(service_times, dtype=float)
    predicted = service_times if predicted_times is None else np.asarray(predicted_times, float)
    if not len(arrival_times) == len(service_times) == len(predicted):
        raise ValueError("arrival, service and predicted times must have equal lengths")
    if np.any(np.diff(arrival_times) < 0):
        raise ValueError("arrival times must be nondecreasing")
    if horizon is None:
        horizon = float(arrival_times.max(initial=0.0) + service_times.sum() + 1.0)
    jobs = (
        Job(i, float(a), float(x), float(y))
        for i, (a, x, y) in enumerate(zip(arrival_times, service_times, predicted))
    )
    stats = _simulate(jobs, spec, float(horizon), float(warmup), record_events)
    return TrialResult(seed=-1, policy=spec.name, lam=math.nan, **stats)


def _batch_keys(model, spec: PolicySpec, attrs: Dict[str, np.ndarray]) -> np.ndarray:
    d = spec.discipline
    if d == Discipline.FIFO:
        return np.zeros_like(attrs["service"])
    if d == Discipline.SJF:
        return attrs["service"]
    if d == Discipline.SPJF:
        return attrs["predicted"]
    if d == Discipline.SPEPT:
        if hasattr(model, "spept_key"):
            return np.asarray(model.spept_key(attrs["predicted"]), dtype=float)
        return attrs["predicted"]
    label = "class_label" if d == Discipline.PRIORITY else "predicted_class"
    if label not in attrs:
        raise ValueError(f"{spec.name} needs a model with class labels, got {model!r}")
    return attrs[label].astype(float)


def run_finite_batches(
    n: int,
    model,
    policy: Union[PolicySpec, Discipline, str],
    replications: int,
    seed: int = 0,
) -> np.ndarray:
    """Simulate many batches of n jobs present at time 0, vectorized.

    Every batch is served in increasing key order (ties, and FIFO, in uniformly
    random order) without preemption.

    Parameters
    ----------
    n : int
        The batch size, >= 1.
    model : PredictionModel or DiscreteModel
        The workload.
    policy : Union[PolicySpec, Discipline, str]
        A non-preemptive policy.
    replications : int
        The number of batches.
    seed : int, optional
        The seed, by default 0.

    Returns
    -------
    np.ndarray
        The mean wait of every batch, shape ``(replications,)``.

    """
    spec = PolicySpec.parse(policy)
    if spec.preemptive:
        raise ValueError(f"finite batches need a non-preemptive policy, got {spec.name}")
    if not n >= 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not replications >= 1:
        raise ValueError(f"replications must be >= 1, got {replications}")
    rng = np.random.Generator(np.random.PCG64(seed))
    attrs = model.sample_jobs(rng, n * replications)
    keys = _batch_keys(model, spec, attrs).reshape(replications, n)
    service = np.asarray(attrs["service"], dtype=float).reshape(replications, n)
    ties = rng.random((replications, n))
    order = np.lexsort((ties, keys), axis=-1)
    served = np.take_along_axis(service, order, axis=-1)
    waits = np.cumsum(served, axis=-1) - served
    return waits.mean(axis=-1)


def run_trial_finite(
    n: int, model, policy: Union[PolicySpec, Discipline, str], seed: int = 0
) -> float:
    """Return the mean wait of one batch of n jobs present at time 0 (0 for n = 1)."""
    return float(run_finite_batches(n, model, policy, 1, seed)[0])

"""Tests for the discrete-event simulator."""

__author__ = "Jonas Van Der Donckt"

import math
import pytest
import numpy as np

from predqueue.models import two_type
from predqueue.simulation import (
    EventCalendar,
    Job,
    PolicySpec,
    ReadySet,
    SimConfig,
    TrialResult,
    run_finite_batches,
    run_trace,
    run_trial,
    run_trial_finite,
)
from .utils import exp_mean_x_model, exact_exp_model, two_class_model


def test_srpt_trace():
    result = run_trace([0.0, 1.0, 2.0], [5.0, 1.0, 1.0], "SRPT")
    assert isinstance(result, TrialResult)
    assert result.completed_count == 3
    assert result.mean_time_in_system == pytest.approx(3.0)
    assert result.mean_wait == pytest.approx(0.0)
    # job 0 is not resumed at t=2, where job 2 arrives as job 1 departs
    assert result.preemptions == 1
    assert result.final_queue_length == 0
    # horizon 2 + 7 + 1
    assert result.time_average_in_system == pytest.approx(0.9)
    assert result.busy_time == pytest.approx(7.0)
    assert result.served_work == pytest.approx(7.0)
    assert result.events == [
        (0.0, "arrival", 0),
        (0.0, "start", 0),
        (1.0, "arrival", 1),
        (1.0, "preempt", 0),
        (1.0, "start", 1),
        (2.0, "departure", 1),
        (2.0, "arrival", 2),
        (2.0, "start", 2),
        (3.0, "departure", 2),
        (3.0, "resume", 0),
        (7.0, "departure", 0),
    ]


def test_simultaneous_departure_and_arrival():
    # job 1 departs at t=2 when job 2 arrives: the server picks the best of both
    # waiting jobs instead of starting job 0 and preempting it
    result = run_trace([0.0, 1.0, 2.0], [3.0, 1.0, 0.5], "PSJF")
    starts = [e for e in result.events if e[0] == 2.0 and e[1] in ("start", "resume")]
    assert starts == [(2.0, "start", 2)]
    assert result.preemptions == 1
    assert (2.0, "preempt", 0) not in result.events

    # simultaneous arrivals into an empty system: the smallest key starts
    both = run_trace([0.0, 0.0], [2.0, 1.0], "PSJF")
    assert both.preemptions == 0
    assert both.events[:3] == [(0.0, "arrival", 0), (0.0, "arrival", 1), (0.0, "start", 1)]
    # non-preemptive SJF as well
    assert run_trace([0.0, 0.0], [2.0, 1.0], "SJF").events[2] == (0.0, "start", 1)


def test_fifo_trace_never_preempts():
    result = run_trace([0.0, 1.0, 2.0], [5.0, 1.0, 1.0], "FIFO")
    assert result.preemptions == 0
    # completions at 5, 6 and 7
    assert result.mean_time_in_system == pytest.approx((5 + 5 + 5) / 3)
    assert result.mean_wait == pytest.approx((0 + 4 + 4) / 3)


def test_sprpt_trace_uses_predictions():
    arrivals, sizes, predictions = [0.0, 1.0], [3.0, 1.0], [1.0, 3.0]
    # job 0 outlived its prediction: its remaining prediction is 0, job 1 waits
    sprpt = run_trace(arrivals, sizes, "SPRPT", predicted_times=predictions)
    assert sprpt.preemptions == 0
    assert sprpt.mean_time_in_system == pytest.approx(3.0)
    srpt = run_trace(arrivals, sizes, "SRPT")
    assert srpt.preemptions == 1
    assert srpt.mean_time_in_system == pytest.approx(2.5)


def test_preempt_only_on_strictly_smaller_key():
    assert run_trace([0.0, 1.0], [2.0, 1.0], "PSJF").preemptions == 1
    assert run_trace([0.0, 1.0], [2.0, 2.0], "PSJF").preemptions == 0


def test_tie_break():
    arrivals, sizes = [0.0, 0.5, 0.6], [2.0, 1.0, 1.0]
    first = run_trace(arrivals, sizes, "SJF").events
    assert (2.0, "start", 1) in first
    last = run_trace(arrivals, sizes, PolicySpec("SJF", tie_break="last_arrival")).events
    assert (2.0, "start", 2) in last


def test_trace_warmup_and_horizon():
    result = run_trace([0.0, 1.0, 2.0], [5.0, 1.0, 1.0], "SRPT", warmup=2.5)
    # only the departures at 3 and 7 are counted
    assert result.completed_count == 2
    assert result.mean_time_in_system == pytest.approx((1 + 7) / 2)
    cut = run_trace([0.0, 1.0, 2.0], [5.0, 1.0, 1.0], "SRPT", horizon=4.0)
    assert cut.final_queue_length == 1
    assert cut.served_work == pytest.approx(4.0)
    assert run_trace([0.0], [1.0], "FIFO", record_events=False).events is None


def test_trace_errors():
    with pytest.raises(ValueError):
        run_trace([0.0, 1.0], [1.0], "FIFO")
    with pytest.raises(ValueError):
        run_trace([1.0, 0.0], [1.0, 1.0], "FIFO")
    with pytest.raises(ValueError):
        run_trace([0.0], [1.0], "PRIORITY")


def test_event_calendar():
    calendar = EventCalendar()
    a, b, c = (Job(i, 0.0, 1.0, 1.0) for i in range(3))
    calendar.push(2.0, 1, a)
    calendar.push(2.0, 0, b)
    token = calendar.push(1.0, 1, c)
    assert len(calendar) == 3
    assert calendar.peek_time() == 1.0
    calendar.cancel(token)
    assert len(calendar) == 2
    # cancelled events are skipped
    assert calendar.peek_time() == 2.0
    # departures (kind 0) precede arrivals at equal times
    assert calendar.pop() == (2.0, 0, b)
    assert calendar.pop() == (2.0, 1, a)
    assert not calendar
    assert calendar.peek_time() == math.inf
    with pytest.raises(IndexError):
        calendar.pop()


def test_ready_set():
    ready = ReadySet()
    jobs = [Job(0, 0.0, 3.0, 3.0), Job(1, 1.0, 1.0, 1.0), Job(2, 2.0, 1.0, 1.0)]
    for job in jobs:
        ready.push(job, job.service_time)
    assert len(ready) == 3
    assert {j.id for j in ready.jobs()} == {0, 1, 2}
    assert [ready.pop().id for _ in range(3)] == [1, 2, 0]

    ready = ReadySet("last_arrival")
    for job in jobs:
        ready.push(job, job.service_time)
    assert [ready.pop().id for _ in range(3)] == [2, 1, 0]


def test_sim_config(two_class_model, exact_exp_model):
    config = SimConfig(0.5, exact_exp_model, "fifo", horizon=100, warmup=10, seed=3)
    assert config.policy == "FIFO"
    assert config.with_seed(4).seed == 4
    assert config.with_seed(4).horizon == 100
    with pytest.raises(TypeError):
        config.lam = 0.3
    with pytest.raises(ValueError):
        SimConfig(-0.1, exact_exp_model, "FIFO")
    with pytest.raises(ValueError):
        SimConfig(0.5, exact_exp_model, "FIFO", horizon=0)
    with pytest.raises(ValueError):
        SimConfig(0.5, exact_exp_model, "FIFO", horizon=10, warmup=10)
    with pytest.raises(ValueError):
        SimConfig(0.7, two_class_model, "PRIORITY")
    assert SimConfig(0.5, two_class_model, "PRIORITY").lam == 0.5


def test_empty_trial(exact_exp_model):
    result = run_trial(SimConfig(0.0, exact_exp_model, "SRPT", horizon=100, warmup=0))
    assert result.is_empty
    assert result.arrivals == 0
    assert math.isnan(result.mean_time_in_system)
    assert result.time_average_in_system == 0
    assert result.to_dict()["completed"] == 0


def test_unstable_trial_warns(exact_exp_model):
    config = SimConfig(1.5, exact_exp_model, "FIFO", horizon=200, warmup=0)
    with pytest.warns(RuntimeWarning):
        result = run_trial(config)
    assert result.final_queue_length > 0


def test_deterministic_per_seed(exp_mean_x_model):
    config = SimConfig(0.7, exp_mean_x_model, "SPRPT", horizon=2_000, warmup=100, seed=7)
    first, second = run_trial(config), run_trial(config)
    assert first.mean_time_in_system == second.mean_time_in_system
    assert first.arrivals == second.arrivals
    other = run_trial(config.with_seed(8))
    assert other.mean_time_in_system != first.mean_time_in_system


def test_fifo_matches_mm1(exact_exp_model):
    lam = 0.5
    config = SimConfig(lam, exact_exp_model, "FIFO", horizon=200_000, warmup=10_000, seed=1)
    result = run_trial(config)
    assert result.mean_time_in_system == pytest.approx(1 / (1 - lam), rel=0.05)
    # Little's law
    assert result.time_average_in_system == pytest.approx(
        lam * result.mean_time_in_system, rel=0.05
    )
    assert result.mean_service == pytest.approx(1.0, rel=0.03)
    assert result.busy_time == pytest.approx(lam * 200_000, rel=0.03)


def test_priority_classes(two_class_model, exp_mean_x_model):
    config = SimConfig(0.5, two_class_model, "PRED_PRIORITY", horizon=100_000, warmup=5_000)
    result = run_trial(config)
    assert set(result.class_means) == {0, 1}
    assert result.mean_wait == pytest.approx(1.596410256, rel=0.1)
    with pytest.raises(ValueError):
        run_trial(SimConfig(0.5, exp_mean_x_model, "PRIORITY", horizon=10, warmup=0))


def test_finite_batches(exact_exp_model, exp_mean_x_model):
    full = run_finite_batches(2, exact_exp_model, "SJF", 100_000, seed=0)
    assert full.shape == (100_000,)
    assert full.mean() == pytest.approx(0.25, abs=0.01)
    predicted = run_finite_batches(2, exp_mean_x_model, "SPJF", 100_000, seed=1)
    assert predicted.mean() == pytest.approx(1 / 3, abs=0.01)
    random = run_finite_batches(3, two_type(1.0, 3.0), "FIFO", 100_000, seed=2)
    # (n - 1) E[S] / 2
    assert random.mean() == pytest.approx(2.0, abs=0.03)

    assert run_trial_finite(1, exact_exp_model, "SJF") == 0.0
    with pytest.raises(ValueError):
        run_finite_batches(2, exact_exp_model, "SRPT", 10)
    with pytest.raises(ValueError):
        run_finite_batches(0, exact_exp_model, "SJF", 10)
    with pytest.raises(ValueError):
        run_finite_batches(2, exp_mean_x_model, "PRIORITY", 10)


def test_finite_batch_sorted_waits():
    model = two_type(1.0, 3.0)
    waits = run_finite_batches(4, model, "SJF", 1000, seed=5)
    assert np.all(waits >= 0)
    # SJF never waits longer than random order on average
    assert waits.mean() <= run_finite_batches(4, model, "FIFO", 1000, seed=5).mean()


@pytest.mark.parametrize(
    "predicted,informed", [("SPJF", "SJF"), ("SPRPT", "SRPT"), ("PSPJF", "PSJF")]
)
def test_exact_predictions_replay_informed_policy(exact_exp_model, predicted, informed):
    def _run(policy):
        config = SimConfig(
            0.8, exact_exp_model, policy, horizon=2_000, warmup=200, seed=11, record_events=True
        )
        return run_trial(config)

    with_predictions, with_sizes = _run(predicted), _run(informed)
    assert with_predictions.events == with_sizes.events
    assert with_predictions.mean_time_in_system == with_sizes.mean_time_in_system
    assert with_predictions.preemptions == with_sizes.preemptions


@pytest.mark.parametrize("policy", ["PSPJF", "SPRPT", "SPJF"])
def test_work_conserving(exp_mean_x_model, policy):
    result = run_trial(SimConfig(0.9, exp_mean_x_model, policy, horizon=5_000, warmup=0, seed=3))
    # the server is never idle while work is waiting
    assert result.busy_time == pytest.approx(result.served_work)
    assert result.busy_time < 5_000

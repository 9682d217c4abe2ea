"""Tests for the experiment plan and the trial statistics."""

__author__ = "Jonas Van Der Donckt"

import math
import pytest

from predqueue.experiment import ExperimentPlan, TrialSummary, summarize
from predqueue.simulation import PolicySpec, run_trace
from .utils import exact_exp_model, two_class_model


def test_plan_parsing(exact_exp_model):
    plan = ExperimentPlan(
        exact_exp_model, "0.5, 0.7", "FIFO;sjf", trials=3, horizon=100, warmup=10, base_seed=5
    )
    assert plan.lambdas == [0.5, 0.7]
    assert plan.policies == [PolicySpec("FIFO"), PolicySpec("SJF")]
    assert plan.n_cells == 4
    assert plan.model_name == "exact"
    assert plan.seed(2) == 7

    configs = plan.configs()
    assert len(configs) == 12
    # cell by cell, trial i of every cell uses the same seed
    assert [c.seed for c in configs[:3]] == [5, 6, 7]
    assert [c.seed for c in configs[3:6]] == [5, 6, 7]
    assert configs[3].policy == "SJF" and configs[3].lam == 0.5
    assert configs[-1].lam == 0.7

    single = ExperimentPlan(exact_exp_model, 0.5, PolicySpec("SRPT"), trials=1)
    assert single.policies == ["SRPT"]
    with pytest.raises(TypeError):
        single.trials = 5


def test_plan_validation(exact_exp_model, two_class_model):
    with pytest.raises(ValueError):
        ExperimentPlan(exact_exp_model, [], ["FIFO"])
    with pytest.raises(ValueError):
        ExperimentPlan(exact_exp_model, [0.5], [])
    with pytest.raises(ValueError):
        ExperimentPlan(exact_exp_model, [0.0, 0.5], ["FIFO"])
    with pytest.raises(ValueError):
        ExperimentPlan(exact_exp_model, [0.5], ["FIFO"], trials=0)
    with pytest.raises(ValueError):
        ExperimentPlan(exact_exp_model, [0.5], ["FIFO"], horizon=100, warmup=100)
    with pytest.raises(ValueError):
        ExperimentPlan(exact_exp_model, [0.5], ["LIFO"])
    with pytest.raises(ValueError):
        ExperimentPlan(two_class_model, [0.6], ["PRIORITY"])
    # saturated rates are allowed
    assert ExperimentPlan(exact_exp_model, [1.2], ["FIFO"]).lambdas == [1.2]


def test_summarize():
    summary = summarize([1.0, 2.0, 3.0])
    assert isinstance(summary, TrialSummary)
    assert summary.mean == pytest.approx(2.0)
    assert summary.stddev == pytest.approx(1.0)
    half = 1.959963985 / math.sqrt(3)
    assert summary.ci_low == pytest.approx(2.0 - half)
    assert summary.ci_high == pytest.approx(2.0 + half)
    assert summary.n == 3
    assert summary.standard_error == pytest.approx(1 / math.sqrt(3))
    assert summary.relative_stddev == pytest.approx(0.5)

    wide = summarize([1.0, 2.0, 3.0], confidence=0.99)
    assert wide.ci_high - wide.ci_low > summary.ci_high - summary.ci_low


def test_summarize_edge_cases():
    one = summarize([4.0, float("nan")])
    assert one.n == 1 and one.mean == 4.0
    assert math.isnan(one.stddev) and math.isnan(one.ci_low)
    empty = summarize([])
    assert empty.n == 0 and math.isnan(empty.mean)
    assert math.isnan(empty.standard_error)
    with pytest.raises(ValueError):
        summarize([1.0, 2.0], confidence=1.0)


def test_summarize_trial_results():
    results = [
        run_trace([0.0, 1.0], [2.0, 1.0], "FIFO"),
        run_trace([0.0, 1.0], [2.0, 1.0], "PSJF"),
    ]
    # FIFO: (2 + 2) / 2, PSJF: (3 + 1) / 2
    assert summarize(results).mean == pytest.approx(2.0)
    assert summarize(results).stddev == pytest.approx(0.0)

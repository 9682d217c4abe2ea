"""Tests for the (preemptive) shortest (predicted) job first formulas."""

__author__ = "Jonas Van Der Donckt"

import math
import pytest
import numpy as np

from predqueue.analytic import (
    AnalyticResult,
    fifo_time,
    priority_mean_wait,
    psjf_time,
    pspjf_time,
    sjf_time,
    sjf_wait,
    spept_time,
    spjf_pom,
    spjf_time,
    spjf_wait,
)
from predqueue.models import DiscreteModel, two_type
from predqueue.utils.errors import Unstable
from .utils import exp_mean_x_model, exact_exp_model, table_lambdas


# Expected time in system of the exp_mean_x model (service Exp(1), prediction Exp(x))
SJF_TOTALS = [1.7127, 1.9625, 2.3122, 2.8822, 4.1969, 6.2640, 11.2849, 18.4507]
SPJF_TOTALS = [1.7948, 2.1086, 2.5726, 3.3758, 5.3610, 8.6537, 16.9502, 29.0536]


@pytest.mark.parametrize("lam,expected", zip(table_lambdas, SJF_TOTALS))
def test_sjf_table(exp_mean_x_model, lam, expected):
    result = sjf_time(exp_mean_x_model, lam)
    assert isinstance(result, AnalyticResult)
    assert result.expected_total == pytest.approx(expected, abs=2e-4)
    assert result.expected_residence == pytest.approx(1.0)


@pytest.mark.parametrize("lam,expected", zip(table_lambdas, SPJF_TOTALS))
def test_spjf_table(exp_mean_x_model, lam, expected):
    result = spjf_time(exp_mean_x_model, lam)
    assert result.expected_total == pytest.approx(expected, rel=5e-5)
    assert result.policy == "SPJF"
    assert result.error_estimate >= 0


@pytest.mark.parametrize("lam", table_lambdas)
def test_fifo_exponential(exp_mean_x_model, lam):
    assert fifo_time(exp_mean_x_model, lam).expected_total == pytest.approx(1 / (1 - lam))


def test_spjf_pom(exp_mean_x_model):
    assert spjf_pom(exp_mean_x_model, 0.9) == pytest.approx(1.3641, abs=1e-4)
    # predictions never help a non-preemptive size based policy here
    for lam in [0.5, 0.8]:
        assert spjf_pom(exp_mean_x_model, lam) > 1


def test_spjf_equals_sjf_for_exact_predictions(exact_exp_model):
    for lam in [0.5, 0.9]:
        sjf = sjf_time(exact_exp_model, lam)
        spjf = spjf_time(exact_exp_model, lam)
        assert spjf.expected_total == pytest.approx(sjf.expected_total, rel=1e-10)
        # and both beat FIFO
        assert sjf.expected_total < fifo_time(exact_exp_model, lam).expected_total


def test_sjf_wait_per_size(exact_exp_model):
    lam = 0.7
    # W(x) = λ E[S^2] / 2 / (1 - ρ_x)^2 with ρ_x = λ (1 - e^{-x}(1 + x))
    x = 1.3
    rho_x = lam * (1 - math.exp(-x) * (1 + x))
    assert sjf_wait(exact_exp_model, lam, x) == pytest.approx(lam / (1 - rho_x) ** 2)
    # longer jobs wait longer
    waits = [sjf_wait(exact_exp_model, lam, x) for x in [0.1, 1.0, 10.0]]
    assert np.all(np.diff(waits) > 0)
    # ρ_10 is still a little below ρ
    rho_10 = lam * (1 - math.exp(-10.0) * 11)
    assert waits[-1] == pytest.approx(lam / (1 - rho_10) ** 2)
    assert waits[-1] < lam / (1 - lam) ** 2


def test_spjf_wait_per_prediction(exp_mean_x_model):
    lam = 0.8
    waits = [spjf_wait(exp_mean_x_model, lam, y) for y in [0.1, 1.0, 10.0]]
    assert np.all(np.diff(waits) > 0)
    assert waits[0] > lam * 2 / 2


def test_discrete_sjf_through_priority_classes():
    model = two_type(1.0, 3.0, p=0.2, q=0.1)
    lam = 0.3
    informed = model.to_class_model(lam, by="service")
    predicted = model.to_class_model(lam, by="predicted")
    assert sjf_time(model, lam).expected_wait == pytest.approx(priority_mean_wait(informed))
    assert spjf_time(model, lam).expected_wait == pytest.approx(
        priority_mean_wait(predicted, predicted=True)
    )
    # a single short job: residual / (1 - ρ_short) with ρ_short = 0.15
    residual = lam * model.second_moment_service / 2
    assert sjf_wait(model, lam, 1.0) == pytest.approx(residual / 0.85)
    with pytest.raises(ValueError):
        sjf_wait(model, lam, 2.0)


def test_discrete_exact_sjf_equals_spjf():
    model = two_type(1.0, 4.0)
    assert spjf_time(model, 0.3).expected_total == pytest.approx(
        sjf_time(model, 0.3).expected_total
    )


def test_unstable(exp_mean_x_model):
    with pytest.raises(Unstable):
        sjf_time(exp_mean_x_model, 1.0)
    with pytest.raises(Unstable):
        spjf_wait(exp_mean_x_model, 1.2)
    with pytest.raises(ValueError):
        sjf_time(exp_mean_x_model, 0.0)


def test_psjf_residence_identity(exact_exp_model):
    lam = 0.8
    result = psjf_time(exact_exp_model, lam)
    assert result.expected_residence == pytest.approx(-math.log(1 - lam) / lam, rel=1e-7)
    assert result.expected_wait > 0
    # a job of size x: residence x / (1 - ρ_x)
    x = 0.5
    rho_x = lam * (1 - math.exp(-x) * (1 + x))
    assert psjf_time(exact_exp_model, lam, x).expected_residence == pytest.approx(
        x / (1 - rho_x)
    )


def test_pspjf(exp_mean_x_model, exact_exp_model):
    lam = 0.8
    result = pspjf_time(exp_mean_x_model, lam)
    assert result.policy == "PSPJF"
    # the wait counts the service moment of the jobs predicted below y
    assert result.expected_total == pytest.approx(3.1945, abs=1e-3)
    # the overall residence of every continuous model
    assert result.expected_residence == pytest.approx(-math.log(1 - lam) / lam, rel=1e-4)
    predicted = pspjf_time(exp_mean_x_model, lam, wait_moment="predicted")
    assert predicted.expected_total == pytest.approx(2.8788, abs=1e-3)
    assert predicted.expected_residence == pytest.approx(result.expected_residence)
    assert predicted.expected_wait < result.expected_wait
    with pytest.raises(ValueError):
        pspjf_time(exp_mean_x_model, lam, wait_moment="mean")

    # exact predictions: PSPJF is PSJF
    assert pspjf_time(exact_exp_model, lam).expected_total == pytest.approx(
        psjf_time(exact_exp_model, lam).expected_total
    )


def test_preemptive_needs_density():
    model = DiscreteModel([(1.0, 1.0, 0.5), (2.0, 2.0, 0.5)])
    with pytest.raises(TypeError):
        psjf_time(model, 0.3)
    with pytest.raises(TypeError):
        pspjf_time(model, 0.3)


def test_spept(exp_mean_x_model):
    # E[X | Y = y] is increasing: SPEPT orders like SPJF
    lam = 0.8
    assert spept_time(exp_mean_x_model, lam).expected_total == pytest.approx(
        spjf_time(exp_mean_x_model, lam).expected_total, rel=1e-8
    )


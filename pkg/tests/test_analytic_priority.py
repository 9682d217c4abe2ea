"""Tests for the (predicted) priority class formulas."""

__author__ = "Jonas Van Der Donckt"

import pytest

from predqueue.analytic import (
    fifo_time,
    priority_mean_wait,
    priority_pom,
    priority_time,
    priority_wait,
    priority_wait_true_class,
)
from predqueue.models import ClassModel, Deterministic, DiscreteModel
from predqueue.utils.errors import Unstable
from .utils import two_class_model


def test_true_class_waits(two_class_model):
    # λ E[S^2] / 2 = 0.55, loads 0.3 and 0.4
    assert priority_wait(two_class_model, 0) == pytest.approx(0.55 / 0.7)
    assert priority_wait(two_class_model, 1) == pytest.approx(0.55 / (0.3 * 0.7))
    assert priority_mean_wait(two_class_model) == pytest.approx(1.519047619)


def test_predicted_class_waits(two_class_model):
    # predicted loads 0.35 and 0.35
    assert priority_wait(two_class_model, 0, predicted=True) == pytest.approx(0.846153846)
    assert priority_wait(two_class_model, 1, predicted=True) == pytest.approx(2.820512821)
    mean = priority_mean_wait(two_class_model, predicted=True)
    assert mean == pytest.approx(1.596410256)

    true_waits = [priority_wait_true_class(two_class_model, i) for i in range(2)]
    assert true_waits == pytest.approx([1.043590, 2.425641], abs=1e-6)
    # the rate weighted mean over true classes is the same mean wait
    rates = two_class_model.arrival_rates
    assert (rates[0] * true_waits[0] + rates[1] * true_waits[1]) / rates.sum() == (
        pytest.approx(mean)
    )

    assert priority_pom(two_class_model) == pytest.approx(1.596410256 / 1.519047619)


def test_exact_labels_cost_nothing():
    cm = ClassModel([0.3, 0.2], [Deterministic(1.0), Deterministic(2.0)], [[1.0, 0.0], [0.0, 1.0]])
    assert priority_pom(cm) == pytest.approx(1.0)
    for i in range(2):
        assert priority_wait_true_class(cm, i) == pytest.approx(priority_wait(cm, i))


def test_priority_time(two_class_model):
    informed = priority_time(two_class_model)
    assert informed.policy == "PRIORITY"
    assert informed.lam == pytest.approx(0.5)
    assert informed.expected_residence == pytest.approx(1.4)
    assert informed.expected_total == pytest.approx(1.519047619 + 1.4)
    predicted = priority_time(two_class_model, 0.5, predicted=True)
    assert predicted.policy == "PRED_PRIORITY"
    assert predicted.expected_wait == pytest.approx(1.596410256)
    with pytest.raises(ValueError):
        priority_time(two_class_model, 0.6)


def test_unstable_class():
    cm = ClassModel([0.5, 0.3], [Deterministic(1.0), Deterministic(2.0)], [[1, 0], [0, 1]])
    # class 0 alone is stable
    assert priority_wait(cm, 0) == pytest.approx((0.5 + 0.3 * 4) / 2 / 0.5)
    with pytest.raises(Unstable) as e_info:
        priority_wait(cm, 1)
    assert e_info.value.class_index == 1
    with pytest.raises(Unstable):
        priority_mean_wait(cm)
    with pytest.raises(Unstable):
        priority_time(cm)


def test_index_and_type_errors(two_class_model):
    with pytest.raises(IndexError):
        priority_wait(two_class_model, 2)
    with pytest.raises(IndexError):
        priority_wait_true_class(two_class_model, -1)
    with pytest.raises(TypeError):
        priority_mean_wait(DiscreteModel([(1.0, 1.0, 1.0)]))


def test_fifo():
    model = DiscreteModel([(1.0, 1.0, 1.0)])
    result = fifo_time(model, 0.5)
    # E[T] = 1 + 0.5 * 1 / (2 * 0.5)
    assert result.expected_total == pytest.approx(1.5)
    assert result.details["load"] == pytest.approx(0.5)
    assert result.policy == "FIFO"
    with pytest.raises(Unstable):
        fifo_time(model, 1.0)


def test_fifo_of_class_model(two_class_model):
    # FIFO is the single class case: 0.55 / (1 - 0.7)
    assert fifo_time(two_class_model, 0.5).expected_wait == pytest.approx(0.55 / 0.3)

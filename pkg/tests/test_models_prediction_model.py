"""Tests for the workload models (joint laws of service and predicted time)."""

__author__ = "Jonas Van Der Donckt"

import math
import pytest
import numpy as np

from scipy import integrate, special

from predqueue.models import (
    MODEL_NAMES,
    ClassModel,
    Deterministic,
    DiscreteModel,
    Exponential,
    KernelPredictionModel,
    PredictionModel,
    PredictionProfile,
    conditional_mean_service,
    exact,
    is_order_faithful,
    load_below_predicted,
    load_below_service,
    model_from_config,
    predicted_density,
    reversed_exponential_mean_inv_x,
    service_density,
    two_type,
    uniform_multiplicative,
    weibull_base,
)
from predqueue.models.prediction_model import total_rate_matches
from predqueue.utils.errors import DensityDomainError
from .utils import exp_mean_x_model, exact_exp_model, two_type_model, two_class_model


def test_exp_mean_x_marginals(exp_mean_x_model):
    model = exp_mean_x_model
    assert isinstance(model, KernelPredictionModel)
    assert model.name == "exp_mean_x"
    assert model.mean_service == pytest.approx(1.0)
    assert model.second_moment_service == pytest.approx(2.0)
    # f_p(y) = 2 K0(2 sqrt(y))
    for y in [0.1, 1.0, 5.0]:
        expected = 2 * special.k0(2 * math.sqrt(y))
        assert predicted_density(model, y) == pytest.approx(expected, rel=1e-7)
    assert service_density(model, 2.0) == pytest.approx(math.exp(-2.0))
    # E[Y] = E[X] and E[Y^2] = 2 E[X^2]
    assert model.predicted_moment(1) == pytest.approx(1.0, rel=1e-6)
    assert model.predicted_moment(2) == pytest.approx(4.0, rel=1e-5)


def test_exp_mean_x_loads(exp_mean_x_model):
    model = exp_mean_x_model
    lam = 0.8
    assert load_below_service(model, lam, 1.0) == pytest.approx(lam * (1 - 2 * math.exp(-1)))
    for y in [0.5, 2.0, 10.0]:
        expected, _ = integrate.quad(
            lambda x: x * math.exp(-x) * (1 - math.exp(-y / x)), 0, np.inf
        )
        assert load_below_predicted(model, lam, y) == pytest.approx(lam * expected, rel=1e-7)
    # continuous predictions carry no load at 0
    assert load_below_predicted(model, lam, 0.0) == 0.0
    # nondecreasing, tending to the load
    loads = [load_below_predicted(model, lam, y) for y in [0.1, 1.0, 10.0, 100.0]]
    assert np.all(np.diff(loads) >= 0)
    assert loads[-1] == pytest.approx(lam, rel=1e-3)


def test_exp_mean_x_conditional_mean(exp_mean_x_model):
    model = exp_mean_x_model
    # E[X | Y = y] = sqrt(y) K1(2 sqrt(y)) / K0(2 sqrt(y))
    for y in [0.2, 1.0, 4.0]:
        r = 2 * math.sqrt(y)
        expected = math.sqrt(y) * special.k1(r) / special.k0(r)
        assert conditional_mean_service(model, y) == pytest.approx(expected, rel=1e-7)
    assert model.mean_order() == 1
    assert is_order_faithful(model)


def test_reversed_model_is_not_order_faithful():
    model = reversed_exponential_mean_inv_x()
    assert model.name == "reversed_exp"
    assert model.support_hint[1] > 1e5
    # f_p(y) = 1 / (1 + y)^2 and E[X | Y = y] = 2 / (1 + y)
    assert model.predicted_density(1.0) == pytest.approx(0.25)
    for y in [0.5, 1.0, 3.0]:
        assert model.conditional_mean_service(y) == pytest.approx(2 / (1 + y), rel=1e-7)
    assert model.mean_order() == -1
    assert not is_order_faithful(model)


def test_exact_model(exact_exp_model):
    model = exact_exp_model
    assert model.is_exact
    assert model.support_hint[0] == model.support_hint[1]
    assert load_below_predicted(model, 0.5, 2.0) == pytest.approx(
        load_below_service(model, 0.5, 2.0)
    )
    assert model.conditional_mean_service(1.5) == 1.5
    assert model.mean_order() == 1
    np.testing.assert_array_equal(model.spept_key(np.array([0.5, 2.0])), [0.5, 2.0])


def test_uniform_multiplicative_model():
    model = uniform_multiplicative(Exponential(1.0), alpha=0.5)
    assert not model.is_exact
    assert model.predicted_moment(1) == pytest.approx(1.0, rel=1e-7)
    # alpha = 0 means exact predictions
    assert uniform_multiplicative(Exponential(1.0), alpha=0.0).is_exact
    with pytest.raises(ValueError):
        uniform_multiplicative(Exponential(1.0), alpha=1.5)

    weibull = uniform_multiplicative(weibull_base(), alpha=1.0)
    assert weibull.mean_service == pytest.approx(1.0)
    assert weibull.support_hint[0] > 50


def test_raw_density_model():
    # independent Exp(1) service and prediction
    model = PredictionModel(
        density=lambda x, y: math.exp(-x - y),
        sampler=lambda rng, n: (rng.exponential(1.0, n), rng.exponential(1.0, n)),
        support_hint=(50.0, 50.0),
        name="independent",
    )
    assert model.service_density(1.0) == pytest.approx(math.exp(-1.0), rel=1e-7)
    assert model.mean_service == pytest.approx(1.0, rel=1e-6)
    assert model.load_below_predicted(0.5, 1.0) == pytest.approx(
        0.5 * (1 - math.exp(-1.0)), rel=1e-6
    )
    # predictions carry no information
    assert model.conditional_mean_service(2.0) == pytest.approx(1.0, rel=1e-6)


def test_raw_density_model_truncation():
    with pytest.raises(ValueError):
        PredictionModel(
            density=lambda x, y: math.exp(-x - y),
            sampler=lambda rng, n: (rng.exponential(1.0, n), rng.exponential(1.0, n)),
            support_hint=(5.0, 5.0),
        )
    with pytest.raises(ValueError):
        PredictionModel(lambda x, y: 0.0, lambda rng, n: None, support_hint=(0.0, 1.0))


def test_density_domain_error(exp_mean_x_model):
    with pytest.raises(ValueError):
        service_density(exp_mean_x_model, 0.0)
    with pytest.raises(ValueError):
        predicted_density(exp_mean_x_model, -1.0)
    with pytest.raises(DensityDomainError):
        exact(Exponential(1.0)).conditional_mean_service(-1.0)


def test_sample_jobs(exp_mean_x_model):
    rng = np.random.Generator(np.random.PCG64(0))
    jobs = exp_mean_x_model.sample_jobs(rng, 200_000)
    assert set(jobs) == {"service", "predicted"}
    assert jobs["service"].shape == (200_000,)
    assert jobs["service"].mean() == pytest.approx(1.0, rel=0.02)
    assert jobs["predicted"].mean() == pytest.approx(1.0, rel=0.02)

    # identical seeds give identical draws
    again = exp_mean_x_model.sample_jobs(np.random.Generator(np.random.PCG64(0)), 10)
    first = exp_mean_x_model.sample_jobs(np.random.Generator(np.random.PCG64(0)), 10)
    np.testing.assert_array_equal(again["predicted"], first["predicted"])


def test_profile(exp_mean_x_model):
    profile = exp_mean_x_model.profile("load")
    assert isinstance(profile, PredictionProfile)
    # memoized
    assert exp_mean_x_model.profile("load") is profile
    # F_p(y) = 1 - 2 sqrt(y) K1(2 sqrt(y))
    for y in [0.3, 1.0, 7.5]:
        r = 2 * math.sqrt(y)
        assert profile("cdf", y) == pytest.approx(1 - r * special.k1(r), abs=1e-6)
        assert profile("load1", y) == pytest.approx(
            load_below_predicted(exp_mean_x_model, 1.0, y), rel=1e-6
        )
    with pytest.raises(ValueError):
        exp_mean_x_model.profile("density")


def test_two_type_model(two_type_model):
    model = two_type_model
    assert isinstance(model, DiscreteModel)
    assert model.is_discrete and not model.is_exact
    assert model.mean_service == pytest.approx(2.0)
    assert model.second_moment_service == pytest.approx(5.0)
    np.testing.assert_allclose(model.levels, [1.0, 3.0])
    # short jobs predicted long with p = 0.2, long jobs predicted short with q = 0.1
    values, probs = model.predicted_pmf()
    np.testing.assert_allclose(values, [1.0, 3.0])
    np.testing.assert_allclose(probs, [0.5 * 0.8 + 0.5 * 0.1, 0.5 * 0.2 + 0.5 * 0.9])
    assert model.load_below_predicted(1.0, 1.0) == pytest.approx(0.4 + 0.15)
    assert model.conditional_mean_service(1.0) == pytest.approx((0.4 + 0.15) / 0.45)
    assert model.mean_order() == 1
    with pytest.raises(DensityDomainError):
        model.conditional_mean_service(2.0)

    with pytest.raises(ValueError):
        two_type(3.0, 1.0)
    with pytest.raises(ValueError):
        two_type(1.0, 3.0, p=1.5)
    with pytest.raises(ValueError):
        two_type(1.0, 3.0, fractions=(0.5, 0.6))


def test_two_type_exact_model():
    model = two_type(1.0, 4.0)
    assert model.is_exact
    assert model.load_below_service(1.0, 1.0) == pytest.approx(0.5)


def test_discrete_model_validation():
    with pytest.raises(ValueError):
        DiscreteModel([(1.0, 1.0, 0.5)])
    with pytest.raises(ValueError):
        DiscreteModel([(0.0, 1.0, 1.0)])
    with pytest.raises(ValueError):
        DiscreteModel([])


def test_discrete_sample_jobs(two_type_model):
    rng = np.random.Generator(np.random.PCG64(3))
    jobs = two_type_model.sample_jobs(rng, 50_000)
    assert set(jobs) == {"service", "predicted", "class_label", "predicted_class"}
    np.testing.assert_array_equal(jobs["class_label"], np.where(jobs["service"] == 1.0, 0, 1))
    np.testing.assert_array_equal(
        jobs["predicted_class"], np.where(jobs["predicted"] == 1.0, 0, 1)
    )
    short = jobs["service"] == 1.0
    assert np.mean(jobs["predicted"][short] == 3.0) == pytest.approx(0.2, abs=0.015)


def test_to_class_model(two_type_model):
    cm = two_type_model.to_class_model(0.4, by="predicted")
    assert isinstance(cm, ClassModel)
    np.testing.assert_allclose(cm.arrival_rates, [0.2, 0.2])
    np.testing.assert_allclose(cm.confusion, [[0.8, 0.2], [0.1, 0.9]])
    np.testing.assert_allclose(cm.means, [1.0, 3.0])

    informed = two_type_model.to_class_model(0.4, by="service")
    np.testing.assert_allclose(informed.confusion, np.eye(2))
    with pytest.raises(ValueError):
        two_type_model.to_class_model(0.4, by="class")


def test_class_model(two_class_model):
    cm = two_class_model
    assert cm.n_classes == 2
    assert cm.total_rate == pytest.approx(0.5)
    np.testing.assert_allclose(cm.loads, [0.3, 0.4])
    np.testing.assert_allclose(cm.predicted_rates, [0.31, 0.19])
    np.testing.assert_allclose(cm.predicted_loads, [0.35, 0.35])
    assert cm.load == pytest.approx(0.7)
    assert cm.mean_service == pytest.approx(1.4)
    assert cm.second_moment_service == pytest.approx((0.3 * 1 + 0.2 * 4) / 0.5)

    assert total_rate_matches(cm, 0.5)
    assert not total_rate_matches(cm, 0.6)
    assert total_rate_matches(exact(), 0.6)


def test_class_model_sample_jobs(two_class_model):
    rng = np.random.Generator(np.random.PCG64(7))
    jobs = two_class_model.sample_jobs(rng, 100_000)
    labels, predicted = jobs["class_label"], jobs["predicted_class"]
    np.testing.assert_array_equal(jobs["service"], np.where(labels == 0, 1.0, 2.0))
    assert np.mean(labels == 0) == pytest.approx(0.6, abs=0.01)
    assert np.mean(predicted[labels == 0] == 1) == pytest.approx(0.1, abs=0.01)
    assert np.mean(predicted[labels == 1] == 0) == pytest.approx(0.2, abs=0.01)


def test_class_model_validation():
    dists = [Deterministic(1.0), Deterministic(2.0)]
    with pytest.raises(ValueError):
        ClassModel([0.3, 0.2], dists, [[0.9, 0.2], [0.2, 0.8]])
    with pytest.raises(ValueError):
        ClassModel([0.3, 0.2], dists[:1], np.eye(2))
    with pytest.raises(ValueError):
        ClassModel([0.3, 0.2], dists, np.eye(3))
    with pytest.raises(ValueError):
        ClassModel([-0.3, 0.2], dists, np.eye(2))


@pytest.mark.parametrize("name", MODEL_NAMES)
def test_model_from_config(name):
    model = model_from_config(name)
    assert model.mean_service == pytest.approx(2.0 if name == "two_type" else 1.0)


def test_model_from_config_errors():
    with pytest.raises(ValueError):
        model_from_config("pareto")
    with pytest.raises(ValueError):
        model_from_config("reversed_exp", mean=2.0)
    model = model_from_config("exact", base="weibull", mean=2.0)
    assert model.is_exact and model.mean_service == pytest.approx(2.0)

"""Tests for the shortest remaining (predicted) processing time formulas."""

__author__ = "Jonas Van Der Donckt"

import math
import pytest
import numpy as np

from predqueue.analytic import (
    BusyPeriodMoments,
    psjf_time,
    sprpt_b,
    sprpt_busy_moments,
    sprpt_d,
    sprpt_time,
    sprpt_wait,
    srpt_time,
)
from predqueue.models import two_type
from predqueue.utils.errors import DensityDomainError, Unstable
from .utils import exp_mean_x_model, exact_exp_model, table_lambdas


# Expected time in system of the exp_mean_x model (service Exp(1), prediction Exp(x))
SRPT_TOTALS = [1.4254, 1.6041, 1.8746, 2.3528, 3.5521, 5.5410, 10.4947, 17.6269]
SPRPT_TOTALS = [1.6583, 1.9305, 2.3539, 3.1168, 5.0985, 8.3221, 16.6239, 28.7302]
# Simulated time in system of the same model (independent of the quadrature)
SPRPT_SIMULATED = {0.5: 1.6588, 0.9: 5.0973}


@pytest.mark.parametrize("lam,expected", zip(table_lambdas, SRPT_TOTALS))
def test_srpt_table(exp_mean_x_model, lam, expected):
    result = srpt_time(exp_mean_x_model, lam)
    assert result.expected_total == pytest.approx(expected, abs=2e-4)
    assert result.policy == "SRPT"


@pytest.mark.parametrize(
    "lam,expected",
    [
        (lam, total)
        for lam, total in zip(table_lambdas, SPRPT_TOTALS)
        if lam in (0.5, 0.8, 0.9, 0.99)
    ],
)
def test_sprpt_table(exp_mean_x_model, lam, expected):
    result = sprpt_time(exp_mean_x_model, lam)
    assert result.expected_total == pytest.approx(expected, rel=2e-4)
    if lam in SPRPT_SIMULATED:
        assert result.expected_total == pytest.approx(SPRPT_SIMULATED[lam], rel=5e-3)
    assert set(result.details) == {"wait", "residence", "truncated_mass"}
    assert result.details["truncated_mass"] < 1e-5


def test_sprpt_is_srpt_for_exact_predictions(exact_exp_model):
    lam = 0.7
    srpt = srpt_time(exact_exp_model, lam)
    sprpt = sprpt_time(exact_exp_model, lam)
    assert sprpt.expected_wait == pytest.approx(srpt.expected_wait, rel=1e-5)
    assert sprpt.expected_residence == pytest.approx(srpt.expected_residence, rel=1e-5)


def test_srpt_beats_psjf(exact_exp_model):
    lam = 0.8
    assert srpt_time(exact_exp_model, lam).expected_total < psjf_time(
        exact_exp_model, lam
    ).expected_total


def test_srpt_per_size(exact_exp_model):
    lam = 0.5
    # the smallest jobs hardly wait
    small = srpt_time(exact_exp_model, lam, x=1e-3)
    assert small.expected_wait < 1e-3
    assert small.expected_residence == pytest.approx(1e-3, rel=1e-3)
    # W(x) = λ (E[S^2 1{S <= x}] + x^2 P(S > x)) / (2 (1 - ρ_x)^2)
    x = 2.0
    second = 2 * (1 - math.exp(-x) * (1 + x + x * x / 2)) + x * x * math.exp(-x)
    rho_x = lam * (1 - math.exp(-x) * (1 + x))
    assert srpt_time(exact_exp_model, lam, x=x).expected_wait == pytest.approx(
        lam * second / (2 * (1 - rho_x) ** 2)
    )


def test_sprpt_level_quantities(exp_mean_x_model):
    lam = 0.8
    rho = lam * exp_mean_x_model.mean_service
    qs = [0.1, 0.5, 1.0, 3.0, 10.0]
    bs = [sprpt_b(exp_mean_x_model, lam, q) for q in qs]
    assert np.all(np.diff(bs) >= -1e-10)
    assert np.all(np.array(bs) <= rho + 1e-10)
    assert sprpt_b(exp_mean_x_model, lam, 90.0) == pytest.approx(rho, rel=1e-4)
    for q in qs:
        assert sprpt_d(exp_mean_x_model, lam, q) > 0

    waits = [sprpt_wait(exp_mean_x_model, lam, q) for q in qs]
    assert np.all(np.diff(waits) > 0)


def test_sprpt_busy_moments(exp_mean_x_model):
    lam = 0.8
    q = 1.0
    moments = sprpt_busy_moments(exp_mean_x_model, lam, q)
    assert isinstance(moments, BusyPeriodMoments)
    rho_q = exp_mean_x_model.load_below_predicted(lam, q)
    assert moments.y1 == pytest.approx(moments.z1 / (1 - rho_q))
    # second moments dominate squared first moments
    assert moments.x2 >= moments.x1**2
    assert moments.z2 >= moments.z1**2
    assert moments.y2 >= moments.y1**2

    with pytest.raises(DensityDomainError):
        sprpt_busy_moments(exp_mean_x_model, lam, 0.0)


def test_sprpt_per_prediction(exp_mean_x_model):
    lam = 0.8
    result = sprpt_time(exp_mean_x_model, lam, y=1.0)
    assert result.expected_wait == pytest.approx(sprpt_wait(exp_mean_x_model, lam, 1.0))
    assert result.expected_residence > 0


def test_unstable_and_discrete(exp_mean_x_model):
    with pytest.raises(Unstable):
        srpt_time(exp_mean_x_model, 1.0)
    with pytest.raises(Unstable):
        sprpt_time(exp_mean_x_model, 1.5)
    with pytest.raises(TypeError):
        sprpt_time(two_type(1.0, 3.0), 0.2)

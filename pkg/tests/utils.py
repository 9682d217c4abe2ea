"""Fixtures and helper functions for testing."""

__author__ = "Jeroen Van Der Donckt, Jonas Van Der Donckt"

import os
import pytest
import logging

from predqueue.models import (
    ClassModel,
    Deterministic,
    Exponential,
    exact,
    exponential_mean_x,
    two_type,
)


# Get the project direcory
proj_dir = os.path.abspath(os.path.join(os.path.dirname( __file__ ), '..'))

# The arrival rates of the comparison tables
table_lambdas = [0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.98, 0.99]


@pytest.fixture(scope="module")
def exp_mean_x_model():
    return exponential_mean_x()


@pytest.fixture
def exact_exp_model():
    return exact(Exponential(1.0))


@pytest.fixture
def two_type_model():
    return two_type(1.0, 3.0, (0.5, 0.5), p=0.2, q=0.1)


@pytest.fixture
def two_class_model() -> ClassModel:
    return ClassModel(
        arrival_rates=[0.3, 0.2],
        service_dists=[Deterministic(1.0), Deterministic(2.0)],
        confusion=[[0.9, 0.1], [0.2, 0.8]],
    )


@pytest.fixture
def logging_file_path() -> str:
    logging_path = proj_dir + "/tests/logging.log"
    yield logging_path
    # Cleanup after test
    if os.path.exists(logging_path):
        logging.shutdown()
        os.remove(logging_path)


@pytest.fixture
def config_file_path() -> str:
    config_path = proj_dir + "/tests/run_config.ini"
    yield config_path
    if os.path.exists(config_path):
        os.remove(config_path)


def write_config(path: str, text: str) -> str:
    with open(path, "w") as f:
        f.write(text)
    return path

"""The ``predqueue`` command line interface and its run-configuration file.

The entry point is `predqueue.cli.main.main` (the ``predqueue`` console script
and ``python -m predqueue.cli``). It is not re-exported here so that the name
``predqueue.cli.main`` keeps referring to the module.

"""

__author__ = "Jonas Van Der Donckt"

from .config import RunConfig, parse_run_config
from .main import (
    build_parser,
    cmd_analytic,
    cmd_figure1,
    cmd_pom,
    cmd_simulate,
    cmd_table,
)

__all__ = [
    "RunConfig",
    "parse_run_config",
    "build_parser",
    "cmd_analytic",
    "cmd_simulate",
    "cmd_table",
    "cmd_figure1",
    "cmd_pom",
]

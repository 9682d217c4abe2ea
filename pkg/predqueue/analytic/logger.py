"""Contains the used variables and functions to provide logging functionality.

See Also
--------
analytic_table: its `logging_file_path` argument.

"""

__author__ = "Jeroen Van Der Donckt"

import functools
import inspect
import logging
import time
from typing import Callable

import pandas as pd

from ..utils.logging import bracketed_fields, logging_file_to_df, parse_duration

# Package specific logger
logger = logging.getLogger("analytic_logger")
logger.setLevel(logging.DEBUG)

# Create logger which writes WARNING messages or higher to sys.stderr
console = logging.StreamHandler()
console.setLevel(logging.WARNING)
logger.addHandler(console)


def log_duration(operation: Callable) -> Callable:
    """Decorate an analytic ``operation(model, lam, ...)`` to log its duration.

    One INFO record is emitted per call, e.g.
    ``Finished [sprpt_time] for model [exp_mean_x] at lambda [0.9] in [1.2 seconds]!``

    """
    signature = inspect.signature(operation)

    @functools.wraps(operation)
    def wrapper(*args, **kwargs):
        t_start = time.time()
        out = operation(*args, **kwargs)
        bound = signature.bind(*args, **kwargs).arguments
        model = next(iter(bound.values()))
        lam = bound.get("lam")
        if lam is None:
            lam = getattr(out, "lam", float("nan"))
        logger.info(
            f"Finished [{operation.__name__}] for model [{getattr(model, 'name', model)}]"
            f" at lambda [{lam}] in [{time.time() - t_start} seconds]!"
        )
        return out

    return wrapper


def _parse_message(message: str) -> list:
    """Parse the message of the logged info."""
    matches = bracketed_fields(message)
    assert len(matches) == 4
    operation, model, lam = matches[0], matches[1], float(matches[2])
    return [operation, model, lam, parse_duration(matches[3])]


def _parse_logging_execution_to_df(logging_file_path: str) -> pd.DataFrame:
    df = logging_file_to_df(logging_file_path)
    df = df[df["name"] == logger.name]
    df = df[df["message"].str.startswith("Finished [")].reset_index(drop=True)
    df[["operation", "model", "lambda", "duration"]] = pd.DataFrame(
        list(df["message"].apply(_parse_message)),
        index=df.index,
        columns=["operation", "model", "lambda", "duration"],
    )
    return df.drop(columns=["name", "log_level", "message"])


def get_analytic_logs(logging_file_path: str) -> pd.DataFrame:
    """Get execution (time) info for each logged analytic evaluation.

    Parameters
    ----------
    logging_file_path: str
        The file path where the logged messages are stored. This is the file path
        that is passed to `analytic_table`.

    Returns
    -------
    pd.DataFrame
        A DataFrame with the operation, model name, arrival rate and duration.

    """
    df = _parse_logging_execution_to_df(logging_file_path)
    df["duration"] = pd.to_timedelta(df["duration"], unit="s")
    return df


def get_analytic_stats(logging_file_path: str) -> pd.DataFrame:
    """Get execution (time) statistics for each (operation, model) combination.

    Returns
    -------
    pd.DataFrame
        A DataFrame with the mean (time), std (time), sum (time), and number of
        evaluations, slowest operations first.

    """
    df = get_analytic_logs(logging_file_path)
    return (
        df.groupby(["operation", "model"])
        .agg({"duration": ["mean", "std", "sum", "count"]})
        .sort_values(by=("duration", "sum"), ascending=False)
    )

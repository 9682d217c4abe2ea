"""Contains the used variables and functions to provide logging functionality.

See Also
--------
run_plan: its `logging_file_path` argument.
alpha_sweep: its `logging_file_path` argument.

"""

__author__ = "Jeroen Van Der Donckt"

import logging

import pandas as pd

from ..utils.logging import bracketed_fields, logging_file_to_df, parse_duration

# Package specific logger
logger = logging.getLogger("experiment_logger")
logger.setLevel(logging.DEBUG)

# Create logger which writes WARNING messages or higher to sys.stderr
console = logging.StreamHandler()
console.setLevel(logging.WARNING)
logger.addHandler(console)

_COLUMNS = ["trial", "policy", "model", "lambda", "seed", "duration"]


def _parse_message(message: str) -> list:
    """Parse the message of the logged info."""
    matches = bracketed_fields(message)
    assert len(matches) == 6
    trial, policy, model = int(matches[0]), matches[1], matches[2]
    lam, seed = float(matches[3]), int(matches[4])
    return [trial, policy, model, lam, seed, parse_duration(matches[5])]


def _parse_logging_execution_to_df(logging_file_path: str) -> pd.DataFrame:
    df = logging_file_to_df(logging_file_path)
    df = df[df["name"] == logger.name]
    df = df[df["message"].str.startswith("Finished trial")].reset_index(drop=True)
    df[_COLUMNS] = pd.DataFrame(
        list(df["message"].apply(_parse_message)), index=df.index, columns=_COLUMNS
    )
    return df.drop(columns=["name", "log_level", "message"])


def get_trial_logs(logging_file_path: str) -> pd.DataFrame:
    """Get execution (time) info for each trial of an experiment.

    Parameters
    ----------
    logging_file_path: str
        The file path where the logged messages are stored. This is the file path
        that is passed to `run_plan` or `alpha_sweep`.

    Returns
    -------
    pd.DataFrame
        A DataFrame with the trial index, policy, model name, arrival rate, seed
        and duration of every trial.

    """
    df = _parse_logging_execution_to_df(logging_file_path)
    df["duration"] = pd.to_timedelta(df["duration"], unit="s")
    return df


def get_cell_stats(logging_file_path: str) -> pd.DataFrame:
    """Get execution (time) statistics for each (model, lambda, policy) cell.

    Parameters
    ----------
    logging_file_path: str
        The file path where the logged messages are stored. This is the file path
        that is passed to `run_plan` or `alpha_sweep`.

    Returns
    -------
    pd.DataFrame
        A DataFrame with for each cell the sum (time), mean (time), std (time) and
        number of trials, most expensive cells first.

    """
    df = get_trial_logs(logging_file_path)
    return (
        df.groupby(["model", "lambda", "policy"])
        .agg({"duration": ["sum", "mean", "std", "count"]})
        .sort_values(by=("duration", "sum"), ascending=False)
    )

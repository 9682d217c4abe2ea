"""Contains the used variables and functions to provide logging functionality.

See Also
--------
run_trial: logs one record per simulated trial.

"""

__author__ = "Jeroen Van Der Donckt"

import logging

import pandas as pd

from ..utils.logging import bracketed_fields, logging_file_to_df, parse_duration

# Package specific logger
logger = logging.getLogger("simulation_logger")
logger.setLevel(logging.DEBUG)

# Create logger which writes WARNING messages or higher to sys.stderr
console = logging.StreamHandler()
console.setLevel(logging.WARNING)
logger.addHandler(console)


def _parse_message(message: str) -> list:
    """Parse the message of the logged info."""
    matches = bracketed_fields(message)
    assert len(matches) == 6
    policy, model = matches[0], matches[1]
    lam, seed, completed = float(matches[2]), int(matches[3]), int(matches[4])
    return [policy, model, lam, seed, completed, parse_duration(matches[5])]


def get_simulation_logs(logging_file_path: str) -> pd.DataFrame:
    """Get execution (time) info for each logged simulation trial.

    Parameters
    ----------
    logging_file_path: str
        The file path where the logged messages are stored. This is the file path
        that is passed to `run_plan` or `alpha_sweep`.

    Returns
    -------
    pd.DataFrame
        A DataFrame with the policy, model name, arrival rate, seed, number of
        completed jobs and duration of every trial.

    """
    columns = ["policy", "model", "lambda", "seed", "completed", "duration"]
    df = logging_file_to_df(logging_file_path)
    df = df[df["name"] == logger.name]
    df = df[df["message"].str.startswith("Finished simulation")].reset_index(drop=True)
    df[columns] = pd.DataFrame(
        list(df["message"].apply(_parse_message)), index=df.index, columns=columns
    )
    df["duration"] = pd.to_timedelta(df["duration"], unit="s")
    return df.drop(columns=["name", "log_level", "message"])

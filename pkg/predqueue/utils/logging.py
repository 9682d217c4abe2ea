"""Log file handling shared by the analytic engine and the experiment harness.

A long call (a table of analytic cells, a plan of trials) writes its INFO
records to one file through `log_to_file`; the ``get_*_logs`` parsers of the
subpackages read that file back with `logging_file_to_df`.

"""

__author__ = "Jeroen Van Der Donckt"

import contextlib
import logging
import re
import warnings
from pathlib import Path
from typing import Iterator, List, Optional, Union

import pandas as pd

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
LOG_COLUMNS = ["log_time", "name", "log_level", "message"]

_LOG_LINE = re.compile(r"^(.*?) - (.*?) - ([A-Z]+) - (.*)$")


def bracketed_fields(message: str) -> List[str]:
    """Return the content of every outer ``[...]`` group of a log message.

    Brackets nested in a group are dropped, so ``"[a, [b]] [c]"`` gives
    ``["a, b", "c"]``.

    """
    fields, current, depth = [], [], 0
    for char in message:
        if char == "[":
            depth += 1
        elif char == "]":
            if depth == 0:
                raise ValueError(f"unbalanced ']' in log message {message!r}")
            depth -= 1
            if depth == 0:
                fields.append("".join(current))
                current = []
        elif depth:
            current.append(char)
    return fields


def parse_duration(field: str) -> float:
    """Parse a ``"<float> seconds"`` field into seconds."""
    return float(field.replace("seconds", "").strip())


def delete_logging_handlers(*loggers: logging.Logger):
    """Detach every handler that is not a plain stream handler.

    Parameters
    ----------
    *loggers : logging.Logger
        The loggers; each keeps its console handler.

    """
    for logger in loggers:
        for handler in [h for h in logger.handlers if type(h) != logging.StreamHandler]:
            logger.removeHandler(handler)
            handler.close()


def add_logging_handler(
    logger: logging.Logger, logging_file_path: Union[str, Path]
) -> logging.FileHandler:
    """Attach an INFO file handler to the logger; an existing file is cleared.

    Parameters
    ----------
    logger : logging.Logger
        The logger.
    logging_file_path : Union[str, Path]
        The file path for the file handler.

    Returns
    -------
    logging.FileHandler
        The handler, to be passed to `remove_logging_handler` afterwards.

    Warns
    -----
    RuntimeWarning
        When the file already exists.

    """
    path = Path(logging_file_path)
    if path.exists():
        warnings.warn(
            f"Logging file ({path}) already exists. This file will be overwritten!",
            RuntimeWarning,
        )
    # mode "w" truncates the file
    f_handler = logging.FileHandler(path, mode="w")
    f_handler.setFormatter(logging.Formatter(LOG_FORMAT))
    f_handler.setLevel(logging.INFO)
    logger.addHandler(f_handler)
    return f_handler


def remove_logging_handler(logger: logging.Logger, f_handler: logging.FileHandler):
    """Close the file handler and detach it from the logger."""
    logger.removeHandler(f_handler)
    f_handler.close()


@contextlib.contextmanager
def log_to_file(
    logging_file_path: Optional[Union[str, Path]], *loggers: logging.Logger
) -> Iterator[Optional[logging.FileHandler]]:
    """Route the INFO records of `loggers` to one file for the duration of a block.

    Stale file handlers of the loggers are removed first. When no path is
    given nothing is written and None is yielded.

    Parameters
    ----------
    logging_file_path : Union[str, Path], optional
        The log file; it is cleared first.
    *loggers : logging.Logger
        The loggers that share the file handler.

    """
    delete_logging_handlers(*loggers)
    if not logging_file_path:
        yield None
        return
    first, *others = loggers
    f_handler = add_logging_handler(first, logging_file_path)
    for logger in others:
        logger.addHandler(f_handler)
    try:
        yield f_handler
    finally:
        for logger in others:
            logger.removeHandler(f_handler)
        remove_logging_handler(first, f_handler)


def logging_file_to_df(logging_file_path: Union[str, Path]) -> pd.DataFrame:
    """Parse a log file written with `LOG_FORMAT` into a dataframe.

    Parameters
    ----------
    logging_file_path : Union[str, Path]
        The log file.

    Returns
    -------
    pd.DataFrame
        One row per record with the ``log_time, name, log_level, message``
        columns; lines that are no record (e.g. a traceback) are skipped.

    """
    with open(logging_file_path, "r") as f:
        records = [m.groups() for m in map(_LOG_LINE.match, f) if m is not None]
    df = pd.DataFrame.from_records(records, columns=LOG_COLUMNS)
    df["message"] = df["message"].str.strip()
    df["log_time"] = pd.to_datetime(df["log_time"])
    return df

"""Utility functions for internal data (representation) operations."""

__author__ = "Jeroen Van Der Donckt, Jonas Van Der Donckt"

from typing import Any, List

import numpy as np


def to_list(x: Any) -> List:
    """Convert the input to a list if necessary.

    Parameters
    ----------
    x : Any
        The input that needs to be convert to a list.

    Returns
    -------
    List
        A list of `x` if `x` wasn't a list (or array / tuple) yet, otherwise `x` as
        a list.

    """
    if not isinstance(x, (list, tuple, np.ndarray)):
        return [x]
    return list(x)


def parse_float_list(value: Any) -> List[float]:
    """Parse a comma separated string (or a sequence) into a list of floats.

    Parameters
    ----------
    value : Any
        Either a string such as ``"0.5, 0.7, 0.9"``, a single number, or a
        sequence of numbers.

    Returns
    -------
    List[float]
        The parsed values, in the given order.

    Raises
    ------
    ValueError
        Raised when an item cannot be converted to a float.

    """
    if isinstance(value, str):
        items = [v.strip() for v in value.replace(";", ",").split(",")]
        return [float(v) for v in items if len(v)]
    return [float(v) for v in to_list(value)]


def prediction_grid(upper: float, n_geom: int = 60, n_lin: int = 100) -> np.ndarray:
    """Construct the node grid on which predicted-size profiles are tabulated.

    The grid is the union of a geometric grid (which resolves the behaviour
    close to 0, where predicted densities may be singular) and a linear grid
    (which resolves the bulk of the distribution).

    Parameters
    ----------
    upper : float
        The (finite) right end of the grid.
    n_geom : int, optional
        Number of geometrically spaced nodes, by default 60.
    n_lin : int, optional
        Number of linearly spaced nodes, by default 100.

    Returns
    -------
    np.ndarray
        Sorted, unique nodes, starting at 0 and ending at `upper`.

    """
    assert np.isfinite(upper) and upper > 0
    geom = np.geomspace(upper * 1e-12, upper, n_geom)
    lin = np.linspace(0.0, upper, n_lin)
    return np.unique(np.concatenate([[0.0], geom, lin]))

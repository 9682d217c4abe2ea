"""Memoized interpolants of the predicted-size integrals of a model.

Every predicted policy needs, as a function of the predicted size y, a handful of
integrals of the joint density (the predicted CDF, the load below y, the
under-prediction moments of SPRPT, ...). Evaluating them by nested quadrature at
every outer quadrature node is what makes a naive evaluation take half an hour.
Instead, a `PredictionProfile` tabulates them once on a grid over
``[0, y_max]`` and interpolates with cubic Hermite splines that use the *exact*
derivatives (which are the corresponding densities, computed alongside).

The grid is refined locally: the interpolant is checked at the midpoint of every
unverified interval and each interval whose midpoint misses the tolerance is
split, for at most `max_refinements` rounds.

"""

__author__ = "Jonas Van Der Donckt"

import warnings
from typing import Callable, Dict, Sequence, Tuple

import numpy as np
from scipy.interpolate import CubicHermiteSpline, PchipInterpolator

from ..utils.classes import FrozenClass
from ..utils.data import prediction_grid

# Columns of the two profile groups; the first holds what every predicted policy
# needs, the second the under-prediction moments that only SPRPT uses.
LOAD_COLUMNS = ("cdf", "load1", "load2", "pred2")
EXCESS_COLUMNS = ("excess0", "excess1", "excess2")

ComputeFunc = Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray]]


def _sanitize_derivatives(nodes: np.ndarray, values: np.ndarray, derivs: np.ndarray):
    """Replace non-finite derivatives (e.g. a density singular at 0) by secants."""
    derivs = np.array(derivs, dtype=float, copy=True)
    bad = ~np.isfinite(derivs)
    if bad.any():
        secant = np.gradient(values, nodes, axis=0)
        derivs[bad] = secant[bad]
    return derivs


class PredictionProfile(FrozenClass):
    """Cubic Hermite interpolants of a group of predicted-size integrals.

    Parameters
    ----------
    nodes : np.ndarray
        Sorted grid over ``[0, y_max]``.
    values : np.ndarray
        The tabulated integrals, shape ``(len(nodes), len(columns))``.
    derivatives : np.ndarray
        Their exact derivatives with respect to y, same shape.
    columns : Sequence[str]
        The column names.
    extra : Dict[str, np.ndarray], optional
        Additional per-node values (e.g. the predicted density) that are
        interpolated with a PCHIP interpolant (non-finite entries skipped).
    converged : bool, optional
        Whether the interpolation tolerance was reached, by default True.

    """

    def __init__(
        self,
        nodes: np.ndarray,
        values: np.ndarray,
        derivatives: np.ndarray,
        columns: Sequence[str],
        extra: Dict[str, np.ndarray] = None,
        converged: bool = True,
    ):
        assert values.shape == derivatives.shape == (len(nodes), len(columns))
        self.nodes = np.asarray(nodes, dtype=float)
        self.upper = float(self.nodes[-1])
        self.columns = tuple(columns)
        self.converged = converged
        derivatives = _sanitize_derivatives(self.nodes, values, derivatives)
        self._values = {c: values[:, i].copy() for i, c in enumerate(self.columns)}
        self._splines = {
            c: CubicHermiteSpline(self.nodes, values[:, i], derivatives[:, i])
            for i, c in enumerate(self.columns)
        }
        self._derivatives = {c: s.derivative() for c, s in self._splines.items()}
        self._extra = {}
        for k, v in (extra or {}).items():
            ok = np.isfinite(v)
            self._extra[k] = PchipInterpolator(self.nodes[ok], v[ok], extrapolate=True)
        self._freeze()

    def _clip(self, y) -> np.ndarray:
        return np.clip(np.asarray(y, dtype=float), 0.0, self.upper)

    def __call__(self, column: str, y):
        """Evaluate `column` at `y`; arguments beyond the grid are clamped."""
        out = self._splines[column](self._clip(y))
        return float(out) if np.ndim(out) == 0 else out

    def derivative(self, column: str, y):
        """Evaluate the derivative of `column`; zero beyond the grid."""
        y = np.asarray(y, dtype=float)
        out = np.where(
            (y >= 0) & (y <= self.upper),
            self._derivatives[column](self._clip(y)),
            0.0,
        )
        return float(out) if np.ndim(out) == 0 else out

    def extra(self, name: str, y):
        """Evaluate one of the `extra` per-node interpolants."""
        out = self._extra[name](self._clip(y))
        return float(out) if np.ndim(out) == 0 else out

    def node_values(self, column: str) -> np.ndarray:
        """Return the tabulated values of `column` (a copy)."""
        return self._values[column].copy()

    def spline(self, column: str) -> CubicHermiteSpline:
        """Return the underlying spline of `column`."""
        return self._splines[column]

    def __len__(self) -> int:
        return len(self.nodes)

    def __repr__(self) -> str:
        return (
            f"{self.__class__.__name__}(columns={self.columns}, "
            f"nodes={len(self.nodes)}, upper={self.upper})"
        )


def build_profile(
    compute: ComputeFunc,
    upper: float,
    columns: Sequence[str],
    tolerance: float,
    max_refinements: int = 3,
    extra_columns: Sequence[str] = (),
    label: str = "profile",
) -> PredictionProfile:
    """Tabulate a group of integrals and refine the grid until interpolation is tight.

    Parameters
    ----------
    compute : Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray]]
        Maps an array of n nodes to ``(values, derivatives)``, each of shape
        ``(n, len(columns) + len(extra_columns))``; the derivatives of the extra
        columns are ignored.
    upper : float
        The right end of the grid (the y truncation bound).
    columns : Sequence[str]
        Names of the Hermite-interpolated columns.
    tolerance : float
        Maximal interpolation error at the midpoints, relative to the largest
        absolute tabulated value of the column.
    max_refinements : int, optional
        Maximal number of refinement rounds, by default 3.
    extra_columns : Sequence[str], optional
        Names of extra (PCHIP interpolated, unverified) columns.
    label : str, optional
        Name used in the warning when the tolerance is not met.

    Returns
    -------
    PredictionProfile
        The profile; its `converged` attribute tells whether the tolerance was
        reached. If not, a `RuntimeWarning` is raised.

    """
    n_main = len(columns)
    nodes = prediction_grid(upper)
    values, derivs = compute(nodes)
    suspect = np.ones(len(nodes) - 1, dtype=bool)

    converged = False
    for _ in range(max_refinements + 1):
        main_derivs = _sanitize_derivatives(nodes, values[:, :n_main], derivs[:, :n_main])
        splines = [
            CubicHermiteSpline(nodes, values[:, i], main_derivs[:, i])
            for i in range(n_main)
        ]
        mids = 0.5 * (nodes[:-1][suspect] + nodes[1:][suspect])
        mid_values, mid_derivs = compute(mids)
        approx = np.column_stack([s(mids) for s in splines])
        scale = np.max(np.abs(values[:, :n_main]), axis=0)
        scale[scale == 0] = 1.0
        error = np.max(np.abs(approx - mid_values[:, :n_main]) / scale, axis=1)
        bad = error > tolerance

        # Merge the midpoints into the grid; only halves of bad intervals stay suspect
        new_nodes, new_values, new_derivs, new_suspect = [nodes[0]], [values[0]], [derivs[0]], []
        m = 0
        for i in range(len(nodes) - 1):
            if suspect[i]:
                new_nodes.append(mids[m])
                new_values.append(mid_values[m])
                new_derivs.append(mid_derivs[m])
                new_suspect.extend([bad[m], bad[m]])
                m += 1
            else:
                new_suspect.append(False)
            new_nodes.append(nodes[i + 1])
            new_values.append(values[i + 1])
            new_derivs.append(derivs[i + 1])
        nodes = np.asarray(new_nodes)
        values, derivs = np.asarray(new_values), np.asarray(new_derivs)
        suspect = np.asarray(new_suspect, dtype=bool)

        if not bad.any():
            converged = True
            break

    if not converged:
        warnings.warn(
            f"{label}: interpolation tolerance {tolerance} not reached after "
            f"{max_refinements} refinements ({int(suspect.sum())} intervals left)",
            RuntimeWarning,
        )
    extra = {c: values[:, n_main + j] for j, c in enumerate(extra_columns)}
    return PredictionProfile(
        nodes,
        values[:, :n_main],
        derivs[:, :n_main],
        columns,
        extra=extra,
        converged=converged,
    )

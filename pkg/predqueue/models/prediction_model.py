"""Workload models: joint laws of (service time, predicted service time).

* `PredictionModel` wraps a raw joint density ``g(x, y)`` and a sampler. Every
  marginal, load and profile is computed by (nested) adaptive quadrature.
* `KernelPredictionModel` factors ``g(x, y) = f_s(x) h(y | x)`` into a
  `ServiceDistribution` and a `PredictionKernel`; everything becomes a single
  integral over x of closed-form kernel moments.
* `DiscreteModel` holds point masses (e.g. the two-type short/long example) and
  evaluates everything by summation.
* `ClassModel` is the priority-class system with a confusion matrix.

All models are immutable after construction and safe to share between threads
and processes. Samplers take an explicit `np.random.Generator`.

"""

__author__ = "Jonas Van Der Donckt, Jeroen Van Der Donckt"

import math
from dataclasses import replace
from typing import Callable, Dict, Optional, Sequence, Tuple, Union

import numpy as np

from ..utils.classes import FrozenClass
from ..utils.errors import DensityDomainError
from ..utils.quadrature import DEFAULT_SETTINGS, QuadratureSettings, quad, quad_vector
from .distributions import Deterministic, ServiceDistribution
from .kernels import PredictionKernel
from .profile import EXCESS_COLUMNS, LOAD_COLUMNS, PredictionProfile, build_profile

# Below this predicted density, conditional quantities are undefined
DENSITY_THRESHOLD = 1e-12
# Maximal probability mass the truncation bounds may cut off
TRUNCATION_MASS = 1e-6

Density = Callable[[float, float], float]
Sampler = Callable[[np.random.Generator, int], Tuple[np.ndarray, np.ndarray]]


class PredictionModel(FrozenClass):
    """A workload given by its joint density of service and predicted time.

    Parameters
    ----------
    density : Callable[[float, float], float]
        The joint density ``g(x, y)`` (x the service time, y the prediction).
    sampler : Callable[[np.random.Generator, int], Tuple[np.ndarray, np.ndarray]]
        Draws ``size`` i.i.d. ``(x, y)`` pairs with the given generator.
    support_hint : Tuple[float, float], optional
        The truncation bounds ``(x_max, y_max)`` of the improper integrals, by
        default ``(50, 50)``.
    name : str, optional
        The model name, by default "custom".
    service_pdf : Callable, optional
        A closed form of the service-time marginal ``f_s``, if known.
    predicted_pdf : Callable, optional
        A closed form of the predicted-time marginal ``f_p``, if known.
    check : bool, optional
        Whether to verify at construction that the truncation box holds all but
        ``1e-6`` of the probability mass, by default True.

    Raises
    ------
    ValueError
        Raised when the support hint is not positive or cuts off too much mass.

    Note
    ----
    The raw-density path nests quadratures and is slow for the SPRPT profile;
    prefer `KernelPredictionModel` whenever the density factors.

    """

    is_discrete = False
    is_exact = False

    def __init__(
        self,
        density: Density,
        sampler: Sampler,
        support_hint: Tuple[float, float] = (50.0, 50.0),
        name: str = "custom",
        service_pdf: Optional[Callable] = None,
        predicted_pdf: Optional[Callable] = None,
        check: bool = True,
    ):
        x_max, y_max = support_hint
        if not (x_max > 0 and y_max > 0):
            raise ValueError(f"support_hint must be positive, got {support_hint}")
        self.density = density
        self.sampler = sampler
        self.name = name
        self.x_max = float(x_max)
        self.y_max = float(y_max)
        self._service_pdf = service_pdf
        self._predicted_pdf = predicted_pdf
        # memo of profiles and moments; filled lazily, never reassigned
        self._cache: Dict = {}
        if check:
            self._check_truncation()
        self._freeze()

    # ------------------------------------------------------------------ helpers
    @property
    def support_hint(self) -> Tuple[float, float]:
        return self.x_max, self.y_max

    def resolve(self, settings: Optional[QuadratureSettings] = None) -> QuadratureSettings:
        """Fill in the model's truncation bounds where `settings` leaves them open."""
        settings = settings or DEFAULT_SETTINGS
        return replace(
            settings,
            x_max=settings.x_max or self.x_max,
            y_max=settings.y_max or self.y_max,
        )

    def _memo(self, key, func):
        if key not in self._cache:
            self._cache[key] = func()
        return self._cache[key]

    def _check_truncation(self):
        s = self.resolve(DEFAULT_SETTINGS.loosened(10))
        mass = quad(
            lambda x: quad(lambda y: self.density(x, y), 0.0, s.y_max, s)[0],
            0.0,
            s.x_max,
            s,
        )[0]
        if 1.0 - mass > TRUNCATION_MASS:
            raise ValueError(
                f"support hint {self.support_hint} cuts off {1.0 - mass:.3g} "
                f"probability mass (> {TRUNCATION_MASS})"
            )

    def _density_moments(self, y: float, s: QuadratureSettings) -> np.ndarray:
        """``[∫ g(x,y) dx, ∫ x g(x,y) dx, ∫ x^2 g(x,y) dx]``."""
        return quad_vector(
            lambda x: self.density(x, y) * np.array([1.0, x, x * x]),
            0.0,
            s.x_max,
            s,
        )[0]

    # -------------------------------------------------------------- marginals
    def service_density(self, x: float, settings: Optional[QuadratureSettings] = None) -> float:
        """Return ``f_s(x) = ∫ g(x, y) dy``."""
        if self._service_pdf is not None:
            return float(self._service_pdf(x))
        s = self.resolve(settings)
        return quad(lambda y: self.density(x, y), 0.0, s.y_max, s)[0]

    def predicted_density(self, y: float, settings: Optional[QuadratureSettings] = None) -> float:
        """Return ``f_p(y) = ∫ g(x, y) dx``."""
        if self._predicted_pdf is not None:
            return float(self._predicted_pdf(y))
        s = self.resolve(settings)
        return quad(lambda x: self.density(x, y), 0.0, s.x_max, s)[0]

    def service_moment(self, k: int) -> float:
        """Return ``E[X^k]`` (over the truncation box)."""
        s = self.resolve()
        return self._memo(
            ("service_moment", k),
            lambda: quad(
                lambda x: x**k * self.service_density(x, s.loosened(10)), 0.0, s.x_max, s
            )[0],
        )

    def predicted_moment(self, k: int) -> float:
        """Return ``E[Y^k]`` (over the truncation box)."""
        s = self.resolve()
        return self._memo(
            ("predicted_moment", k),
            lambda: quad(
                lambda y: y**k * self.predicted_density(y, s.loosened(10)), 0.0, s.y_max, s
            )[0],
        )

    @property
    def mean_service(self) -> float:
        return self.service_moment(1)

    @property
    def second_moment_service(self) -> float:
        return self.service_moment(2)

    # ------------------------------------------------------------------ loads
    def load_below_service(
        self, lam: float, x: float, settings: Optional[QuadratureSettings] = None
    ) -> float:
        """Return ``ρ_x = λ ∫_0^x t f_s(t) dt``."""
        s = self.resolve(settings)
        upper = min(x, s.x_max)
        return lam * quad(
            lambda t: t * self.service_density(t, s.loosened(10)), 0.0, upper, s
        )[0]

    def load_below_predicted(
        self, lam: float, y: float, settings: Optional[QuadratureSettings] = None
    ) -> float:
        """Return ``ρ'_y = λ ∫_0^y ∫ x g(x, t) dx dt``."""
        s = self.resolve(settings)
        inner = s.loosened(10)
        return lam * quad(
            lambda t: self._density_moments(t, inner)[1], 0.0, min(y, s.y_max), s
        )[0]

    def conditional_mean_service(
        self, y: float, settings: Optional[QuadratureSettings] = None
    ) -> float:
        """Return ``E[X | Y = y]``.

        Raises
        ------
        DensityDomainError
            Raised when ``f_p(y)`` is below the density threshold.

        """
        s = self.resolve(settings)
        m = self._density_moments(y, s)
        den = self._predicted_pdf(y) if self._predicted_pdf is not None else m[0]
        if not den > DENSITY_THRESHOLD:
            raise DensityDomainError(f"f_p({y}) = {den} is below {DENSITY_THRESHOLD}")
        return float(m[1] / den)

    def conditional_expectation(
        self,
        func: Callable[[float], float],
        y: float,
        settings: Optional[QuadratureSettings] = None,
        points: Optional[Sequence[float]] = None,
    ) -> float:
        """Return ``E[func(X) | Y = y]``.

        Parameters
        ----------
        func : Callable[[float], float]
            The function of the service time.
        y : float
            The prediction.
        settings : QuadratureSettings, optional
            The quadrature settings.
        points : Sequence[float], optional
            Service times where `func` kinks.

        Raises
        ------
        DensityDomainError
            Raised when ``f_p(y)`` is below the density threshold.

        """
        s = self.resolve(settings)
        den = self.predicted_density(y, s)
        if not den > DENSITY_THRESHOLD:
            raise DensityDomainError(f"f_p({y}) = {den} is below {DENSITY_THRESHOLD}")
        num = quad(lambda x: self.density(x, y) * func(x), 0.0, s.x_max, s, points)[0]
        return float(num / den)

    def joint_expectation(
        self,
        func: Callable[[float, float], float],
        settings: Optional[QuadratureSettings] = None,
        inner_points: Optional[Callable[[float], Sequence[float]]] = None,
    ) -> Tuple[float, float]:
        """Return ``E[func(X, Y)]`` and its error estimate.

        Parameters
        ----------
        func : Callable[[float, float], float]
            The function of ``(x, y)``.
        settings : QuadratureSettings, optional
            The quadrature settings.
        inner_points : Callable[[float], Sequence[float]], optional
            Gives, for a service time x, the predictions where ``func(x, .)`` kinks.

        """
        s = self.resolve(settings)
        inner = s.loosened(10)

        def _outer(x: float) -> float:
            pts = inner_points(x) if inner_points is not None else None
            return quad(
                lambda y: self.density(x, y) * func(x, y), 0.0, s.y_max, inner, pts
            )[0]

        return quad(_outer, 0.0, s.x_max, s)

    def mean_order(self, grid: Optional[Sequence[float]] = None) -> int:
        """Tell how ``E[X | Y = y]`` is ordered in y on a grid.

        Returns
        -------
        int
            1 if nondecreasing, -1 if nonincreasing, 0 otherwise. Ordering by
            prediction is ordering by expected size exactly when this is 1.

        """
        if grid is None:
            mean = self.mean_service
            grid = np.geomspace(1e-2 * mean, min(20 * mean, self.y_max), 30)
        means = np.array([self.conditional_mean_service(y) for y in grid])
        diffs = np.diff(means)
        slack = 1e-9 * np.max(np.abs(means))
        if np.all(diffs >= -slack):
            return 1
        if np.all(diffs <= slack):
            return -1
        return 0

    # --------------------------------------------------------------- sampling
    def sample(self, rng: np.random.Generator, size: int) -> Tuple[np.ndarray, np.ndarray]:
        """Draw `size` i.i.d. ``(service, predicted)`` pairs."""
        x, y = self.sampler(rng, size)
        return np.asarray(x, dtype=float), np.asarray(y, dtype=float)

    def sample_jobs(self, rng: np.random.Generator, size: int) -> Dict[str, np.ndarray]:
        """Draw the attributes of `size` jobs, as used by the simulator."""
        x, y = self.sample(rng, size)
        return {"service": x, "predicted": y}

    # --------------------------------------------------------------- profiles
    def profile(
        self, group: str = "load", settings: Optional[QuadratureSettings] = None
    ) -> PredictionProfile:
        """Return the (memoized) interpolated profile of a group of integrals.

        Parameters
        ----------
        group : str, optional
            ``"load"`` for the predicted CDF ``F_p``, the loads
            ``E[X^k 1{Y <= y}]`` (k = 1, 2) and ``E[Y^2 1{Y <= y}]``; ``"excess"``
            for the under-prediction moments ``E[((X + q - Y)^+)^k 1{Y > q}]``
            (k = 0, 1, 2), by default "load".
        settings : QuadratureSettings, optional
            The quadrature settings.

        """
        if group not in ("load", "excess"):
            raise ValueError(f"unknown profile group {group!r}")
        s = self.resolve(settings)

        def _build() -> PredictionProfile:
            if group == "load":
                return build_profile(
                    self._load_compute(s),
                    s.y_max,
                    LOAD_COLUMNS,
                    s.interpolation_tol,
                    extra_columns=("conditional_mean",),
                    label=f"{self.name} load profile",
                )
            return build_profile(
                self._excess_compute(s),
                s.y_max,
                EXCESS_COLUMNS,
                s.interpolation_tol,
                label=f"{self.name} excess profile",
            )

        return self._memo(("profile", group, s), _build)

    def spept_key(self, y: np.ndarray) -> np.ndarray:
        """Return the SPEPT priority ``E[X | Y = y]`` (interpolated) for predictions."""
        return np.asarray(self.profile("load").extra("conditional_mean", y))

    def _load_compute(self, s: QuadratureSettings):
        inner = s.loosened(10)

        def _integrand(t: float) -> np.ndarray:
            m = self._density_moments(t, inner)
            return np.array([m[0], m[1], m[2], t * t * m[0]])

        def compute(nodes: np.ndarray):
            values = np.zeros((len(nodes), 5))
            derivs = np.zeros((len(nodes), 5))
            acc, prev = np.zeros(4), 0.0
            for i, y in enumerate(nodes):
                acc = acc + quad_vector(_integrand, prev, y, s)[0]
                prev = y
                m = self._density_moments(y, inner)
                values[i, :4] = acc
                derivs[i, :4] = [m[0], m[1], m[2], y * y * m[0]]
                values[i, 4] = m[1] / m[0] if m[0] > DENSITY_THRESHOLD else np.nan
            return values, derivs

        return compute

    def _excess_compute(self, s: QuadratureSettings):
        inner = s.loosened(10)

        def _at(q: float) -> Tuple[np.ndarray, np.ndarray]:
            def _over_t(t: float) -> np.ndarray:
                return quad_vector(
                    lambda x: self.density(x, t)
                    * np.array([1.0, x + q - t, (x + q - t) ** 2]),
                    max(t - q, 0.0),
                    s.x_max,
                    inner,
                )[0]

            values = quad_vector(_over_t, q, s.y_max, inner)[0]
            u = quad(
                lambda x: self.density(x, x + q), 0.0, max(s.y_max - q, 0.0), inner
            )[0]
            m = self._density_moments(q, inner)
            derivs = np.array(
                [u - m[0], values[0] - m[1], 2 * values[1] - m[2]]
            )
            return values, derivs

        def compute(nodes: np.ndarray):
            out = [_at(q) for q in nodes]
            return (
                np.array([o[0] for o in out]).reshape(len(nodes), 3),
                np.array([o[1] for o in out]).reshape(len(nodes), 3),
            )

        return compute

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(name={self.name!r}, support_hint={self.support_hint})"


class KernelPredictionModel(PredictionModel):
    """A workload ``g(x, y) = f_s(x) h(y | x)`` from a base distribution and a kernel.

    Parameters
    ----------
    base : ServiceDistribution
        The (continuous) service-time distribution.
    kernel : PredictionKernel
        The conditional law of the prediction.
    name : str, optional
        The model name, by default the kernel name.
    support_hint : Tuple[float, float], optional
        The truncation bounds ``(x_max, y_max)``. By default x_max is 50 mean
        service times (more for heavy tails) and y_max is the smallest
        ``50 E[X] 2^k`` leaving a predicted tail mass of at most ``1e-6``.
    predicted_pdf : Callable, optional
        A closed form of ``f_p``, if known.
    check : bool, optional
        Whether to verify the truncation mass, by default True.

    """

    def __init__(
        self,
        base: ServiceDistribution,
        kernel: PredictionKernel,
        name: Optional[str] = None,
        support_hint: Optional[Tuple[float, float]] = None,
        predicted_pdf: Optional[Callable] = None,
        check: bool = True,
    ):
        if base.is_discrete:
            raise TypeError(
                "a service-time distribution without density needs a DiscreteModel"
            )
        self.base = base
        self.kernel = kernel
        self.is_exact = kernel.is_exact
        if support_hint is None:
            x_max = base.truncation()
            support_hint = (x_max, self._default_y_max(x_max))
        super().__init__(
            density=self._joint_density,
            sampler=self._sample_pairs,
            support_hint=support_hint,
            name=name or kernel.name,
            service_pdf=base.pdf,
            predicted_pdf=predicted_pdf,
            check=check,
        )

    def _joint_density(self, x: float, y: float) -> float:
        return float(self.base.pdf(x) * self.kernel.pdf(y, x))

    def _sample_pairs(self, rng: np.random.Generator, size: int):
        x = self.base.sample(rng, size)
        return x, self.kernel.sample(rng, x)

    def _x_points(self, y: float) -> Tuple[float, ...]:
        return tuple(self.kernel.x_breakpoints(y)) + tuple(self.base.breakpoints())

    def _predicted_tail(self, y: float, x_max: float) -> float:
        """``P(Y > y)``, including the service-time tail beyond x_max."""
        if self.kernel.is_exact:
            return float(self.base.sf(y))
        s = DEFAULT_SETTINGS.loosened(10)
        inside = quad(
            lambda x: self.base.pdf(x) * (1.0 - self.kernel.cdf(y, x)),
            0.0,
            x_max,
            s,
            points=self._x_points(y),
        )[0]
        return inside + float(self.base.sf(x_max))

    def _default_y_max(self, x_max: float) -> float:
        if self.kernel.is_exact:
            return x_max
        y_max = 50.0 * self.base.mean
        while self._predicted_tail(y_max, x_max) > TRUNCATION_MASS:
            y_max *= 2
            if y_max > 1e9 * self.base.mean:
                raise ValueError("the predicted-time tail is too heavy to truncate")
        return y_max

    def _check_truncation(self):
        cut_x = float(self.base.sf(self.x_max))
        cut_y = self._predicted_tail(self.y_max, self.x_max)
        if max(cut_x, cut_y) > TRUNCATION_MASS:
            raise ValueError(
                f"support hint {self.support_hint} cuts off {max(cut_x, cut_y):.3g} "
                f"probability mass (> {TRUNCATION_MASS})"
            )

    # -------------------------------------------------------------- marginals
    def service_density(self, x: float, settings=None) -> float:
        return float(self.base.pdf(x))

    def predicted_density(self, y: float, settings=None) -> float:
        if self._predicted_pdf is not None:
            return float(self._predicted_pdf(y))
        if self.kernel.is_exact:
            return float(self.base.pdf(y))
        s = self.resolve(settings)
        return quad(
            lambda x: self._joint_density(x, y), 0.0, s.x_max, s, points=self._x_points(y)
        )[0]

    def service_moment(self, k: int) -> float:
        return self.base.moment(k)

    def predicted_moment(self, k: int) -> float:
        if self.kernel.is_exact:
            return self.base.moment(k)
        s = self.resolve()
        return self._memo(
            ("predicted_moment", k),
            lambda: quad(
                lambda x: self.base.pdf(x) * self.kernel.truncated_moment(k, np.inf, x),
                0.0,
                s.x_max,
                s,
            )[0],
        )

    # ------------------------------------------------------------------ loads
    def load_below_service(self, lam: float, x: float, settings=None) -> float:
        return float(lam * self.base.partial_moment(1, x))

    def load_below_predicted(self, lam: float, y: float, settings=None) -> float:
        if self.kernel.is_exact:
            return float(lam * self.base.partial_moment(1, y))
        s = self.resolve(settings)
        if y <= 0:
            return 0.0
        return lam * quad(
            lambda x: x * self.base.pdf(x) * self.kernel.cdf(y, x),
            0.0,
            s.x_max,
            s,
            points=self._x_points(y) if np.isfinite(y) else None,
        )[0]

    def conditional_mean_service(self, y: float, settings=None) -> float:
        if self.kernel.is_exact:
            if not self.base.pdf(y) > DENSITY_THRESHOLD:
                raise DensityDomainError(f"f_p({y}) is below {DENSITY_THRESHOLD}")
            return float(y)
        s = self.resolve(settings)
        pts = self._x_points(y)
        num = quad(lambda x: x * self._joint_density(x, y), 0.0, s.x_max, s, points=pts)[0]
        den = self.predicted_density(y, s)
        if not den > DENSITY_THRESHOLD:
            raise DensityDomainError(f"f_p({y}) = {den} is below {DENSITY_THRESHOLD}")
        return float(num / den)

    def conditional_expectation(self, func, y: float, settings=None, points=None) -> float:
        if self.kernel.is_exact:
            if not self.base.pdf(y) > DENSITY_THRESHOLD:
                raise DensityDomainError(f"f_p({y}) is below {DENSITY_THRESHOLD}")
            return float(func(y))
        s = self.resolve(settings)
        den = self.predicted_density(y, s)
        if not den > DENSITY_THRESHOLD:
            raise DensityDomainError(f"f_p({y}) = {den} is below {DENSITY_THRESHOLD}")
        pts = self._x_points(y) + tuple(points or ())
        num = quad(lambda x: self._joint_density(x, y) * func(x), 0.0, s.x_max, s, pts)[0]
        return float(num / den)

    def joint_expectation(self, func, settings=None, inner_points=None):
        s = self.resolve(settings)
        pts = tuple(self.base.breakpoints()) or None
        if self.kernel.is_exact:
            return quad(lambda x: self.base.pdf(x) * func(x, x), 0.0, s.x_max, s, pts)
        inner = s.loosened(10)

        def _outer(x: float) -> float:
            lo, hi = self.kernel.y_support(x)
            return quad(
                lambda y: self.kernel.pdf(y, x) * func(x, y),
                lo,
                min(hi, s.y_max),
                inner,
                inner_points(x) if inner_points is not None else None,
            )[0]

        return quad(lambda x: self.base.pdf(x) * _outer(x), 0.0, s.x_max, s, pts)

    def spept_key(self, y: np.ndarray) -> np.ndarray:
        if self.kernel.is_exact:
            return np.asarray(y, dtype=float)
        return super().spept_key(y)

    # --------------------------------------------------------------- profiles
    def _load_compute(self, s: QuadratureSettings):
        base, kernel = self.base, self.kernel

        if kernel.is_exact:

            def compute_exact(nodes: np.ndarray):
                f = base.pdf(nodes)
                values = np.column_stack(
                    [
                        base.cdf(nodes),
                        base.partial_moment(1, nodes),
                        base.partial_moment(2, nodes),
                        base.partial_moment(2, nodes),
                        nodes,
                    ]
                )
                with np.errstate(invalid="ignore"):
                    derivs = np.column_stack(
                        [f, nodes * f, nodes**2 * f, nodes**2 * f, np.ones_like(nodes)]
                    )
                return values, derivs

            return compute_exact

        def _at(y: float) -> Tuple[np.ndarray, np.ndarray]:
            if y == 0:
                # continuous predictions put no mass at 0; densities may blow up
                return np.array([0.0, 0.0, 0.0, 0.0, np.nan]), np.full(5, np.nan)

            def _integrand(x: float) -> np.ndarray:
                cdf = kernel.truncated_moment(0, y, x)
                dens = kernel.pdf(y, x)
                return base.pdf(x) * np.array(
                    [
                        cdf,
                        x * cdf,
                        x * x * cdf,
                        kernel.truncated_moment(2, y, x),
                        dens,
                        x * dens,
                        x * x * dens,
                    ],
                    dtype=float,
                )

            v = quad_vector(_integrand, 0.0, s.x_max, s, points=self._x_points(y))[0]
            cond = v[5] / v[4] if v[4] > DENSITY_THRESHOLD else np.nan
            values = np.array([v[0], v[1], v[2], v[3], cond])
            derivs = np.array([v[4], v[5], v[6], y * y * v[4], np.nan])
            return values, derivs

        return _stacked(_at, 5)

    def _excess_compute(self, s: QuadratureSettings):
        base, kernel = self.base, self.kernel

        if kernel.is_exact:

            def compute_exact(nodes: np.ndarray):
                f, sf = base.pdf(nodes), base.sf(nodes)
                values = np.column_stack([sf, nodes * sf, nodes**2 * sf])
                with np.errstate(invalid="ignore"):
                    derivs = np.column_stack(
                        [-f, sf - nodes * f, 2 * nodes * sf - nodes**2 * f]
                    )
                return values, derivs

            return compute_exact

        def _at(q: float) -> Tuple[np.ndarray, np.ndarray]:
            pts = tuple(kernel.excess_breakpoints(q)) + self._x_points(q)

            def _values(x: float) -> np.ndarray:
                return base.pdf(x) * np.array(
                    [kernel.excess_moment(k, q, x) for k in range(3)], dtype=float
                )

            if q == 0:
                v = quad_vector(_values, 0.0, s.x_max, s, points=pts)[0]
                return v, np.full(3, np.nan)

            def _integrand(x: float) -> np.ndarray:
                dens = kernel.pdf(q, x)
                return np.concatenate(
                    [
                        _values(x),
                        base.pdf(x)
                        * np.array(
                            [kernel.pdf(x + q, x), dens, x * dens, x * x * dens],
                            dtype=float,
                        ),
                    ]
                )

            v = quad_vector(_integrand, 0.0, s.x_max, s, points=pts)[0]
            derivs = np.array([v[3] - v[4], v[0] - v[5], 2 * v[1] - v[6]])
            return v[:3], derivs

        return _stacked(_at, 3)

    def __repr__(self) -> str:
        return (
            f"{self.__class__.__name__}(name={self.name!r}, base={self.base!r}, "
            f"kernel={self.kernel!r})"
        )


def _stacked(at: Callable[[float], Tuple[np.ndarray, np.ndarray]], width: int):
    """Turn a per-node evaluator into a vectorized profile compute function."""

    def compute(nodes: np.ndarray):
        values = np.zeros((len(nodes), width))
        derivs = np.zeros((len(nodes), width))
        for i, y in enumerate(nodes):
            values[i], derivs[i] = at(float(y))
        return values, derivs

    return compute


class DiscreteModel(FrozenClass):
    """A workload whose (service, prediction) pairs take finitely many values.

    Parameters
    ----------
    atoms : Sequence[Tuple[float, float, float]]
        The ``(service, predicted, probability)`` triples; probabilities sum to 1.
    name : str, optional
        The model name, by default "discrete".

    Note
    ----
    Everything is computed by summation. Jobs with equal keys are served in
    arrival order (or uniformly at random in a finite batch).

    """

    is_discrete = True
    is_exact = False

    def __init__(self, atoms: Sequence[Tuple[float, float, float]], name: str = "discrete"):
        atoms = np.asarray(atoms, dtype=float)
        if atoms.ndim != 2 or atoms.shape[1] != 3 or not len(atoms):
            raise ValueError("atoms must be a non-empty sequence of (x, y, p) triples")
        keep = atoms[:, 2] > 0
        self.service, self.predicted, self.probability = atoms[keep].T.copy()
        if np.any(self.service <= 0) or np.any(self.predicted < 0):
            raise ValueError("service times must be > 0 and predictions >= 0")
        if abs(self.probability.sum() - 1.0) > 1e-12:
            raise ValueError("atom probabilities must sum to 1")
        self.name = name
        self.is_exact = bool(np.all(self.service == self.predicted))
        # the priority classes: every value taken by X or Y, in increasing order
        self.levels = np.unique(np.concatenate([self.service, self.predicted]))
        self._freeze()

    @property
    def mean_service(self) -> float:
        return float(np.sum(self.probability * self.service))

    @property
    def second_moment_service(self) -> float:
        return float(np.sum(self.probability * self.service**2))

    def service_moment(self, k: int) -> float:
        return float(np.sum(self.probability * self.service**k))

    def predicted_moment(self, k: int) -> float:
        return float(np.sum(self.probability * self.predicted**k))

    def service_pmf(self) -> Tuple[np.ndarray, np.ndarray]:
        """Return the distinct service times and their probabilities."""
        return _aggregate(self.service, self.probability)

    def predicted_pmf(self) -> Tuple[np.ndarray, np.ndarray]:
        """Return the distinct predictions and their probabilities."""
        return _aggregate(self.predicted, self.probability)

    def load_below_service(self, lam: float, x: float, settings=None) -> float:
        return float(lam * np.sum(self.probability * self.service * (self.service <= x)))

    def load_below_predicted(self, lam: float, y: float, settings=None) -> float:
        return float(
            lam * np.sum(self.probability * self.service * (self.predicted <= y))
        )

    def conditional_mean_service(self, y: float, settings=None) -> float:
        mask = self.predicted == y
        mass = np.sum(self.probability[mask])
        if not mass > 0:
            raise DensityDomainError(f"the prediction {y} has probability 0")
        return float(np.sum(self.probability[mask] * self.service[mask]) / mass)

    def mean_order(self, grid=None) -> int:
        values, _ = self.predicted_pmf()
        means = np.array([self.conditional_mean_service(v) for v in values])
        if np.all(np.diff(means) >= 0):
            return 1
        if np.all(np.diff(means) <= 0):
            return -1
        return 0

    def sample(self, rng: np.random.Generator, size: int) -> Tuple[np.ndarray, np.ndarray]:
        idx = rng.choice(len(self.probability), size=size, p=self.probability)
        return self.service[idx], self.predicted[idx]

    def sample_jobs(self, rng: np.random.Generator, size: int) -> Dict[str, np.ndarray]:
        x, y = self.sample(rng, size)
        return {
            "service": x,
            "predicted": y,
            "class_label": np.searchsorted(self.levels, x),
            "predicted_class": np.searchsorted(self.levels, y),
        }

    def spept_key(self, y: np.ndarray) -> np.ndarray:
        values, _ = self.predicted_pmf()
        means = np.array([self.conditional_mean_service(v) for v in values])
        return means[np.searchsorted(values, np.asarray(y, dtype=float))]

    def to_class_model(self, lam: float, by: str = "predicted") -> "ClassModel":
        """Return the equivalent priority-class system.

        Class c holds the jobs of service time ``levels[c]``; lower classes have
        priority. With ``by="service"`` jobs are prioritized on their true size
        (SJF), with ``by="predicted"`` on their prediction (SPJF).

        Parameters
        ----------
        lam : float
            The total arrival rate.
        by : str, optional
            ``"service"`` or ``"predicted"``, by default "predicted".

        """
        if by not in ("service", "predicted"):
            raise ValueError(f"by must be 'service' or 'predicted', got {by!r}")
        k = len(self.levels)
        true_cls = np.searchsorted(self.levels, self.service)
        pred_cls = np.searchsorted(self.levels, self.predicted)
        class_prob = np.bincount(true_cls, weights=self.probability, minlength=k)
        confusion = np.eye(k)
        if by == "predicted":
            joint = np.zeros((k, k))
            np.add.at(joint, (true_cls, pred_cls), self.probability)
            for c in range(k):
                if class_prob[c] > 0:
                    confusion[c] = joint[c] / class_prob[c]
        return ClassModel(
            arrival_rates=lam * class_prob,
            service_dists=[Deterministic(v) for v in self.levels],
            confusion=confusion,
            name=f"{self.name}_{by}_classes",
        )

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(name={self.name!r}, atoms={len(self.probability)})"


def _aggregate(values: np.ndarray, probs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    unique, inverse = np.unique(values, return_inverse=True)
    return unique, np.bincount(inverse, weights=probs, minlength=len(unique))


class ClassModel(FrozenClass):
    """Priority classes with Poisson arrivals and predicted class labels.

    Parameters
    ----------
    arrival_rates : Sequence[float]
        The arrival rate ``λ_i`` of every (true) class; class 0 has top priority.
    service_dists : Sequence[ServiceDistribution]
        The service-time distribution ``S_i`` of every class.
    confusion : np.ndarray
        Row-stochastic ``k x k`` matrix; ``m_ij`` is the probability that a job
        of true class i is predicted to be of class j.
    name : str, optional
        The model name, by default "classes".

    Raises
    ------
    ValueError
        Raised when the dimensions disagree, a rate is negative, or `confusion`
        is not row-stochastic (within 1e-12).

    """

    is_discrete = True
    is_exact = False

    def __init__(
        self,
        arrival_rates: Sequence[float],
        service_dists: Sequence[ServiceDistribution],
        confusion: Union[np.ndarray, Sequence[Sequence[float]]],
        name: str = "classes",
    ):
        rates = np.asarray(arrival_rates, dtype=float)
        confusion = np.asarray(confusion, dtype=float)
        k = len(rates)
        if rates.ndim != 1 or not k or len(service_dists) != k:
            raise ValueError("need one service distribution per arrival rate")
        if confusion.shape != (k, k):
            raise ValueError(f"confusion must be {k}x{k}, got {confusion.shape}")
        if np.any(rates < 0) or not rates.sum() > 0:
            raise ValueError("arrival rates must be >= 0 with a positive sum")
        if np.any(confusion < 0) or np.any(confusion > 1):
            raise ValueError("confusion entries must lie in [0, 1]")
        if np.any(np.abs(confusion.sum(axis=1) - 1.0) > 1e-12):
            raise ValueError("every row of the confusion matrix must sum to 1")
        self.arrival_rates = rates
        self.service_dists = tuple(service_dists)
        self.confusion = confusion
        self.name = name
        self.means = np.array([d.mean for d in self.service_dists])
        self.second_moments = np.array([d.second_moment for d in self.service_dists])
        self._freeze()

    @property
    def n_classes(self) -> int:
        return len(self.arrival_rates)

    @property
    def total_rate(self) -> float:
        return float(self.arrival_rates.sum())

    @property
    def loads(self) -> np.ndarray:
        """``ρ_i = λ_i E[S_i]``."""
        return self.arrival_rates * self.means

    @property
    def predicted_rates(self) -> np.ndarray:
        """``λ'_i = Σ_j λ_j m_ji``."""
        return self.arrival_rates @ self.confusion

    @property
    def predicted_loads(self) -> np.ndarray:
        """``ρ'_i = Σ_j λ_j E[S_j] m_ji``."""
        return (self.arrival_rates * self.means) @ self.confusion

    @property
    def load(self) -> float:
        return float(self.loads.sum())

    @property
    def mean_service(self) -> float:
        return float(self.loads.sum() / self.total_rate)

    @property
    def second_moment_service(self) -> float:
        return float(np.sum(self.arrival_rates * self.second_moments) / self.total_rate)

    def sample_jobs(self, rng: np.random.Generator, size: int) -> Dict[str, np.ndarray]:
        """Draw class labels, predicted labels and service times of `size` jobs.

        The predicted time of a job equals its service time; class-based policies
        only look at the labels.

        """
        k = self.n_classes
        cls = rng.choice(k, size=size, p=self.arrival_rates / self.total_rate)
        u = rng.random(size)
        cum = np.cumsum(self.confusion, axis=1)
        pred = np.minimum((u[:, None] > cum[cls]).sum(axis=1), k - 1)
        service = np.empty(size)
        for c in range(k):
            mask = cls == c
            if mask.any():
                service[mask] = self.service_dists[c].sample(rng, int(mask.sum()))
        return {
            "service": service,
            "predicted": service.copy(),
            "class_label": cls,
            "predicted_class": pred,
        }

    def __repr__(self) -> str:
        return (
            f"{self.__class__.__name__}(name={self.name!r}, "
            f"rates={self.arrival_rates.tolist()})"
        )


def total_rate_matches(model, lam: float) -> bool:
    """Whether `lam` is consistent with a class model's own arrival rates."""
    if isinstance(model, ClassModel):
        return math.isclose(model.total_rate, lam, rel_tol=1e-9)
    return True

"""Point estimation of the IXGD parameter.

Five estimators share :func:`ixgd.optimize.minimize_positive`:

* ``MLE``  - maximum likelihood,
* ``LSE``  - least squares on plotting positions ``i/(n+1)``,
* ``WLSE`` - weighted least squares with weights ``(n+1)^2 (n+2) / (i (n-i+1))``,
* ``CME``  - Cramer-von Mises, plotting positions ``(2i-1)/(2n)``,
* ``MPSE`` - maximum product of spacings.

Each fit reports the residual of its first-order condition, computed from
the analytic score or from :func:`eta1` (the derivative of the CDF in theta).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .distribution import Ixgd, check_theta
from .errors import DataError, EstimationError
from .optimize import minimize_positive

__all__ = [
    "Method",
    "Sample",
    "EstimateResult",
    "Spacings",
    "as_sample",
    "log_likelihood",
    "score",
    "eta1",
    "spacings",
    "fit",
    "fit_all",
    "fit_mle",
    "fit_lse",
    "fit_wlse",
    "fit_cme",
    "fit_mpse",
    "SPACING_FLOOR",
]

#: Zero spacings (ties) are raised to this value before taking logs.
SPACING_FLOOR = 1e-12


class Method(str, enum.Enum):
    MLE = "MLE"
    LSE = "LSE"
    WLSE = "WLSE"
    CME = "CME"
    MPSE = "MPSE"

    def __str__(self):
        return self.value


class Sample:
    """Validated vector of strictly positive, finite observations.

    >>> Sample([3.0, 1.0, 2.0]).sorted
    array([1., 2., 3.])
    """

    __slots__ = ("values", "sorted", "n")

    def __init__(self, values):
        arr = np.array(values, dtype=float).ravel()
        if arr.size < 2:
            raise DataError(f"need at least 2 observations, got {arr.size}")
        if not np.isfinite(arr).all():
            raise DataError("observations must be finite")
        if (arr <= 0).any():
            raise DataError("observations must be strictly positive")
        arr.setflags(write=False)
        srt = np.sort(arr)
        srt.setflags(write=False)
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "sorted", srt)
        object.__setattr__(self, "n", int(arr.size))

    def __setattr__(self, name, value):
        raise AttributeError("Sample is immutable")

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"Sample(n={self.n})"

    @property
    def n_ties(self) -> int:
        """Number of sorted neighbours that are exactly equal."""
        return int(np.count_nonzero(np.diff(self.sorted) == 0))

    @property
    def all_tied(self) -> bool:
        return self.sorted[0] == self.sorted[-1]


def as_sample(data) -> Sample:
    return data if isinstance(data, Sample) else Sample(data)


@dataclass
class EstimateResult:
    method: Method
    theta_hat: float
    objective_at_opt: float
    iterations: int
    converged: bool
    residual: float = math.nan
    warnings: list[str] = field(default_factory=list)
    model: str = "IXGD"

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "method": str(self.method),
            "theta_hat": self.theta_hat,
            "objective_at_opt": self.objective_at_opt,
            "iterations": self.iterations,
            "converged": self.converged,
            "residual": self.residual,
            "warnings": list(self.warnings),
        }


@dataclass(frozen=True)
class Spacings:
    d: np.ndarray
    ties: int = 0

    @property
    def has_ties(self) -> bool:
        return self.ties > 0


# ---------------------------------------------------------------------------
# analytic kernels


def log_likelihood(theta, data) -> float:
    """IXGD log-likelihood.

    ``2n ln(theta) - n ln(1+theta) - 2 sum ln x + sum ln(1 + theta/(2x^2)) - theta sum 1/x``
    """
    t = check_theta(theta)
    x = as_sample(data).values
    n = x.size
    return float(
        2 * n * math.log(t)
        - n * math.log1p(t)
        - 2.0 * np.sum(np.log(x))
        + np.sum(np.log1p(t / (2.0 * x * x)))
        - t * np.sum(1.0 / x)
    )


def score(theta, data) -> float:
    """Derivative of :func:`log_likelihood` with respect to theta."""
    t = check_theta(theta)
    x = as_sample(data).values
    n = x.size
    return float(np.sum(1.0 / (2.0 * x * x + t)) + 2 * n / t - n / (1.0 + t) - np.sum(1.0 / x))


def eta1(theta, x):
    """Partial derivative of the IXGD CDF with respect to theta.

    Always non-positive: larger theta moves mass toward the origin.
    """
    t = check_theta(theta)
    x_arr = np.asarray(x, dtype=float)
    u = t / x_arr
    # -theta e^{-theta/x} / (2 x^3 (1+theta)^2) * (4x^2 + 2 theta x^2 + theta x + theta + theta^2),
    # rewritten with u = theta/x so large u does not overflow before exp(-u) kills it.
    poly = (4.0 + 2.0 * t) + u + u * u * (1.0 + t) / t
    out = -u * np.exp(-np.minimum(u, 1e3)) * poly / (2.0 * (1.0 + t) ** 2)
    out = np.where(u > 1e3, -0.0, out)
    return float(out) if np.ndim(x) == 0 else out


def spacings(theta, data) -> Spacings:
    """First differences of ``[0, F(x_(1)), ..., F(x_(n)), 1]``."""
    if isinstance(data, Sample):
        x = data.sorted
    else:
        x = np.sort(np.asarray(data, dtype=float).ravel())
        if x.size < 1 or not np.isfinite(x).all() or (x <= 0).any():
            raise DataError("spacings need at least one finite positive observation")
    cdf = Ixgd(theta).cdf(x)
    d = np.diff(np.concatenate(([0.0], cdf, [1.0])))
    d = np.maximum(d, 0.0)
    return Spacings(d=d, ties=int(np.count_nonzero(d == 0.0)))


# ---------------------------------------------------------------------------
# objectives and first-order residuals


def _plotting_positions(method: Method, n: int):
    i = np.arange(1, n + 1, dtype=float)
    if method is Method.CME:
        return (2.0 * i - 1.0) / (2.0 * n), np.ones(n)
    target = i / (n + 1.0)
    if method is Method.WLSE:
        return target, (n + 1.0) ** 2 * (n + 2.0) / (i * (n - i + 1.0))
    return target, np.ones(n)


def _distance_problem(method: Method, s: Sample):
    x = s.sorted
    n = s.n
    target, weight = _plotting_positions(method, n)
    offset = 1.0 / (12.0 * n) if method is Method.CME else 0.0

    def objective(theta):
        resid = Ixgd(theta).cdf(x) - target
        return offset + float(np.sum(weight * resid * resid))

    def estimating_equation(theta):
        resid = Ixgd(theta).cdf(x) - target
        return float(np.sum(weight * resid * eta1(theta, x)))

    def gradient(theta):
        return 2.0 * estimating_equation(theta)

    return objective, gradient, estimating_equation


def _mps_problem(s: Sample):
    x = s.sorted
    n = s.n

    def objective(theta):
        """Negative mean log-spacing."""
        d = np.maximum(spacings(theta, s).d, SPACING_FLOOR)
        return -float(np.mean(np.log(d)))

    def h_gradient(theta):
        """Derivative of the mean log-spacing (clamped spacings contribute 0)."""
        d = spacings(theta, s).d
        e = np.concatenate(([0.0], eta1(theta, x), [0.0]))
        de = np.diff(e)
        live = d > SPACING_FLOOR
        return float(np.sum(de[live] / d[live]) / (n + 1))

    return objective, (lambda t: -h_gradient(t)), h_gradient


# ---------------------------------------------------------------------------
# estimators


def _result(method, opt, objective_value, residual, extra_warnings=()):
    warnings = list(opt.warnings) + list(extra_warnings)
    return EstimateResult(
        method=method,
        theta_hat=opt.x,
        objective_at_opt=objective_value,
        iterations=opt.iterations,
        converged=opt.converged,
        residual=residual,
        warnings=warnings,
    )


def _require_converged(method, opt):
    if opt.boundary_hit:
        raise EstimationError(
            f"{method} optimum pinned at the search boundary",
            {"theta": opt.x, "objective": opt.fun, "evaluations": opt.iterations},
        )


def fit_mle(data) -> EstimateResult:
    """Maximum likelihood estimate; ``objective_at_opt`` is the log-likelihood."""
    s = as_sample(data)
    opt = minimize_positive(
        lambda t: -log_likelihood(t, s), grad=lambda t: -score(t, s)
    )
    _require_converged(Method.MLE, opt)
    return _result(Method.MLE, opt, -opt.fun, score(opt.x, s))


def _fit_distance(method: Method, data) -> EstimateResult:
    s = as_sample(data)
    objective, gradient, equation = _distance_problem(method, s)
    opt = minimize_positive(objective, grad=gradient)
    _require_converged(method, opt)
    return _result(method, opt, opt.fun, equation(opt.x))


def fit_lse(data) -> EstimateResult:
    """Least-squares estimate minimising ``sum (F(x_(i)) - i/(n+1))^2``."""
    return _fit_distance(Method.LSE, data)


def fit_wlse(data) -> EstimateResult:
    return _fit_distance(Method.WLSE, data)


def fit_cme(data) -> EstimateResult:
    """Cramer-von Mises estimate; objective includes the ``1/(12n)`` constant."""
    return _fit_distance(Method.CME, data)


def fit_mpse(data) -> EstimateResult:
    """Maximum product of spacings estimate.

    ``objective_at_opt`` is the mean log-spacing ``H(theta)``.  Tied
    observations give zero spacings which are floored at
    :data:`SPACING_FLOOR` with a warning.
    """
    s = as_sample(data)
    if s.all_tied:
        raise EstimationError("all observations are tied; spacings are degenerate", {"n": s.n})
    objective, gradient, h_gradient = _mps_problem(s)
    opt = minimize_positive(objective, grad=gradient)
    _require_converged(Method.MPSE, opt)
    extra = []
    ties = spacings(opt.x, s).ties
    if ties:
        extra.append(f"{ties} zero spacing(s) from tied observations floored at {SPACING_FLOOR:g}")
    return _result(Method.MPSE, opt, -opt.fun, h_gradient(opt.x), extra)


_FITTERS = {
    Method.MLE: fit_mle,
    Method.LSE: fit_lse,
    Method.WLSE: fit_wlse,
    Method.CME: fit_cme,
    Method.MPSE: fit_mpse,
}


def fit(method, data) -> EstimateResult:
    return _FITTERS[Method(method)](data)


def fit_all(data, methods=tuple(Method)) -> dict[Method, EstimateResult | EstimationError]:
    """Run several estimators, keeping failures in place of results."""
    s = as_sample(data)
    out: dict[Method, EstimateResult | EstimationError] = {}
    for m in methods:
        m = Method(m)
        try:
            out[m] = fit(m, s)
        except EstimationError as exc:
            out[m] = exc
    return out

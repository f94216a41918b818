"""Competing one-parameter inverted lifetime models.

=====  ==========================================  ==============================
kind   density                                     CDF
=====  ==========================================  ==============================
IED    theta/x^2 exp(-theta/x)                      exp(-theta/x)
IRD    2 theta/x^3 exp(-theta/x^2)                  exp(-theta/x^2)
ILD    theta^2/(1+theta) (1+x)/x^3 exp(-theta/x)    (1 + theta/((1+theta)x)) exp(-theta/x)
=====  ==========================================  ==============================

IED and IRD have closed-form maximum likelihood estimates; ILD is fitted with
the same optimizer as the IXGD estimators.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .distribution import check_theta
from .errors import DomainError, EstimationError
from .estimation import EstimateResult, Method, as_sample
from .optimize import minimize_positive

__all__ = ["RivalKind", "RivalModel", "rival_mle"]


class RivalKind(str, enum.Enum):
    IED = "IED"
    IRD = "IRD"
    ILD = "ILD"

    def __str__(self):
        return self.value


def _positive_part(x):
    arr = np.asarray(x, dtype=float)
    if np.isnan(arr).any():
        raise DomainError("argument contains NaN")
    return arr


@dataclass(frozen=True)
class RivalModel:
    kind: RivalKind
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "kind", RivalKind(self.kind))
        object.__setattr__(self, "theta", check_theta(self.theta))

    def logpdf(self, x):
        arr = _positive_part(x)
        if np.isinf(arr).any():
            raise DomainError("density argument must be finite")
        pos = arr > 0
        xs = np.where(pos, arr, 1.0)
        t = self.theta
        if self.kind is RivalKind.IED:
            val = math.log(t) - 2.0 * np.log(xs) - t / xs
        elif self.kind is RivalKind.IRD:
            val = math.log(2.0 * t) - 3.0 * np.log(xs) - t / (xs * xs)
        else:
            val = 2.0 * math.log(t) - math.log1p(t) + np.log1p(xs) - 3.0 * np.log(xs) - t / xs
        out = np.where(pos, val, -np.inf)
        return float(out) if np.ndim(x) == 0 else out

    def pdf(self, x):
        out = np.exp(self.logpdf(x))
        return float(out) if np.ndim(x) == 0 else out

    def cdf(self, x):
        arr = _positive_part(x)
        pos = arr > 0
        with np.errstate(divide="ignore"):
            w = np.where(pos, 1.0 / np.where(pos, arr, 1.0), np.inf)
        t = self.theta
        if self.kind is RivalKind.IRD:
            val = np.exp(-t * w * w)
        else:
            u = np.minimum(t * w, 1e3)
            val = np.exp(-u)
            if self.kind is RivalKind.ILD:
                val = (1.0 + u / (1.0 + t)) * val
        out = np.where(pos, val, 0.0)
        out = np.where(np.isposinf(arr), 1.0, out)
        return float(out) if np.ndim(x) == 0 else out

    def log_likelihood(self, data) -> float:
        return float(np.sum(self.logpdf(as_sample(data).values)))

    def sample(self, n: int, seed=None) -> np.ndarray:
        """Reciprocals of exponential, Lindley or square-root-exponential draws."""
        if isinstance(n, bool) or int(n) != n or n < 1:
            raise DomainError(f"sample size must be a positive integer, got {n!r}")
        n = int(n)
        rng = np.random.default_rng(seed)
        t = self.theta
        if self.kind is RivalKind.IED:
            return 1.0 / rng.exponential(1.0 / t, size=n)
        if self.kind is RivalKind.IRD:
            return np.sqrt(t / rng.exponential(1.0, size=n))
        # Lindley: exponential(theta) w.p. theta/(1+theta), else gamma(2, theta)
        pick_exp = rng.random(n) < t / (1.0 + t)
        draws = rng.exponential(1.0 / t, size=(n, 2))
        return 1.0 / np.where(pick_exp, draws[:, 0], draws.sum(axis=1))


def _score(kind: RivalKind, theta: float, x: np.ndarray) -> float:
    n = x.size
    if kind is RivalKind.IED:
        return n / theta - float(np.sum(1.0 / x))
    if kind is RivalKind.IRD:
        return n / theta - float(np.sum(1.0 / (x * x)))
    return 2 * n / theta - n / (1.0 + theta) - float(np.sum(1.0 / x))


def rival_mle(kind, data) -> EstimateResult:
    """Maximum likelihood fit of a rival model.

    ``objective_at_opt`` holds the maximised log-likelihood and ``residual``
    the score at the estimate.
    """
    kind = RivalKind(kind)
    s = as_sample(data)
    x = s.values
    if kind is RivalKind.ILD:
        opt = minimize_positive(
            lambda t: -RivalModel(kind, t).log_likelihood(s),
            grad=lambda t: -_score(kind, t, x),
        )
        if opt.boundary_hit:
            raise EstimationError("ILD optimum pinned at the search boundary", {"theta": opt.x})
        theta, iters, converged, warns = opt.x, opt.iterations, opt.converged, opt.warnings
    else:
        power = 1.0 if kind is RivalKind.IED else 2.0
        theta = s.n / float(np.sum(x**-power))
        if not math.isfinite(theta) or theta <= 0:
            raise EstimationError(f"{kind} closed-form estimate is not finite", {"theta": theta})
        iters, converged, warns = 0, True, []
    return EstimateResult(
        method=Method.MLE,
        theta_hat=theta,
        objective_at_opt=RivalModel(kind, theta).log_likelihood(s),
        iterations=iters,
        converged=converged,
        residual=_score(kind, theta, x),
        warnings=list(warns),
        model=str(kind),
    )

"""Asymptotic (Wald) interval estimation centred on the MPS estimate."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .distribution import check_theta
from .errors import DegenerateInformationError, DomainError
from .estimation import EstimateResult, as_sample, fit_mpse

__all__ = [
    "ConfidenceInterval",
    "observed_information",
    "loglik_second_derivative",
    "z_quantile",
    "aci",
    "interval_batch_stats",
]


@dataclass(frozen=True)
class ConfidenceInterval:
    lower: float
    upper: float
    level: float
    variance_used: float
    center: float
    lower_unclamped: float

    @property
    def width(self) -> float:
        return self.upper - self.lower

    @property
    def clamped(self) -> bool:
        return self.lower_unclamped < self.lower

    def covers(self, theta: float) -> bool:
        return self.lower <= theta <= self.upper

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "width": self.width,
            "level": self.level,
            "center": self.center,
            "variance_used": self.variance_used,
            "lower_unclamped": self.lower_unclamped,
        }


def loglik_second_derivative(theta, data) -> float:
    """``-sum 1/(2x^2+theta)^2 - 2n/theta^2 + n/(1+theta)^2``."""
    t = check_theta(theta)
    x = as_sample(data).values
    n = x.size
    return float(-np.sum(1.0 / (2.0 * x * x + t) ** 2) - 2 * n / t**2 + n / (1.0 + t) ** 2)


def observed_information(theta, data) -> float:
    """Negative second derivative of the log-likelihood at ``theta``."""
    info = -loglik_second_derivative(theta, data)
    if not math.isfinite(info) or info <= 0.0:
        raise DegenerateInformationError(f"observed information {info!r} is not positive")
    return info


def z_quantile(level: float) -> float:
    """Two-sided standard normal critical value for a ``level`` interval."""
    if not 0.0 < level < 1.0:
        raise DomainError(f"level must lie in (0, 1), got {level!r}")
    return float(norm.ppf(0.5 + 0.5 * level))


def aci(data, level: float = 0.95, mpse: EstimateResult | None = None) -> ConfidenceInterval:
    """Asymptotic confidence interval ``theta_mpse -/+ z sqrt(1/I(theta_mpse))``.

    Pass an existing MPSE fit via ``mpse`` to avoid refitting.  The lower
    limit is clamped at zero; the raw value is kept in ``lower_unclamped``.
    """
    s = as_sample(data)
    z = z_quantile(level)
    est = mpse if mpse is not None else fit_mpse(s)
    center = est.theta_hat
    var = 1.0 / observed_information(center, s)
    half = z * math.sqrt(var)
    raw_lower = center - half
    return ConfidenceInterval(
        lower=max(raw_lower, 0.0),
        upper=center + half,
        level=level,
        variance_used=var,
        center=center,
        lower_unclamped=raw_lower,
    )


def interval_batch_stats(intervals, true_theta) -> tuple[float, float]:
    """Average width and empirical coverage of a batch of intervals."""
    intervals = list(intervals)
    if not intervals:
        raise DomainError("interval batch is empty")
    t = check_theta(true_theta)
    widths = [ci.width for ci in intervals]
    hits = sum(1 for ci in intervals if ci.covers(t))
    return math.fsum(widths) / len(intervals), hits / len(intervals)

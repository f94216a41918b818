"""Inverse xgamma distribution (IXGD) and its xgamma parent (XGD).

If ``Y`` follows the xgamma law with parameter ``theta`` then ``X = 1/Y``
follows the inverse xgamma law.  Every quantity below is written in terms of
``u = theta / x`` which keeps the formulas finite over the whole positive
axis (no ``x**-4`` overflow near zero, no ``u**2 * exp(-u)`` NaNs).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize, special

from .errors import DomainError, HazardOverflowError, MomentNotFiniteError

__all__ = ["Ixgd", "Xgd", "OrderSpec", "MAX_ORDER_N", "check_theta"]

#: Largest sample size accepted by the alternating order-statistic sums.
MAX_ORDER_N = 64

# exp(-u) * u**4 underflows well before this; beyond it F and f are exactly 0.
_U_CUTOFF = 1.0e3


def check_theta(theta) -> float:
    """Return ``theta`` as a float, raising DomainError unless finite and > 0."""
    try:
        value = float(theta)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"theta must be a real number, got {theta!r}") from exc
    if not math.isfinite(value) or value <= 0.0:
        raise DomainError(f"theta must be finite and > 0, got {theta!r}")
    return value


def _as_float_array(x, *, allow_inf: bool):
    arr = np.asarray(x, dtype=float)
    if np.isnan(arr).any():
        raise DomainError("argument contains NaN")
    if not allow_inf and np.isinf(arr).any():
        raise DomainError("argument must be finite")
    return arr


def _ret(arr, like):
    return float(arr) if np.ndim(like) == 0 else arr


@dataclass(frozen=True)
class Xgd:
    """Xgamma distribution: mixture of exponential(theta) and gamma(3, theta)."""

    theta: float

    def __post_init__(self):
        object.__setattr__(self, "theta", check_theta(self.theta))

    @property
    def weights(self) -> tuple[float, float]:
        """Mixing proportions of the exponential and gamma(3) components."""
        t = self.theta
        return t / (1.0 + t), 1.0 / (1.0 + t)

    def pdf(self, y):
        t = self.theta
        y_arr = _as_float_array(y, allow_inf=True)
        pos = y_arr > 0
        ys = np.where(pos & np.isfinite(y_arr), y_arr, 1.0)
        val = t * t / (1.0 + t) * (1.0 + 0.5 * t * ys * ys) * np.exp(-t * ys)
        out = np.where(pos & np.isfinite(y_arr), val, 0.0)
        return _ret(out, y)

    def cdf(self, y):
        t = self.theta
        y_arr = _as_float_array(y, allow_inf=True)
        v = np.clip(t * np.where(y_arr > 0, y_arr, 0.0), 0.0, _U_CUTOFF)
        tail = (1.0 + t + v + 0.5 * v * v) / (1.0 + t) * np.exp(-v)
        out = np.where(y_arr > 0, 1.0 - tail, 0.0)
        out = np.where(np.isposinf(y_arr), 1.0, out)
        return _ret(out, y)

    def sample(self, n: int, seed=None) -> np.ndarray:
        """Draw ``n`` variates through the exponential/gamma(3) mixture.

        The gamma(3, theta) component is the sum of three independent
        exponential(theta) draws.  ``seed`` is anything accepted by
        :func:`numpy.random.default_rng`.
        """
        n = _check_count(n)
        rng = np.random.default_rng(seed)
        pick_exp = rng.random(n) < self.weights[0]
        draws = rng.exponential(1.0 / self.theta, size=(n, 3))
        return np.where(pick_exp, draws[:, 0], draws.sum(axis=1))


@dataclass(frozen=True)
class OrderSpec:
    """Rank ``r`` within a sample of size ``n``."""

    n: int
    r: int

    def __post_init__(self):
        if int(self.n) != self.n or int(self.r) != self.r:
            raise DomainError("n and r must be integers")
        if self.n < 1 or not 1 <= self.r <= self.n:
            raise DomainError(f"need 1 <= r <= n, got n={self.n}, r={self.r}")
        if self.n > MAX_ORDER_N:
            raise DomainError(
                f"order statistics supported for n <= {MAX_ORDER_N} only, got n={self.n}"
            )


@dataclass(frozen=True)
class Ixgd:
    """Inverse xgamma distribution with a single positive parameter ``theta``.

    Densities and distribution functions accept scalars or arrays and return
    the same shape.  Non-positive arguments map to zero density and zero
    probability; NaN always raises :class:`DomainError`.
    """

    theta: float

    def __post_init__(self):
        object.__setattr__(self, "theta", check_theta(self.theta))

    @property
    def parent(self) -> Xgd:
        return Xgd(self.theta)

    def _u(self, x_arr):
        # u = theta / x on the positive part, +inf elsewhere (never used there)
        with np.errstate(divide="ignore"):
            return np.where(x_arr > 0, self.theta / np.where(x_arr > 0, x_arr, 1.0), np.inf)

    def logpdf(self, x):
        t = self.theta
        x_arr = _as_float_array(x, allow_inf=False)
        u = self._u(x_arr)
        pos = x_arr > 0
        us = np.where(pos, u, 1.0)
        log_u = np.log(us)
        val = (
            2.0 * log_u
            + np.logaddexp(0.0, 2.0 * log_u - math.log(2.0 * t))
            - us
            - math.log1p(t)
        )
        out = np.where(pos, val, -np.inf)
        return _ret(out, x)

    def pdf(self, x):
        """Density ``theta^2/(1+theta) x^-2 (1 + theta/(2x^2)) exp(-theta/x)``."""
        return _ret(np.exp(self.logpdf(x)), x)

    def cdf(self, x):
        t = self.theta
        x_arr = _as_float_array(x, allow_inf=True)
        u = np.minimum(self._u(x_arr), _U_CUTOFF)
        val = (1.0 + u / (1.0 + t) + u * u / (2.0 * (1.0 + t))) * np.exp(-u)
        out = np.where(x_arr > 0, val, 0.0)
        out = np.where(np.isposinf(x_arr), 1.0, out)
        return _ret(out, x)

    def survival(self, t):
        """Reliability ``P(X >= t)``.

        Evaluated as the parent xgamma CDF at ``1/t`` in incomplete-gamma
        form, which keeps full relative precision in the upper tail where
        ``1 - cdf`` would cancel.
        """
        th = self.theta
        t_arr = _as_float_array(t, allow_inf=True)
        with np.errstate(divide="ignore"):
            u = np.where(t_arr > 0, th / np.where(t_arr > 0, t_arr, 1.0), np.inf)
        val = (th * -np.expm1(-u) + special.gammainc(3.0, u)) / (1.0 + th)
        out = np.where(t_arr > 0, val, 1.0)
        out = np.where(np.isposinf(t_arr), 0.0, out)
        return _ret(out, t)

    def hazard(self, t):
        """Failure rate ``pdf / survival``; raises if survival underflows."""
        t_arr = _as_float_array(t, allow_inf=True)
        if np.isposinf(t_arr).any():
            raise HazardOverflowError("hazard undefined at t = +inf (survival is 0)")
        surv = np.asarray(self.survival(t_arr))
        if (surv <= 0.0).any():
            raise HazardOverflowError("survival underflowed to 0; hazard not representable")
        out = np.asarray(self.pdf(t_arr)) / surv
        return _ret(out, t)

    def reverse_hazard(self, t):
        """Reverse failure rate ``pdf / cdf`` from its closed form."""
        th = self.theta
        t_arr = _as_float_array(t, allow_inf=True)
        if (t_arr <= 0).any():
            raise DomainError("reverse hazard requires t > 0")
        u = th / t_arr
        # theta^2 (2t^2+theta) / ((2t^2+2 theta t^2+2 theta t+theta^2) t^2), divided through by t^4
        out = u * u * (2.0 + u * u / th) / (2.0 * (1.0 + th) + 2.0 * u + u * u)
        return _ret(out, t)

    def quantile(self, p):
        """Inverse CDF by bracketed Brent root search on the monotone cdf."""
        p_arr = _as_float_array(p, allow_inf=False)
        if ((p_arr <= 0.0) | (p_arr >= 1.0)).any():
            raise DomainError("quantile requires 0 < p < 1")
        out = np.array([self._quantile_one(float(pi)) for pi in p_arr.ravel()])
        return _ret(out.reshape(p_arr.shape), p)

    def _quantile_one(self, p: float) -> float:
        lo, hi = self.theta / 50.0, self.theta * 50.0
        while self.cdf(lo) > p:
            lo /= 2.0
        while self.cdf(hi) < p:
            hi *= 2.0
        return optimize.brentq(
            lambda x: self.cdf(x) - p, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500
        )

    def median(self) -> float:
        return self.quantile(0.5)

    def sample(self, n: int, seed=None) -> np.ndarray:
        """``n`` IXGD variates as reciprocals of xgamma mixture draws."""
        return 1.0 / self.parent.sample(n, seed)

    def raw_moment(self, r: float) -> float:
        """``E[X**r]``, which exists only for ``r < 1``."""
        r = float(r)
        if math.isnan(r):
            raise DomainError("moment order is NaN")
        if r >= 1.0:
            raise MomentNotFiniteError(f"E[X^r] is infinite for r >= 1 (got r={r})")
        t = self.theta
        return float(
            t ** (r + 1) * special.gamma(1.0 - r) / (1.0 + t)
            + t**r * special.gamma(3.0 - r) / (2.0 * (1.0 + t))
        )

    def inverse_moment(self, r: int) -> float:
        """``E[X**-r]`` for ``r`` in 1..4."""
        if r not in (1, 2, 3, 4):
            raise DomainError(f"inverse moment order must be one of 1, 2, 3, 4 (got {r!r})")
        t = self.theta
        return (
            t * t / (2.0 * (1.0 + t))
            * (2.0 * math.gamma(r + 1) / t ** (r + 1) + math.gamma(r + 3) / t ** (r + 2))
        )

    def reciprocal_mean(self) -> float:
        """``E[1/X] = (theta + 3) / (theta (1 + theta))``; its inverse is the harmonic mean."""
        t = self.theta
        return (t + 3.0) / (t * (1.0 + t))

    def harmonic_mean(self) -> float:
        """Textbook harmonic mean ``1 / E[1/X]``.

        Some authors call ``E[1/X]`` itself the harmonic mean; that quantity
        is :meth:`reciprocal_mean`.
        """
        return 1.0 / self.reciprocal_mean()

    def order_stat_pdf(self, spec: OrderSpec, x):
        """Density of the ``spec.r``-th order statistic out of ``spec.n``.

        Alternating binomial sum over powers of the CDF, accumulated with
        :func:`math.fsum`.
        """
        n, r = spec.n, spec.r
        x_arr = _as_float_array(x, allow_inf=False)
        big_f = np.atleast_1d(np.asarray(self.cdf(x_arr), dtype=float)).ravel()
        small_f = np.atleast_1d(np.asarray(self.pdf(x_arr), dtype=float)).ravel()
        norm = n * math.comb(n - 1, r - 1)
        m = n - r
        out = np.empty_like(big_f)
        for idx, (fc, fd) in enumerate(zip(big_f, small_f)):
            s = math.fsum(
                (-1) ** k * math.comb(m, k) * fc ** (r + k - 1) for k in range(m + 1)
            )
            val = norm * s * fd
            if -1e-12 < val < 0.0:
                val = 0.0
            out[idx] = val
        return _ret(out.reshape(x_arr.shape), x)

    def order_stat_cdf(self, spec: OrderSpec, x):
        """CDF of the ``spec.r``-th order statistic as the expanded double sum."""
        n, r = spec.n, spec.r
        x_arr = _as_float_array(x, allow_inf=True)
        big_f = np.atleast_1d(np.asarray(self.cdf(x_arr), dtype=float)).ravel()
        out = np.empty_like(big_f)
        for idx, fc in enumerate(big_f):
            s = math.fsum(
                math.comb(n, j) * math.comb(n - j, k) * (-1) ** k * fc ** (j + k)
                for j in range(r, n + 1)
                for k in range(n - j + 1)
            )
            out[idx] = min(max(s, 0.0), 1.0)
        return _ret(out.reshape(x_arr.shape), x)


def _check_count(n) -> int:
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise DomainError(f"sample size must be a positive integer, got {n!r}")
    return int(n)

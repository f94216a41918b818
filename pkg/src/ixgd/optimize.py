"""Bounded scalar minimisation over a positive parameter.

All estimators in the package reduce to minimising a function of one positive
parameter.  The search runs on ``log(theta)``:

1. a coarse log-spaced scan locates the basin (robust to the flat tails of
   the distance objectives),
2. the bracket is widened if the best grid point sits on an edge,
3. Brent's golden-section/parabolic method refines inside the basin,
4. when an analytic gradient is supplied its root is polished with
   ``brentq`` so first-order residuals reach machine precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .errors import EstimationError

DEFAULT_BRACKET = (1.0e-6, 1.0e6)
HARD_BRACKET = (1.0e-12, 1.0e12)
POINTS_PER_DECADE = 2


@dataclass
class ScalarOptimum:
    x: float
    fun: float
    iterations: int
    converged: bool
    boundary_hit: bool = False
    polished: bool = False
    warnings: list[str] = field(default_factory=list)


def _safe(fun):
    def wrapped(theta):
        try:
            val = float(fun(theta))
        except (FloatingPointError, ZeroDivisionError, OverflowError, ValueError):
            return math.inf
        return val if math.isfinite(val) else math.inf

    return wrapped


def _scan(f, lo, hi):
    decades = math.log10(hi) - math.log10(lo)
    m = max(int(math.ceil(decades * POINTS_PER_DECADE)) + 1, 5)
    grid = np.geomspace(lo, hi, m)
    vals = np.array([f(t) for t in grid])
    return grid, vals


def minimize_positive(
    fun,
    grad=None,
    bracket=DEFAULT_BRACKET,
    xtol: float = 1e-10,
    maxiter: int = 500,
) -> ScalarOptimum:
    """Minimise ``fun(theta)`` over ``theta > 0``.

    Parameters
    ----------
    fun
        Objective; non-finite values are treated as ``+inf``.
    grad
        Optional derivative of ``fun`` with respect to ``theta``.  When given,
        the located minimum is polished to a root of ``grad``.
    bracket
        Initial search interval, widened up to ``HARD_BRACKET`` when the
        minimum pins an edge.
    xtol
        Convergence tolerance on ``log(theta)``.
    """
    f = _safe(fun)
    lo, hi = bracket
    evals = 0
    warnings: list[str] = []
    while True:
        grid, vals = _scan(f, lo, hi)
        evals += len(grid)
        if not np.isfinite(vals).any():
            raise EstimationError(
                "objective is non-finite over the whole bracket",
                {"bracket": (lo, hi), "evaluations": evals},
            )
        k = int(np.argmin(vals))
        at_lo, at_hi = k == 0, k == len(grid) - 1
        if at_lo and lo > HARD_BRACKET[0]:
            lo = max(lo * 1e-3, HARD_BRACKET[0])
            continue
        if at_hi and hi < HARD_BRACKET[1]:
            hi = min(hi * 1e3, HARD_BRACKET[1])
            continue
        break

    boundary_hit = at_lo or at_hi
    if boundary_hit:
        edge = grid[k]
        warnings.append(f"optimum pinned at search boundary theta={edge:.6g}")
        return ScalarOptimum(
            x=float(edge), fun=float(vals[k]), iterations=evals, converged=False,
            boundary_hit=True, warnings=warnings,
        )

    a, b = math.log(grid[k - 1]), math.log(grid[k + 1])
    res = optimize.minimize_scalar(
        lambda s: f(math.exp(s)), bounds=(a, b), method="bounded",
        options={"xatol": xtol, "maxiter": maxiter},
    )
    evals += int(res.nfev)
    x_best, f_best = math.exp(res.x), float(res.fun)
    if vals[k] < f_best:
        x_best, f_best = float(grid[k]), float(vals[k])
    converged = bool(res.success)
    polished = False

    if grad is not None:
        root = _polish(grad, grid[k - 1], x_best, grid[k + 1])
        if root is not None:
            x_root, n_root = root
            evals += n_root
            f_root = f(x_root)
            # keep the root only if it is not worse than the Brent point
            if f_root <= f_best + 1e-12 * max(1.0, abs(f_best)):
                x_best, f_best = x_root, f_root
                polished = True
                converged = True
        if not polished:
            warnings.append("gradient root polish unavailable; using Brent point")

    return ScalarOptimum(
        x=float(x_best), fun=float(f_best), iterations=evals, converged=converged,
        boundary_hit=False, polished=polished, warnings=warnings,
    )


def _polish(grad, left, mid, right):
    g = _safe(grad)
    # tightest sign-changing bracket around the Brent point
    for lo, hi in ((mid * (1 - 1e-6), mid * (1 + 1e-6)), (left, mid), (mid, right), (left, right)):
        glo, ghi = g(lo), g(hi)
        if math.isfinite(glo) and math.isfinite(ghi) and glo < 0.0 < ghi:
            x, r = optimize.brentq(
                g, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps,
                maxiter=200, full_output=True, disp=False,
            )
            if r.converged:
                return float(x), int(r.function_calls) + 2
    return None

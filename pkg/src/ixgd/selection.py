"""Goodness of fit and information-criterion model comparison.

:func:`compare_models` fits the IXGD (all five estimators, maximum likelihood
for the criteria) and the three rival inverted models, then ranks them by
AIC, BIC, CAIC and HQIC (lower is better).  The Kolmogorov-Smirnov distance
is reported alongside as a goodness-of-fit check, not used for ranking.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .distribution import Ixgd
from .errors import DomainError, EstimationError
from .estimation import EstimateResult, Method, as_sample, fit_all
from .rivals import RivalKind, RivalModel, rival_mle

__all__ = [
    "InfoCriteria",
    "ModelRow",
    "FitReport",
    "CRITERIA",
    "MODELS",
    "ks_statistic",
    "info_criteria",
    "compare_models",
]

CRITERIA = ("aic", "bic", "caic", "hqic")
MODELS = ("IED", "ILD", "IRD", "IXGD")
N_PARAMS = 1


class InfoCriteria(NamedTuple):
    aic: float
    bic: float
    caic: float
    hqic: float


def ks_statistic(cdf_fn: Callable, data) -> float:
    """Exact sup-distance between the empirical CDF and ``cdf_fn``.

    ``max_i max(i/n - F(x_(i)), F(x_(i)) - (i-1)/n)`` over the sorted data;
    tied observations are handled because the empirical CDF only needs to be
    compared on each side of every jump.
    """
    x = as_sample(data).sorted
    n = x.size
    f = np.asarray(cdf_fn(x), dtype=float)
    i = np.arange(1, n + 1)
    d_plus = np.max(i / n - f)
    d_minus = np.max(f - (i - 1) / n)
    return float(max(d_plus, d_minus))


def info_criteria(neg_log_lik: float, p: int, n: int) -> InfoCriteria:
    if n < 3:
        raise DomainError("information criteria need n >= 3 so that ln(ln n) > 0")
    if p < 1:
        raise DomainError("number of parameters must be >= 1")
    base = 2.0 * neg_log_lik
    ln_n = math.log(n)
    return InfoCriteria(
        aic=base + 2 * p,
        bic=base + p * ln_n,
        caic=base + p * (ln_n + 1.0),
        hqic=base + 2 * p * math.log(ln_n),
    )


@dataclass
class ModelRow:
    model: str
    theta_hat: float = math.nan
    neg_log_lik: float = math.nan
    aic: float = math.nan
    bic: float = math.nan
    caic: float = math.nan
    hqic: float = math.nan
    ks: float = math.nan
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "theta_hat": self.theta_hat,
            "neg_log_lik": self.neg_log_lik,
            "aic": self.aic,
            "bic": self.bic,
            "caic": self.caic,
            "hqic": self.hqic,
            "ks": self.ks,
            "error": self.error,
        }


@dataclass
class FitReport:
    n: int
    rows: list[ModelRow]
    ranking: dict[str, list[str]]
    winners: dict[str, str | None]
    ixgd_estimates: dict[str, EstimateResult | str] = field(default_factory=dict)
    findings: list[str] = field(default_factory=list)

    def row(self, model: str) -> ModelRow:
        for r in self.rows:
            if r.model == model:
                return r
        raise KeyError(model)

    def to_dict(self) -> dict:
        est = {
            k: (v.to_dict() if isinstance(v, EstimateResult) else {"error": v})
            for k, v in self.ixgd_estimates.items()
        }
        return {
            "n": self.n,
            "models": [r.to_dict() for r in self.rows],
            "ranking": self.ranking,
            "winners": self.winners,
            "ixgd_estimates": est,
            "findings": list(self.findings),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=True)

    def to_text(self) -> str:
        head = ["Model", "Estimate", "NegLogLik", "AIC", "BIC", "CAIC", "HQIC", "K-S"]
        lines = []
        for r in self.rows:
            if r.ok:
                vals = [r.theta_hat, r.neg_log_lik, r.aic, r.bic, r.caic, r.hqic, r.ks]
                lines.append([r.model] + [f"{v:.6g}" for v in vals])
            else:
                lines.append([r.model, f"failed: {r.error}"] + [""] * 6)
        widths = [max(len(h), *(len(l[j]) for l in lines)) for j, h in enumerate(head)]
        fmt = lambda cells: "  ".join(c.rjust(w) if j else c.ljust(w) for j, (c, w) in enumerate(zip(cells, widths)))
        out = [fmt(head), fmt(["-" * w for w in widths])]
        out += [fmt(l) for l in lines]
        out.append("")
        for c in CRITERIA:
            out.append(f"best by {c.upper()}: {self.winners[c]}  (ranking: {', '.join(self.ranking[c])})")
        for f in self.findings:
            out.append(f"note: {f}")
        return "\n".join(out) + "\n"


def _row(model: str, est: EstimateResult, cdf_fn, s) -> ModelRow:
    nll = -est.objective_at_opt
    ic = info_criteria(nll, N_PARAMS, s.n)
    return ModelRow(
        model=model,
        theta_hat=est.theta_hat,
        neg_log_lik=nll,
        aic=ic.aic,
        bic=ic.bic,
        caic=ic.caic,
        hqic=ic.hqic,
        ks=ks_statistic(cdf_fn, s),
    )


def compare_models(data) -> FitReport:
    """Fit IXGD and the rival models and rank them by each criterion."""
    s = as_sample(data)
    if s.n < 3:
        raise DomainError("model comparison needs at least 3 observations")
    rows: list[ModelRow] = []

    ixgd_fits = fit_all(s)
    estimates = {
        str(m): (r if isinstance(r, EstimateResult) else str(r)) for m, r in ixgd_fits.items()
    }
    mle = ixgd_fits[Method.MLE]
    if isinstance(mle, EstimateResult):
        rows.append(_row("IXGD", mle, Ixgd(mle.theta_hat).cdf, s))
    else:
        rows.append(ModelRow(model="IXGD", error=str(mle)))

    for kind in RivalKind:
        try:
            est = rival_mle(kind, s)
        except EstimationError as exc:
            rows.append(ModelRow(model=str(kind), error=str(exc)))
            continue
        rows.append(_row(str(kind), est, RivalModel(kind, est.theta_hat).cdf, s))

    rows.sort(key=lambda r: r.model)
    ranking, winners = {}, {}
    good = [r for r in rows if r.ok]
    for c in CRITERIA:
        ordered = sorted(good, key=lambda r: (getattr(r, c), r.model))
        ranking[c] = [r.model for r in ordered] + [r.model for r in rows if not r.ok]
        winners[c] = ordered[0].model if ordered else None

    findings = []
    if len(set(winners.values())) > 1:
        findings.append(
            "criteria disagree on the best model: "
            + ", ".join(f"{c.upper()}={w}" for c, w in winners.items())
        )
    if good:
        best_nll = min(good, key=lambda r: r.neg_log_lik).model
        if best_nll != winners["aic"]:
            findings.append(f"lowest negative log-likelihood ({best_nll}) differs from AIC winner")
        best_ks = min(good, key=lambda r: r.ks).model
        if best_ks != winners["aic"]:
            findings.append(f"smallest K-S distance ({best_ks}) differs from AIC winner")
    for r in rows:
        if not r.ok:
            findings.append(f"{r.model} fit failed: {r.error}")

    return FitReport(
        n=s.n, rows=rows, ranking=ranking, winners=winners,
        ixgd_estimates=estimates, findings=findings,
    )

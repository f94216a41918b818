"""Monte Carlo study of the five estimators and the MPSE-based interval.

For every design cell ``(n, theta)`` and replicate ``r`` a sample of size
``n`` is drawn from IXGD(theta) with a generator seeded by
``SeedSequence(base_seed, spawn_key=(cell, r))``.  Seeds depend only on
those three integers, so results do not depend on how replicates are
scheduled across workers.  Aggregates use :func:`math.fsum` over the
replicate-ordered values and are therefore bit-for-bit reproducible.
"""

from __future__ import annotations

import hashlib
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .distribution import Ixgd, check_theta
from .errors import DataError, DegenerateInformationError, DomainError, EstimationError
from .estimation import EstimateResult, Method, Sample, fit
from .inference import aci

__all__ = [
    "SimDesign",
    "EstimateCell",
    "IntervalCell",
    "SimReport",
    "Finding",
    "replicate_seed",
    "replicate_sample",
    "run_simulation",
    "consistency_check",
    "load_design",
    "FAILURE_FLAG_RATE",
]

FAILURE_FLAG_RATE = 0.05
DEFAULT_SEED = 20180715


@dataclass(frozen=True)
class SimDesign:
    sample_sizes: tuple[int, ...] = (10, 20, 50, 100)
    thetas: tuple[float, ...] = (0.1, 0.5, 1.0, 1.5)
    replicates: int = 1000
    base_seed: int = DEFAULT_SEED
    methods: tuple[Method, ...] = tuple(Method)
    level: float = 0.95
    intervals: bool = True

    def __post_init__(self):
        sizes = tuple(int(n) for n in self.sample_sizes)
        thetas = tuple(check_theta(t) for t in self.thetas)
        methods = tuple(Method(m) for m in self.methods)
        if not sizes or not thetas or not methods:
            raise DomainError("sample_sizes, thetas and methods must be non-empty")
        if any(n < 2 for n in sizes):
            raise DomainError("sample sizes must be >= 2")
        if int(self.replicates) != self.replicates or self.replicates < 1:
            raise DomainError("replicates must be a positive integer")
        if int(self.base_seed) != self.base_seed or self.base_seed < 0:
            raise DomainError("base_seed must be a non-negative integer")
        if not 0.0 < self.level < 1.0:
            raise DomainError("level must lie in (0, 1)")
        object.__setattr__(self, "sample_sizes", sizes)
        object.__setattr__(self, "thetas", thetas)
        object.__setattr__(self, "methods", methods)
        object.__setattr__(self, "replicates", int(self.replicates))
        object.__setattr__(self, "base_seed", int(self.base_seed))

    def cells(self) -> list[tuple[int, int, float]]:
        """``(cell_index, n, theta)`` with theta as the outer loop."""
        out = []
        for theta in self.thetas:
            for n in self.sample_sizes:
                out.append((len(out), n, theta))
        return out

    def to_dict(self) -> dict:
        return {
            "sample_sizes": list(self.sample_sizes),
            "thetas": list(self.thetas),
            "replicates": self.replicates,
            "base_seed": self.base_seed,
            "methods": [str(m) for m in self.methods],
            "level": self.level,
            "intervals": self.intervals,
        }


@dataclass(frozen=True)
class EstimateCell:
    n: int
    theta: float
    method: Method
    average_estimate: float
    mse: float
    successes: int
    failures: int

    @property
    def flagged(self) -> bool:
        total = self.successes + self.failures
        return total > 0 and self.failures / total > FAILURE_FLAG_RATE


@dataclass(frozen=True)
class IntervalCell:
    n: int
    theta: float
    average_lower: float
    average_upper: float
    average_width: float
    coverage: float
    successes: int
    failures: int

    @property
    def flagged(self) -> bool:
        total = self.successes + self.failures
        return total > 0 and self.failures / total > FAILURE_FLAG_RATE


@dataclass
class SimReport:
    design: SimDesign
    estimates: list[EstimateCell]
    intervals: list[IntervalCell] = field(default_factory=list)

    def cell(self, n: int, theta: float, method) -> EstimateCell:
        method = Method(method)
        for c in self.estimates:
            if c.n == n and c.theta == theta and c.method is method:
                return c
        raise KeyError((n, theta, str(method)))

    def interval(self, n: int, theta: float) -> IntervalCell:
        for c in self.intervals:
            if c.n == n and c.theta == theta:
                return c
        raise KeyError((n, theta))

    def estimates_tsv(self) -> str:
        buf = io.StringIO()
        buf.write("n\ttheta\tmethod\taverage_estimate\tmse\tsuccesses\tfailures\tflagged\n")
        for c in self.estimates:
            buf.write(
                f"{c.n}\t{c.theta!r}\t{c.method}\t{c.average_estimate!r}\t{c.mse!r}"
                f"\t{c.successes}\t{c.failures}\t{int(c.flagged)}\n"
            )
        return buf.getvalue()

    def intervals_tsv(self) -> str:
        buf = io.StringIO()
        buf.write("n\ttheta\taverage_lower\taverage_upper\taverage_width\tcoverage\tsuccesses\tfailures\tflagged\n")
        for c in self.intervals:
            buf.write(
                f"{c.n}\t{c.theta!r}\t{c.average_lower!r}\t{c.average_upper!r}\t{c.average_width!r}"
                f"\t{c.coverage!r}\t{c.successes}\t{c.failures}\t{int(c.flagged)}\n"
            )
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "design": self.design.to_dict(),
            "estimates": [
                {
                    "n": c.n, "theta": c.theta, "method": str(c.method),
                    "average_estimate": c.average_estimate, "mse": c.mse,
                    "successes": c.successes, "failures": c.failures, "flagged": c.flagged,
                }
                for c in self.estimates
            ],
            "intervals": [
                {
                    "n": c.n, "theta": c.theta, "average_lower": c.average_lower,
                    "average_upper": c.average_upper, "average_width": c.average_width,
                    "coverage": c.coverage, "successes": c.successes,
                    "failures": c.failures, "flagged": c.flagged,
                }
                for c in self.intervals
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=True)


def replicate_seed(base_seed: int, cell: int, replicate: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=int(base_seed), spawn_key=(int(cell), int(replicate)))


def replicate_sample(design: SimDesign, cell: int, replicate: int) -> np.ndarray:
    """Regenerate the sample used by one replicate of one cell."""
    _, n, theta = design.cells()[cell]
    return Ixgd(theta).sample(n, replicate_seed(design.base_seed, cell, replicate))


def sample_digest(x: np.ndarray) -> str:
    return hashlib.sha256(np.ascontiguousarray(x, dtype="<f8").tobytes()).hexdigest()


def _run_cell(args):
    design, cell, n, theta = args
    records = []
    for r in range(design.replicates):
        s = Sample(Ixgd(theta).sample(n, replicate_seed(design.base_seed, cell, r)))
        fits: dict[Method, EstimateResult | None] = {}
        for m in design.methods:
            try:
                fits[m] = fit(m, s)
            except EstimationError:
                fits[m] = None
        interval = None
        if design.intervals:
            try:
                mpse = fits.get(Method.MPSE, False)
                if mpse is None:
                    raise EstimationError("MPSE fit failed")
                ci = aci(s, design.level, mpse=mpse or None)
                interval = (ci.lower, ci.upper, ci.width, ci.covers(theta))
            except (EstimationError, DegenerateInformationError):
                interval = None
        records.append(({m: (f.theta_hat if f is not None else None) for m, f in fits.items()}, interval))
    return records


def _aggregate(design: SimDesign, cell_records) -> SimReport:
    estimates, intervals = [], []
    for (cell, n, theta), records in zip(design.cells(), cell_records):
        for m in design.methods:
            vals = [rec[0][m] for rec in records if rec[0][m] is not None]
            failures = len(records) - len(vals)
            if vals:
                av = math.fsum(vals) / len(vals)
                mse = math.fsum((v - theta) ** 2 for v in vals) / len(vals)
            else:
                av = mse = math.nan
            estimates.append(EstimateCell(n, theta, m, av, mse, len(vals), failures))
        if design.intervals:
            ivs = [rec[1] for rec in records if rec[1] is not None]
            failures = len(records) - len(ivs)
            if ivs:
                k = len(ivs)
                intervals.append(IntervalCell(
                    n, theta,
                    average_lower=math.fsum(iv[0] for iv in ivs) / k,
                    average_upper=math.fsum(iv[1] for iv in ivs) / k,
                    average_width=math.fsum(iv[2] for iv in ivs) / k,
                    coverage=sum(1 for iv in ivs if iv[3]) / k,
                    successes=k, failures=failures,
                ))
            else:
                intervals.append(IntervalCell(n, theta, math.nan, math.nan, math.nan, math.nan, 0, failures))
    return SimReport(design=design, estimates=estimates, intervals=intervals)


def run_simulation(design: SimDesign, workers: int = 1, backend: str = "process") -> SimReport:
    """Run every cell of ``design`` and aggregate AV, MSE, width and coverage.

    ``workers > 1`` spreads cells over a process (or thread) pool; the report
    is identical for any worker count.
    """
    jobs = [(design, cell, n, theta) for cell, n, theta in design.cells()]
    if workers <= 1:
        results = [_run_cell(j) for j in jobs]
    else:
        pool_cls = {"process": ProcessPoolExecutor, "thread": ThreadPoolExecutor}[backend]
        with pool_cls(max_workers=workers) as pool:
            results = list(pool.map(_run_cell, jobs))
    return _aggregate(design, results)


@dataclass(frozen=True)
class Finding:
    kind: str
    theta: float
    method: str
    message: str


def consistency_check(report: SimReport, slack: float = 0.10) -> list[Finding]:
    """Check that MSE does not grow with n and that MPSE is no worse than MLE.

    Both comparisons allow a relative ``slack`` for Monte Carlo noise.
    """
    if len(set(report.design.sample_sizes)) < 2:
        raise DomainError("consistency check needs at least two sample sizes")
    findings = []
    for theta in report.design.thetas:
        for m in report.design.methods:
            cells = sorted(
                (c for c in report.estimates if c.theta == theta and c.method is m),
                key=lambda c: c.n,
            )
            for a, b in zip(cells, cells[1:]):
                if b.mse > a.mse * (1.0 + slack):
                    findings.append(Finding(
                        "mse_increase", theta, str(m),
                        f"MSE rises from {a.mse:.6g} (n={a.n}) to {b.mse:.6g} (n={b.n})",
                    ))
        if Method.MLE in report.design.methods and Method.MPSE in report.design.methods:
            for n in report.design.sample_sizes:
                mle, mps = report.cell(n, theta, Method.MLE), report.cell(n, theta, Method.MPSE)
                if mps.mse > mle.mse * (1.0 + slack):
                    findings.append(Finding(
                        "mpse_not_dominant", theta, "MPSE",
                        f"n={n}: MSE(MPSE)={mps.mse:.6g} exceeds MSE(MLE)={mle.mse:.6g}",
                    ))
    return findings


_KEY_ALIASES = {
    "sizes": "sample_sizes", "sample_sizes": "sample_sizes", "n": "sample_sizes",
    "thetas": "thetas", "theta": "thetas",
    "replicates": "replicates", "b": "replicates",
    "seed": "base_seed", "base_seed": "base_seed",
    "methods": "methods", "level": "level", "intervals": "intervals",
}


def _parse_list(value):
    if isinstance(value, (list, tuple)):
        return list(value)
    if isinstance(value, (int, float)):
        return [value]
    return [v for v in str(value).replace(",", " ").split() if v]


def design_from_mapping(mapping: dict, base: SimDesign | None = None) -> SimDesign:
    """Build a design from loosely typed keys, starting from ``base``."""
    kw = (base or SimDesign()).to_dict()
    for key, value in mapping.items():
        name = _KEY_ALIASES.get(str(key).strip().lower())
        if name is None:
            raise DataError(f"unknown design key {key!r}")
        try:
            if name == "sample_sizes":
                kw[name] = [int(v) for v in _parse_list(value)]
            elif name == "thetas":
                kw[name] = [float(v) for v in _parse_list(value)]
            elif name == "methods":
                kw[name] = [Method(str(v).strip().upper()) for v in _parse_list(value)]
            elif name in ("replicates", "base_seed"):
                kw[name] = int(value)
            elif name == "level":
                kw[name] = float(value)
            elif name == "intervals":
                kw[name] = str(value).strip().lower() in ("1", "true", "yes", "on")
        except (TypeError, ValueError) as exc:
            raise DataError(f"bad value for {key!r}: {value!r}") from exc
    return SimDesign(**kw)


def load_design(path) -> SimDesign:
    """Read a design from JSON or from ``key = value`` lines (``#`` comments)."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        try:
            mapping = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DataError(f"{path}: invalid JSON design: {exc}") from exc
        return design_from_mapping(mapping)
    mapping = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DataError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, value = line.split("=", 1)
        mapping[key.strip()] = value.strip()
    return design_from_mapping(mapping)

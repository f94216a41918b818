"""Command-line interface: ``ixgd {sample,fit,simulate,compare,curve}``.

Exit codes: 0 success, 1 usage or configuration error, 2 data error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import math
import sys

import numpy as np

from .distribution import Ixgd
from .errors import (
    DataError,
    DegenerateInformationError,
    DomainError,
    EstimationError,
    HazardOverflowError,
    IxgdError,
)
from .estimation import EstimateResult, Method, Sample, fit_all
from .inference import aci
from .monte_carlo import SimDesign, consistency_check, design_from_mapping, load_design, run_simulation
from .selection import compare_models

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3


class UsageError(IxgdError):
    """Invalid command-line arguments or configuration."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# ingestion


def ingest(path) -> Sample:
    """Read positive observations from a text file.

    Values may be one per line or separated by commas and/or whitespace.
    Blank lines and lines starting with ``#`` are skipped.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror or exc}") from exc
    values = []
    for lineno, line in enumerate(lines, 1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        for tok in text.replace(",", " ").split():
            try:
                v = float(tok)
            except ValueError:
                raise DataError(f"{path}:{lineno}: cannot parse {tok!r} as a number") from None
            if not math.isfinite(v) or v <= 0:
                raise DataError(f"{path}:{lineno}: value {tok} is not a finite positive number")
            values.append(v)
    if not values:
        raise DataError(f"{path}: no observations found")
    if len(values) < 2:
        raise DataError(f"{path}: need at least 2 observations, found {len(values)}")
    return Sample(values)


# ---------------------------------------------------------------------------
# formatting helpers


def _g(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _full(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _tsv(header, rows) -> str:
    out = ["\t".join(header)]
    out += ["\t".join(_full(v) for v in row) for row in rows]
    return "\n".join(out) + "\n"


def _text_table(header, rows) -> str:
    cells = [[_g(v) for v in row] for row in rows]
    widths = [max(len(h), *(len(r[j]) for r in cells)) if cells else len(h) for j, h in enumerate(header)]
    line = lambda r: "  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip()
    return "\n".join([line(header), line(["-" * w for w in widths])] + [line(r) for r in cells]) + "\n"


@contextlib.contextmanager
def _open_out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        try:
            fh = open(path, "w", encoding="utf-8", newline="\n")
        except OSError as exc:
            raise DataError(f"cannot write {path}: {exc.strerror or exc}") from exc
        with fh:
            yield fh


def _write(path, text):
    with _open_out(path) as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# argument validation


def _require(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.command} requires {', '.join(missing)}")


def _one_float(text, flag):
    try:
        v = float(text)
    except (TypeError, ValueError):
        raise UsageError(f"{flag} must be a number, got {text!r}") from None
    if not math.isfinite(v) or v <= 0:
        raise UsageError(f"{flag} must be finite and > 0, got {text!r}")
    return v


def _one_int(text, flag, minimum=1):
    try:
        v = int(text)
    except (TypeError, ValueError):
        raise UsageError(f"{flag} must be an integer, got {text!r}") from None
    if v < minimum:
        raise UsageError(f"{flag} must be >= {minimum}, got {v}")
    return v


def _methods(text):
    if text is None:
        return tuple(Method)
    try:
        return tuple(Method(t.strip().upper()) for t in text.split(",") if t.strip())
    except ValueError:
        raise UsageError(
            f"--methods must be a comma list drawn from {', '.join(m.value for m in Method)}"
        ) from None


def _level(args):
    level = 0.95 if args.level is None else args.level
    if not 0.0 < level < 1.0:
        raise UsageError(f"--level must lie in (0, 1), got {level}")
    return level


# ---------------------------------------------------------------------------
# subcommands


def cmd_sample(args) -> int:
    _require(args, "theta", "n", "seed")
    theta = _one_float(args.theta, "--theta")
    n = _one_int(args.n, "--n")
    x = Ixgd(theta).sample(n, args.seed)
    fmt = args.format or "text"
    if fmt == "json":
        text = json.dumps({"theta": theta, "n": n, "seed": args.seed, "values": x.tolist()}) + "\n"
    else:
        text = "".join(f"{v!r}\n" for v in x.tolist())
    _write(args.output, text)
    return EXIT_OK


_FIT_HEADER = [
    "method", "theta_hat", "objective_at_opt", "residual", "iterations", "converged",
    "lower", "upper", "width", "level", "error",
]


def cmd_fit(args) -> int:
    _require(args, "input")
    methods = _methods(args.methods)
    level = _level(args)
    s = ingest(args.input)
    fits = fit_all(s, methods)
    rows, doc = [], {"n": s.n, "estimates": [], "aci": None}
    for m, r in fits.items():
        if isinstance(r, EstimateResult):
            rows.append([str(m), r.theta_hat, r.objective_at_opt, r.residual, r.iterations,
                         r.converged, None, None, None, None, "; ".join(r.warnings) or None])
            doc["estimates"].append(r.to_dict())
        else:
            rows.append([str(m)] + [None] * 9 + [str(r)])
            doc["estimates"].append({"method": str(m), "error": str(r)})

    mpse = fits.get(Method.MPSE)
    try:
        if isinstance(mpse, EstimationError):
            raise mpse
        ci = aci(s, level, mpse=mpse)
        rows.append(["ACI", ci.center, None, None, None, None, ci.lower, ci.upper, ci.width, ci.level, None])
        doc["aci"] = ci.to_dict()
    except (EstimationError, DegenerateInformationError) as exc:
        rows.append(["ACI"] + [None] * 9 + [str(exc)])
        doc["aci"] = {"error": str(exc)}

    fmt = args.format or "text"
    if fmt == "json":
        text = json.dumps(doc, indent=2) + "\n"
    elif fmt == "tsv":
        text = _tsv(_FIT_HEADER, rows)
    else:
        text = _text_table(_FIT_HEADER, rows)
    _write(args.output, text)
    if all(not isinstance(r, EstimateResult) for r in fits.values()):
        return EXIT_NUMERIC
    return EXIT_OK


def _design_from_args(args) -> SimDesign:
    base = load_design(args.config) if args.config else SimDesign()
    overrides = {}
    if args.n is not None:
        overrides["sizes"] = args.n
    if args.theta is not None:
        overrides["thetas"] = args.theta
    if args.replicates is not None:
        overrides["replicates"] = args.replicates
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.methods is not None:
        overrides["methods"] = [m.value for m in _methods(args.methods)]
    if args.level is not None:
        overrides["level"] = _level(args)
    try:
        return design_from_mapping(overrides, base=base)
    except (DataError, DomainError) as exc:
        raise UsageError(str(exc)) from exc


def _sim_text(report) -> str:
    est_rows = [[c.n, c.theta, str(c.method), c.average_estimate, c.mse, c.failures] for c in report.estimates]
    iv_rows = [[c.n, c.theta, c.average_lower, c.average_upper, c.average_width, c.coverage, c.failures]
               for c in report.intervals]
    out = _text_table(["n", "theta", "method", "AV", "MSE", "failures"], est_rows)
    if iv_rows:
        out += "\n" + _text_table(["n", "theta", "L", "U", "avg_width", "coverage", "failures"], iv_rows)
    return out


def cmd_simulate(args) -> int:
    design = _design_from_args(args)
    if args.workers < 1:
        raise UsageError("--workers must be >= 1")
    report = run_simulation(design, workers=args.workers)
    prefix = args.output or "simulation"
    fmt = args.format or "all"
    if fmt in ("tsv", "all"):
        _write(prefix + "_estimates.tsv", report.estimates_tsv())
        if design.intervals:
            _write(prefix + "_intervals.tsv", report.intervals_tsv())
    if fmt in ("json", "all"):
        _write(prefix + ".json", report.to_json() + "\n")
    if fmt == "text":
        _write(prefix + ".txt", _sim_text(report))
    if len(design.sample_sizes) >= 2:
        for f in consistency_check(report):
            print(f"note: theta={f.theta:g} {f.method}: {f.message}", file=sys.stderr)
    flagged = [c for c in report.estimates if c.flagged]
    for c in flagged:
        print(f"warning: n={c.n} theta={c.theta:g} {c.method}: {c.failures} failed fits", file=sys.stderr)
    return EXIT_OK


def cmd_compare(args) -> int:
    _require(args, "input")
    s = ingest(args.input)
    report = compare_models(s)
    fmt = args.format or "text"
    if fmt == "json":
        text = report.to_json() + "\n"
    elif fmt == "tsv":
        header = ["model", "theta_hat", "neg_log_lik", "aic", "bic", "caic", "hqic", "ks", "error"]
        rows = [[r.model, r.theta_hat, r.neg_log_lik, r.aic, r.bic, r.caic, r.hqic, r.ks, r.error]
                for r in report.rows]
        text = _tsv(header, rows)
    else:
        text = report.to_text()
    _write(args.output, text)
    if all(not r.ok for r in report.rows):
        return EXIT_NUMERIC
    return EXIT_OK


CURVE_COLUMNS = ["x", "pdf", "cdf", "survival", "hazard", "reverse_hazard"]


def curve_table(theta: float, points: int = 500, xmin=None, xmax=None, spacing: str = "log") -> np.ndarray:
    """Grid of x with pdf, cdf, survival, hazard and reverse hazard columns."""
    d = Ixgd(theta)
    lo = d.quantile(0.001) if xmin is None else xmin
    hi = d.quantile(0.999) if xmax is None else xmax
    if not 0 < lo < hi:
        raise UsageError(f"curve range must satisfy 0 < xmin < xmax, got [{lo}, {hi}]")
    x = np.geomspace(lo, hi, points) if spacing == "log" else np.linspace(lo, hi, points)
    return np.column_stack([x, d.pdf(x), d.cdf(x), d.survival(x), d.hazard(x), d.reverse_hazard(x)])


def cmd_curve(args) -> int:
    _require(args, "theta")
    theta = _one_float(args.theta, "--theta")
    if args.points < 2:
        raise UsageError("--points must be >= 2")
    table = curve_table(theta, args.points, args.xmin, args.xmax, args.spacing)
    fmt = args.format or "tsv"
    if fmt == "json":
        text = json.dumps({"theta": theta, **{c: table[:, j].tolist() for j, c in enumerate(CURVE_COLUMNS)}}) + "\n"
    elif fmt == "text":
        text = _text_table(CURVE_COLUMNS, [[float(v) for v in row] for row in table])
    else:
        text = _tsv(CURVE_COLUMNS, [[float(v) for v in row] for row in table])
    _write(args.output, text)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ixgd", description="Inverse xgamma distribution toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, formats):
        p.add_argument("--input", help="data file (one value per line, or comma/space separated)")
        p.add_argument("--output", help="output path ('-' or omitted: stdout)")
        p.add_argument("--theta", help="distribution parameter")
        p.add_argument("--n", help="sample size")
        p.add_argument("--seed", type=int, help="random seed")
        p.add_argument("--replicates", type=int, help="Monte Carlo replicates")
        p.add_argument("--level", type=float, help="confidence level (default 0.95)")
        p.add_argument("--methods", help="comma list of MLE,LSE,WLSE,CME,MPSE")
        p.add_argument("--format", choices=formats)
        return p

    common(sub.add_parser("sample", help="draw IXGD variates"), ["text", "json"])
    common(sub.add_parser("fit", help="estimate theta and the asymptotic interval"), ["text", "tsv", "json"])
    sim = common(sub.add_parser("simulate", help="Monte Carlo study (estimates and intervals)"),
                 ["all", "tsv", "json", "text"])
    sim.add_argument("--config", help="design file: JSON or key=value lines")
    sim.add_argument("--workers", type=int, default=1, help="worker processes")
    common(sub.add_parser("compare", help="compare IXGD with IED, ILD and IRD"), ["text", "tsv", "json"])
    curve = common(sub.add_parser("curve", help="tabulate pdf, cdf, survival and hazards"), ["tsv", "json", "text"])
    curve.add_argument("--points", type=int, default=500)
    curve.add_argument("--xmin", type=float)
    curve.add_argument("--xmax", type=float)
    curve.add_argument("--spacing", choices=["log", "linear"], default="log")
    return parser


_COMMANDS = {
    "sample": cmd_sample,
    "fit": cmd_fit,
    "simulate": cmd_simulate,
    "compare": cmd_compare,
    "curve": cmd_curve,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"ixgd {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"ixgd {args.command}: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except DomainError as exc:
        print(f"ixgd {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EstimationError, DegenerateInformationError, HazardOverflowError, FloatingPointError) as exc:
        print(f"ixgd {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

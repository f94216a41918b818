"""Inverse xgamma distribution: properties, estimation, intervals, simulation
and model comparison."""

from .distribution import Ixgd, OrderSpec, Xgd
from .errors import (
    DataError,
    DegenerateInformationError,
    DomainError,
    EstimationError,
    HazardOverflowError,
    IxgdError,
    MomentNotFiniteError,
)
from .estimation import (
    EstimateResult,
    Method,
    Sample,
    Spacings,
    eta1,
    fit,
    fit_all,
    fit_cme,
    fit_lse,
    fit_mle,
    fit_mpse,
    fit_wlse,
    log_likelihood,
    score,
    spacings,
)
from .inference import ConfidenceInterval, aci, interval_batch_stats, observed_information
from .monte_carlo import SimDesign, SimReport, consistency_check, run_simulation
from .rivals import RivalKind, RivalModel, rival_mle
from .selection import FitReport, compare_models, info_criteria, ks_statistic

__version__ = "0.1.0"

__all__ = [
    "Ixgd", "Xgd", "OrderSpec",
    "Sample", "Method", "EstimateResult", "Spacings",
    "log_likelihood", "score", "eta1", "spacings",
    "fit", "fit_all", "fit_mle", "fit_lse", "fit_wlse", "fit_cme", "fit_mpse",
    "ConfidenceInterval", "observed_information", "aci", "interval_batch_stats",
    "RivalKind", "RivalModel", "rival_mle",
    "FitReport", "ks_statistic", "info_criteria", "compare_models",
    "SimDesign", "SimReport", "run_simulation", "consistency_check",
    "IxgdError", "DomainError", "MomentNotFiniteError", "HazardOverflowError",
    "DataError", "EstimationError", "DegenerateInformationError",
]

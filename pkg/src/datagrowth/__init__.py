"""Balanced-growth solver for an endogenous-growth economy where data are used
in both production and innovation."""

__version__ = "0.1.0"

from .curves import (
    ADDITIONAL_PRIVACY,
    CR_DECENTRALIZED,
    CR_PLANNER,
    DECENTRALIZED,
    INNOVATION_ONLY,
    PLANNER,
    PRODUCTION_ONLY,
    CurveDomain,
    Regime,
    RegimeKind,
    curve_domain,
    curve_pair,
    labor_share,
)
from .dynamics import TimePath, bgp_time_path, cumulative_privacy_path
from .errors import (
    BracketFailure,
    DegenerateDomain,
    DomainError,
    GammaShareError,
    MissingRegimeError,
    ModelError,
    NonpositiveGrowthError,
    RangeError,
    StepError,
    VerificationFailure,
)
from .params import BASELINE, ModelParams, load_params, markup_factor, profit_share, validate_params
from .policy import SubsidyScheme, factor_subsidies, revenue_subsidies, verify_restoration
from .solver import (
    BgpSolution,
    SolverConfig,
    production_only_closed_form,
    solve_bgp,
    uniqueness_scan,
    verify_solution,
)
from .sweep import SweepSpec, SweepTable, gap_metrics, run_sweep

__all__ = [
    "__version__",
    "ADDITIONAL_PRIVACY",
    "CR_DECENTRALIZED",
    "CR_PLANNER",
    "DECENTRALIZED",
    "INNOVATION_ONLY",
    "PLANNER",
    "PRODUCTION_ONLY",
    "CurveDomain",
    "Regime",
    "RegimeKind",
    "curve_domain",
    "curve_pair",
    "labor_share",
    "TimePath",
    "bgp_time_path",
    "cumulative_privacy_path",
    "BracketFailure",
    "DegenerateDomain",
    "DomainError",
    "GammaShareError",
    "MissingRegimeError",
    "ModelError",
    "NonpositiveGrowthError",
    "RangeError",
    "StepError",
    "VerificationFailure",
    "BASELINE",
    "ModelParams",
    "load_params",
    "markup_factor",
    "profit_share",
    "validate_params",
    "SubsidyScheme",
    "factor_subsidies",
    "revenue_subsidies",
    "verify_restoration",
    "BgpSolution",
    "SolverConfig",
    "production_only_closed_form",
    "solve_bgp",
    "uniqueness_scan",
    "verify_solution",
    "SweepSpec",
    "SweepTable",
    "gap_metrics",
    "run_sweep",
]

"""Subsidies that move the market economy onto the planner's growth path."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .curves import Regime, RegimeKind
from .errors import GammaShareError, RangeError
from .params import ModelParams, markup_factor, profit_share
from .solver import BgpSolution, SolverConfig, solve_bgp

__all__ = [
    "SchemeKind",
    "SubsidyScheme",
    "revenue_subsidies",
    "factor_subsidies",
    "verify_restoration",
    "factor_restoration_residuals",
    "RestorationReport",
]

RESTORATION_TOL = 1e-6


class SchemeKind(str, Enum):
    REVENUE = "revenue"
    FACTOR = "factor"


@dataclass(frozen=True)
class SubsidyScheme:
    """Revenue subsidies ``(s_p, s_n)`` or factor subsidies ``(s_d1, s_d2, s_l)``.

    Rates are stored as subsidy rates ``s``; the formulas are stated in terms
    of ``1 + s`` (revenue) and ``1 - s`` (factor), exposed as properties.
    """

    kind: SchemeKind
    s_p: float | None = None
    s_n: float | None = None
    s_d1: float | None = None
    s_d2: float | None = None
    s_l: float | None = None

    @classmethod
    def revenue(cls, s_p: float, s_n: float) -> "SubsidyScheme":
        return cls(SchemeKind.REVENUE, s_p=s_p, s_n=s_n)

    @classmethod
    def factor(cls, s_d1: float, s_d2: float, s_l: float) -> "SubsidyScheme":
        return cls(SchemeKind.FACTOR, s_d1=s_d1, s_d2=s_d2, s_l=s_l)

    @property
    def one_plus_sp(self):
        return None if self.s_p is None else 1.0 + self.s_p

    @property
    def one_plus_sn(self):
        return None if self.s_n is None else 1.0 + self.s_n

    @property
    def one_minus_sd1(self):
        return None if self.s_d1 is None else 1.0 - self.s_d1

    @property
    def one_minus_sd2(self):
        return None if self.s_d2 is None else 1.0 - self.s_d2

    @property
    def one_minus_sl(self):
        return None if self.s_l is None else 1.0 - self.s_l

    def as_dict(self) -> dict:
        out = {"kind": self.kind.value}
        for name in ("s_p", "s_n", "s_d1", "s_d2", "s_l"):
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        return out


def _require_share(p: ModelParams) -> float:
    share = profit_share(p)
    if not share > 0.0:
        raise GammaShareError(share)
    return share


def revenue_subsidies(p: ModelParams, planner: BgpSolution) -> SubsidyScheme:
    """Production and innovation revenue subsidies built from the planner's growth rate."""
    share = _require_share(p)
    one_plus_sp = p.gamma / (p.gamma - 1.0)
    one_plus_sn = (p.rho + planner.g_n) / (p.rho * share * (p.gamma - 1.0) * one_plus_sp)
    return SubsidyScheme.revenue(one_plus_sp - 1.0, one_plus_sn - 1.0)


def factor_subsidies(p: ModelParams, planner: BgpSolution) -> SubsidyScheme:
    """Data subsidies for both sectors plus an innovation labour subsidy."""
    share = _require_share(p)
    keep_d1 = markup_factor(p)
    keep_d2 = p.rho * (p.gamma - 1.0) * share / (p.rho + planner.g_n)
    keep_l = keep_d2 / keep_d1
    for name, keep in (("1-s_d2", keep_d2), ("1-s_l", keep_l)):
        if not 0.0 < keep < 1.0:
            raise RangeError(name, keep, "must lie in (0, 1)")
    return SubsidyScheme.factor(1.0 - keep_d1, 1.0 - keep_d2, 1.0 - keep_l)


@dataclass(frozen=True)
class RestorationReport:
    d_subsidized: float
    g_subsidized: float
    d_planner: float
    g_planner: float
    rel_gap_d: float
    rel_gap_g: float
    tolerance: float = RESTORATION_TOL

    @property
    def passed(self) -> bool:
        return self.rel_gap_d <= self.tolerance and self.rel_gap_g <= self.tolerance


def verify_restoration(
    p: ModelParams,
    scheme: SubsidyScheme,
    planner: BgpSolution,
    cfg: SolverConfig | None = None,
    tol: float = RESTORATION_TOL,
) -> RestorationReport:
    """Solve the subsidized market economy and compare it with ``planner``."""
    if scheme.kind is not SchemeKind.REVENUE:
        raise ValueError("only revenue schemes have an equilibrium solve; use factor_restoration_residuals")
    sol = solve_bgp(Regime(RegimeKind.SUBSIDIZED, scheme), p, cfg)
    return RestorationReport(
        d_subsidized=sol.d,
        g_subsidized=sol.g_n,
        d_planner=planner.d,
        g_planner=planner.g_n,
        rel_gap_d=abs(sol.d - planner.d) / planner.d,
        rel_gap_g=abs(sol.g_n - planner.g_n) / planner.g_n,
        tolerance=tol,
    )


def factor_restoration_residuals(p: ModelParams, scheme: SubsidyScheme, planner: BgpSolution) -> dict:
    """Residuals of the factor-subsidy market conditions evaluated at the planner path.

    Two conditions close the subsidized market economy: the data-supply
    condition ``Gamma*g/(rho+g) = (kappa*d^2 - m*eta/(1-s_d1)) * (1-s_d2)/xi``
    and the labour split
    ``l/(1-l) = (1-xi)/xi * (kappa*d^2 - m*eta/(1-s_d1)) / m * (1-s_d2)/(1-s_l)``
    with ``m = 1 - 1/gamma``. Both must hold at ``(d_s, g_Ns, l_Rs)``.
    """
    if scheme.kind is not SchemeKind.FACTOR:
        raise ValueError("expected a factor scheme")
    share = profit_share(p)
    m = markup_factor(p)
    g, d, l_r = planner.g_n, planner.d, planner.l_r
    x = p.kappa * d * d - m * p.eta / scheme.one_minus_sd1
    lhs_data = share * g / (p.rho + g)
    rhs_data = x * scheme.one_minus_sd2 / p.xi
    lhs_labor = l_r / (1.0 - l_r)
    rhs_labor = (1.0 - p.xi) / p.xi * x / m * scheme.one_minus_sd2 / scheme.one_minus_sl
    return {
        "data_supply": abs(lhs_data - rhs_data) / abs(lhs_data),
        "labor_split": abs(lhs_labor - rhs_labor) / abs(lhs_labor),
    }

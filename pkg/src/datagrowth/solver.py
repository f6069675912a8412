"""Balanced-growth-path solver.

The nontrivial intersection of a regime's curve pair is found as a root of
``F(d) = g1(d) - g2(d)``. ``F`` vanishes trivially at the lower end of the
domain, dips below zero just above it (``g2`` has infinite slope there) and is
eventually positive, either because ``g1`` grows like ``d**2`` while ``g2`` is
bounded by ``eps*L*d**xi`` or because ``g1`` has a vertical asymptote. The
solver brackets that sign change, refines it with safeguarded regula falsi and
packages the result with its diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import kernels
from .curves import (
    CurveCoeffs,
    Regime,
    RegimeKind,
    curve_coeffs,
    curve_domain,
    production_only_values,
)
from .errors import BracketFailure, NonpositiveGrowthError, VerificationFailure
from .params import ModelParams, validate_params

__all__ = [
    "SolverConfig",
    "BgpSolution",
    "ScanResult",
    "VerificationReport",
    "bracket_root",
    "uniqueness_scan",
    "solve_bgp",
    "verify_solution",
    "production_only_closed_form",
]


@dataclass(frozen=True)
class SolverConfig:
    rel_tol_d: float = 1e-12
    abs_tol_f: float = 1e-11
    bracket_start_offset: float = 1e-6
    bracket_growth: float = 2.0
    max_expansions: int = 200
    scan_points: int = 512
    max_iterations: int = 500

    def __post_init__(self):
        for name in ("rel_tol_d", "abs_tol_f", "bracket_start_offset"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive")
        if not self.bracket_growth > 1.0:
            raise ValueError("bracket_growth must exceed 1")
        if self.max_expansions < 1 or self.max_iterations < 1:
            raise ValueError("iteration limits must be at least 1")
        if self.scan_points < 2:
            raise ValueError("scan_points must be at least 2")


DEFAULT_CONFIG = SolverConfig()


@dataclass(frozen=True)
class BgpSolution:
    """A solved balanced growth path plus solver diagnostics.

    ``output_coeff`` is the constant ``Y(t) / N(t)**n_exponent`` on the path;
    ``n_exponent`` is ``1/(gamma-1)`` except under constant-returns production.
    """

    regime: Regime
    d: float
    g_n: float
    l_r: float
    g_y: float
    output_coeff: float
    residual_f: float
    bracket: tuple[float, float]
    corner: bool = False
    unique: bool = True
    n_exponent: float = 0.0
    iterations: int = 0
    sign_changes: tuple = field(default=(), repr=False)

    @property
    def regime_name(self) -> str:
        return self.regime.name

    def as_row(self) -> dict:
        """Flat record used by the table writers."""
        row = {k: v for k, v in asdict(self).items() if k not in ("regime", "bracket", "sign_changes")}
        row["regime"] = self.regime.name
        row["bracket_lo"], row["bracket_hi"] = self.bracket
        return row


@dataclass(frozen=True)
class ScanResult:
    unique: bool
    intervals: list
    points: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)

    def __bool__(self):
        return self.unique


@dataclass(frozen=True)
class VerificationReport:
    residuals: dict
    tolerance: float

    @property
    def passed(self) -> bool:
        return all(v <= self.tolerance for v in self.residuals.values())


def _config(cfg):
    return DEFAULT_CONFIG if cfg is None else cfg


def _f(d: float, c: CurveCoeffs) -> float:
    _, g1, g2, _ = kernels.eval_pair(d, *c)
    return g1 - g2


def _start_point(c: CurveCoeffs, d_lo: float, cfg: SolverConfig) -> float:
    if d_lo > 0.0:
        return d_lo * (1.0 + cfg.bracket_start_offset)
    # no data-free production use: scale by the d at which l_R/l_E = 1
    return cfg.bracket_start_offset / math.sqrt(c.r * c.kappa)


def _bracket(regime: Regime, p: ModelParams, cfg: SolverConfig):
    c = curve_coeffs(regime, p)
    dom = curve_domain(regime, p)
    lo = _start_point(c, dom.d_lo, cfg)
    flo = _f(lo, c)
    samples = [(lo, flo)]
    if not flo < 0.0:
        raise BracketFailure(
            f"{regime.name}: F(d_lo*(1+offset)) = {flo:.6g} is not negative; "
            "no interior crossing next to the trivial root",
            samples,
        )
    if dom.bounded:
        gap = dom.d_hi - lo
        for k in range(1, cfg.max_expansions + 1):
            hi = dom.d_hi - gap / cfg.bracket_growth**k
            if not lo < hi < dom.d_hi:
                break
            fhi = _f(hi, c)
            samples.append((hi, fhi))
            if fhi > 0.0:
                return c, lo, hi, flo, fhi, samples
            lo, flo = hi, fhi
    else:
        hi = lo
        for _ in range(cfg.max_expansions):
            hi = hi * cfg.bracket_growth
            fhi = _f(hi, c)
            samples.append((hi, fhi))
            if fhi > 0.0:
                return c, lo, hi, flo, fhi, samples
            if not fhi < 0.0:
                break
            lo, flo = hi, fhi
    raise BracketFailure(
        f"{regime.name}: no sign change of g1-g2 after {len(samples) - 1} expansions",
        samples,
    )


def bracket_root(regime: Regime, p: ModelParams, cfg: SolverConfig | None = None) -> tuple[float, float]:
    """Return ``(lo, hi)`` inside the regime's domain with ``F(lo) < 0 < F(hi)``."""
    _, lo, hi, _, _, _ = _bracket(regime, p, _config(cfg))
    return lo, hi


def _scan_upper(c: CurveCoeffs, dom, start: float) -> float:
    if dom.bounded:
        return dom.d_hi - (dom.d_hi - start) * 1e-9
    # beyond this point a*x > eps*L*d**xi >= g2, so F cannot change sign again
    d = max(2.0 * start, 1.0)
    while c.a * (c.kappa * d * d - c.c0) <= c.eps_l * d**c.xi:
        d *= 2.0
    return 2.0 * d


def uniqueness_scan(regime: Regime, p: ModelParams, cfg: SolverConfig | None = None) -> ScanResult:
    """Sample ``F`` on a log grid above the trivial root and list its sign changes."""
    cfg = _config(cfg)
    c = curve_coeffs(regime, p)
    dom = curve_domain(regime, p)
    start = _start_point(c, dom.d_lo, cfg)
    upper = _scan_upper(c, dom, start)
    pts = np.geomspace(start, upper, cfg.scan_points)
    vals = kernels.f_values(pts, *c)
    positive = vals > 0.0
    idx = np.flatnonzero(positive[1:] != positive[:-1])
    intervals = [(float(pts[i]), float(pts[i + 1])) for i in idx]
    return ScanResult(len(intervals) == 1, intervals, pts, vals)


def _output_level(regime: Regime, p: ModelParams, d: float, l_r: float) -> tuple[float, float]:
    """``(n_exponent, coefficient)`` of ``Y(t) = coefficient * N(t)**n_exponent``."""
    kind = regime.kind
    base = 1.0 / (p.gamma - 1.0)
    if kind is RegimeKind.INNOVATION_ONLY:
        return base, (1.0 - l_r) * p.bigL
    if kind in (RegimeKind.CR_PLANNER, RegimeKind.CR_DECENTRALIZED):
        theta = p.theta
        return base + theta, (1.0 - l_r) ** (1.0 - theta) * p.bigL * d**theta
    return base, (1.0 - l_r) * d**p.eta * p.bigL ** (1.0 + p.eta)


def _growth_of_output(regime: Regime, p: ModelParams, g_n: float, n_exponent: float) -> float:
    if regime.kind in (RegimeKind.CR_PLANNER, RegimeKind.CR_DECENTRALIZED):
        return n_exponent * g_n
    return g_n / (p.gamma - 1.0)


def production_only_closed_form(p: ModelParams) -> BgpSolution:
    """BGP when data enter production only: everything is explicit."""
    validate_params(p)
    if not p.eps_l > (p.gamma - 1.0) * p.rho:
        raise NonpositiveGrowthError(
            f"eps*L = {p.eps_l:.6g} must exceed (gamma-1)*rho = {(p.gamma - 1.0) * p.rho:.6g}"
        )
    d, g, l_r = production_only_values(p)
    coeff = (p.rho * (p.gamma - 1.0) / p.epsilon) * (p.eta / p.kappa) ** (p.eta / 2.0) * p.bigL ** (1.0 + p.eta)
    regime = Regime(RegimeKind.PRODUCTION_ONLY)
    return BgpSolution(
        regime=regime,
        d=d,
        g_n=g,
        l_r=l_r,
        g_y=g / (p.gamma - 1.0),
        output_coeff=coeff,
        residual_f=0.0,
        bracket=(d, d),
        unique=True,
        n_exponent=1.0 / (p.gamma - 1.0),
    )


def solve_bgp(
    regime: Regime,
    p: ModelParams,
    cfg: SolverConfig | None = None,
    d_cap: float | None = None,
) -> BgpSolution:
    """Solve ``regime`` under ``p``.

    ``d_cap`` is an optional ceiling on available data; when the interior
    solution exceeds it the solution is flagged ``corner`` (not re-solved).
    If the scan finds several crossings the smallest is returned with
    ``unique=False``.
    """
    cfg = _config(cfg)
    validate_params(p, regime)
    if regime.kind is RegimeKind.PRODUCTION_ONLY:
        sol = production_only_closed_form(p)
        if d_cap is not None and sol.d > d_cap:
            sol = replace(sol, corner=True)
        return sol

    c, lo, hi, flo, fhi, _ = _bracket(regime, p, cfg)
    scan = uniqueness_scan(regime, p, cfg)
    rising = [(a, b) for a, b in scan.intervals if _f(a, c) < 0.0 < _f(b, c)]
    if len(scan.intervals) > 1 and rising and rising[0][0] < lo:
        lo, hi = rising[0]
        flo, fhi = _f(lo, c), _f(hi, c)

    d, _, iters = kernels.refine_root(
        lo, hi, flo, fhi, *c, cfg.rel_tol_d, cfg.abs_tol_f, cfg.max_iterations
    )
    _, g1, g2, ell = kernels.eval_pair(d, *c)
    n_exp, coeff = _output_level(regime, p, d, ell)
    return BgpSolution(
        regime=regime,
        d=d,
        g_n=g2,
        l_r=ell,
        g_y=_growth_of_output(regime, p, g2, n_exp),
        output_coeff=coeff,
        residual_f=abs(g1 - g2),
        bracket=(lo, hi),
        corner=d_cap is not None and d > d_cap,
        unique=scan.unique,
        n_exponent=n_exp,
        iterations=iters,
        sign_changes=tuple(scan.intervals),
    )


def _rel(a: float, b: float) -> float:
    scale = max(abs(a), abs(b), 1e-300)
    return abs(a - b) / scale


def verify_solution(sol: BgpSolution, p: ModelParams, tol: float = 1e-9) -> VerificationReport:
    """Re-check the BGP identities at ``sol``; raise :class:`VerificationFailure` if any fails.

    The curve values are recomputed through :mod:`datagrowth.curves` rather
    than the kernel that produced ``sol``.
    """
    from . import curves

    res = {}
    if sol.regime.kind is RegimeKind.PRODUCTION_ONLY:
        res["data_foc"] = _rel(p.eta / sol.d, p.kappa * sol.d)
        res["labor_foc"] = _rel(
            sol.l_r / (1.0 - sol.l_r), p.eps_l * sol.l_r / ((p.gamma - 1.0) * p.rho)
        )
        res["frontier"] = _rel(sol.g_n, p.eps_l * sol.l_r)
    else:
        g1, g2 = curves.curve_pair(sol.regime, sol.d, p)
        res["curve_gap"] = abs(g1 - g2) / max(abs(sol.g_n), 1e-300)
        res["required_growth"] = _rel(g1, sol.g_n)
        res["labor_share"] = _rel(curves.labor_share(sol.regime, sol.d, p), sol.l_r)
        res["frontier"] = _rel(p.eps_l * sol.l_r ** (1.0 - p.xi) * sol.d**p.xi, sol.g_n)
    res["output_growth"] = _rel(sol.g_y / sol.n_exponent, sol.g_n)
    report = VerificationReport(res, tol)
    if not report.passed:
        raise VerificationFailure({k: v for k, v in res.items() if v > tol})
    return report

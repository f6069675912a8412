"""One-parameter sweeps across regimes, plus planner-versus-market gap metrics."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .curves import DECENTRALIZED, PLANNER, Regime, RegimeKind
from .errors import MissingRegimeError, ModelError
from .params import BASELINE, ModelParams, validate_params
from .solver import DEFAULT_CONFIG, BgpSolution, SolverConfig, solve_bgp, verify_solution

__all__ = [
    "SWEEP_PARAMS",
    "DEFAULT_GRIDS",
    "SweepSpec",
    "SweepRow",
    "SweepTable",
    "GapSummary",
    "run_sweep",
    "gap_metrics",
    "classify_direction",
    "default_regimes",
]

SWEEP_PARAMS = ("eta", "xi", "kappa", "theta", "alpha")

DEFAULT_GRIDS = {
    "eta": tuple(np.linspace(0.02, 0.30, 25)),
    "xi": tuple(np.linspace(0.10, 0.90, 25)),
    "kappa": tuple(np.linspace(0.05, 0.50, 25)),
    "theta": tuple(np.linspace(0.02, 0.30, 25)),
    "alpha": (0.0, 0.002, 0.004, 0.006, 0.008, 0.010),
}

VARIABLES = ("g_n", "d", "l_r")


@dataclass(frozen=True)
class SweepSpec:
    param: str
    grid: tuple
    regimes: tuple = (PLANNER, DECENTRALIZED)
    base: ModelParams = BASELINE
    cfg: SolverConfig = DEFAULT_CONFIG

    def __post_init__(self):
        if self.param not in SWEEP_PARAMS:
            raise ValueError(f"cannot sweep {self.param!r}; choose one of {', '.join(SWEEP_PARAMS)}")
        grid = tuple(float(v) for v in self.grid)
        if not grid:
            raise ValueError("grid must be non-empty")
        if any(not math.isfinite(v) for v in grid):
            raise ValueError("grid values must be finite")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("grid must be strictly increasing")
        regimes = tuple(self.regimes)
        if not regimes:
            raise ValueError("at least one regime is required")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "regimes", regimes)

    @classmethod
    def default(cls, param: str, regimes=(PLANNER, DECENTRALIZED), base=BASELINE, cfg=DEFAULT_CONFIG):
        return cls(param, DEFAULT_GRIDS[param], tuple(regimes), base, cfg)


@dataclass(frozen=True)
class SweepRow:
    value: float
    regime: Regime
    solution: BgpSolution | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.solution is not None

    def get(self, var: str) -> float:
        return getattr(self.solution, var) if self.solution is not None else math.nan


@dataclass(frozen=True)
class SweepTable:
    spec: SweepSpec
    rows: tuple
    gaps: dict = field(default_factory=dict)

    @property
    def all_ok(self) -> bool:
        return all(r.ok for r in self.rows)

    def failures(self) -> list:
        return [r for r in self.rows if not r.ok]

    def column(self, regime: Regime, var: str) -> np.ndarray:
        """Values of ``var`` for ``regime`` along the grid, NaN where the solve failed."""
        return np.array([r.get(var) for r in self.rows if r.regime == regime])


def _solve_row(param: str, value: float, regime: Regime, base: ModelParams, cfg: SolverConfig) -> SweepRow:
    try:
        p = validate_params(base.replace(**{param: value}), regime)
        sol = solve_bgp(regime, p, cfg)
        verify_solution(sol, p)
    except (ModelError, ValueError, ArithmeticError) as exc:
        return SweepRow(value, regime, None, f"{type(exc).__name__}: {exc}")
    return SweepRow(value, regime, sol, None)


def _solve_task(args):
    return _solve_row(*args)


def _gap_columns(spec: SweepSpec, rows) -> dict:
    if PLANNER not in spec.regimes or DECENTRALIZED not in spec.regimes:
        return {}
    by_key = {(r.value, r.regime): r for r in rows}
    out = {}
    for v in spec.grid:
        s, c = by_key[(v, PLANNER)], by_key[(v, DECENTRALIZED)]
        if s.ok and c.ok:
            out[v] = {
                "delta_d": s.solution.d - c.solution.d,
                "delta_g_n": s.solution.g_n - c.solution.g_n,
                "delta_l_r": s.solution.l_r - c.solution.l_r,
            }
    return out


def run_sweep(spec: SweepSpec, workers: int | None = None) -> SweepTable:
    """Solve every (grid point, regime) pair; failures become tagged rows.

    Row order is grid-major, regime-minor, whatever ``workers`` is.
    """
    tasks = [(spec.param, v, reg, spec.base, spec.cfg) for v in spec.grid for reg in spec.regimes]
    if workers and workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = tuple(pool.map(_solve_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        rows = tuple(_solve_row(*t) for t in tasks)
    return SweepTable(spec, rows, _gap_columns(spec, rows))


def classify_direction(values) -> str:
    """'increasing', 'decreasing', 'constant' or 'mixed' for a finite sequence."""
    v = np.asarray([x for x in values if math.isfinite(x)], dtype=float)
    if v.size < 2:
        return "constant"
    diff = np.diff(v)
    if np.all(diff > 0):
        return "increasing"
    if np.all(diff < 0):
        return "decreasing"
    if np.all(diff == 0):
        return "constant"
    return "mixed"


@dataclass(frozen=True)
class GapSummary:
    values: tuple
    delta_d: tuple
    delta_g_n: tuple
    delta_l_r: tuple
    directions: dict


def gap_metrics(table: SweepTable) -> GapSummary:
    regimes = set(table.spec.regimes)
    missing = [r.name for r in (PLANNER, DECENTRALIZED) if r not in regimes]
    if missing:
        raise MissingRegimeError(f"gap metrics need planner and decentralized rows; missing {', '.join(missing)}")
    values = tuple(sorted(table.gaps))
    cols = {k: tuple(table.gaps[v][k] for v in values) for k in ("delta_d", "delta_g_n", "delta_l_r")}
    directions = {k: classify_direction(c) for k, c in cols.items()}
    return GapSummary(values, cols["delta_d"], cols["delta_g_n"], cols["delta_l_r"], directions)


def default_regimes(param: str) -> tuple:
    """Regimes that make a sweep over ``param`` meaningful by default."""
    if param == "theta":
        return (Regime(RegimeKind.CR_PLANNER), Regime(RegimeKind.CR_DECENTRALIZED))
    if param == "alpha":
        return (Regime(RegimeKind.ADDITIONAL_PRIVACY), Regime(RegimeKind.PRODUCTION_ONLY), Regime(RegimeKind.INNOVATION_ONLY))
    return (PLANNER, DECENTRALIZED)

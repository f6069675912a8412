"""Time paths: exponential BGP paths and the cumulative-privacy trajectory.

When privacy costs accumulate over every variety in use, the data-utility
closure ``kappa * N(t) * d(t)**2 = eta + xi/(1-xi) * l_R/(1-l_R)`` ties data
per capita to the stock of varieties, and variety growth

    dN/dt = eps * L * l_R**(1-xi) * d(N)**xi * N

slows as ``N`` rises. With ``l_R`` held fixed the ODE is one-dimensional and is
integrated with classical fixed-step RK4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .curves import PLANNER
from .errors import RangeError, StepError
from .params import ModelParams, validate_params
from .solver import BgpSolution, solve_bgp

__all__ = [
    "TimePath",
    "bgp_time_path",
    "cumulative_privacy_path",
    "closure_constant",
    "richardson_ratio",
]


@dataclass(frozen=True)
class TimePath:
    t: np.ndarray
    n_level: np.ndarray
    y_level: np.ndarray
    d_path: np.ndarray
    g_n_path: np.ndarray

    def __len__(self):
        return self.t.shape[0]

    def columns(self) -> dict[str, np.ndarray]:
        return {
            "t": self.t,
            "n_level": self.n_level,
            "y_level": self.y_level,
            "d_path": self.d_path,
            "g_n_path": self.g_n_path,
        }


def bgp_time_path(sol: BgpSolution, p: ModelParams, n0: float, t_grid) -> TimePath:
    """N(t) = n0 * exp(g_N t) and the matching output level along a solved BGP."""
    if not n0 > 0.0:
        raise RangeError("n0", n0, "initial varieties must be positive")
    t = np.asarray(t_grid, dtype=np.float64)
    if t.ndim != 1 or t.size == 0 or np.any(np.diff(t) <= 0.0):
        raise ValueError("t_grid must be a non-empty strictly increasing 1-D sequence")
    n = n0 * np.exp(sol.g_n * t)
    y = sol.output_coeff * n**sol.n_exponent
    return TimePath(t, n, y, np.full_like(t, sol.d), np.full_like(t, sol.g_n))


def closure_constant(p: ModelParams, l_r: float) -> float:
    """``N(t) * d(t)**2`` along the cumulative-privacy path."""
    return (p.eta + p.xi / (1.0 - p.xi) * l_r / (1.0 - l_r)) / p.kappa


def _integrate(p: ModelParams, l_r: float, n0: float, step: float, n_steps: int) -> np.ndarray:
    pref = p.eps_l * l_r ** (1.0 - p.xi)
    levels, status, failed = kernels.rk4_cumulative(
        float(n0), float(step), int(n_steps), pref, closure_constant(p, l_r), 0.5 * p.xi
    )
    if status != kernels.STEP_OK:
        raise StepError(
            f"RK4 step {failed} (t={failed * step:.6g}) stayed non-finite after 20 step halvings"
        )
    return levels


def cumulative_privacy_path(
    p: ModelParams,
    l_r: float | None = None,
    n0: float = 1.0,
    horizon: float = 150.0,
    step: float = 0.01,
) -> TimePath:
    """Integrate the cumulative-privacy economy from ``N(0) = n0``.

    ``l_r`` defaults to the planner's BGP labour share under ``p``. The grid
    is ``t_k = k * step`` for ``k = 0..round(horizon/step)``.
    """
    validate_params(p)
    if l_r is None:
        l_r = solve_bgp(PLANNER, p).l_r
    if not 0.0 < l_r < 1.0:
        raise RangeError("l_r", l_r, "labour share must lie in (0, 1)")
    if not n0 > 0.0:
        raise RangeError("n0", n0, "initial varieties must be positive")
    if not (step > 0.0 and math.isfinite(step)):
        raise RangeError("step", step, "must be positive")
    if not horizon > 0.0:
        raise RangeError("horizon", horizon, "must be positive")
    n_steps = max(1, int(round(horizon / step)))

    n = _integrate(p, l_r, n0, step, n_steps)
    t = np.arange(n_steps + 1, dtype=np.float64) * step
    d = np.sqrt(closure_constant(p, l_r) / n)
    g = p.eps_l * l_r ** (1.0 - p.xi) * d**p.xi
    y = n ** (1.0 / (p.gamma - 1.0)) * (1.0 - l_r) * d**p.eta * p.bigL ** (1.0 + p.eta)
    return TimePath(t, n, y, d, g)


def richardson_ratio(
    p: ModelParams,
    l_r: float,
    n0: float = 1.0,
    horizon: float = 10.0,
    step: float = 0.1,
    refine: int = 10,
) -> float:
    """Terminal-error ratio err(step) / err(step/2) against a ``refine``-times finer run.

    Close to 16 for a fourth-order method in its asymptotic range.
    """
    n_steps = max(1, int(round(horizon / step)))
    coarse = _integrate(p, l_r, n0, step, n_steps)[-1]
    half = _integrate(p, l_r, n0, step / 2.0, 2 * n_steps)[-1]
    ref = _integrate(p, l_r, n0, step / refine, refine * n_steps)[-1]
    return abs(coarse - ref) / abs(half - ref)

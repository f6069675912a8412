"""BGP curve pairs for every regime.

For each regime two curves of per-capita data ``d`` meet on the balanced growth
path: ``g1(d)``, the variety growth rate households require to accept the
privacy cost of sharing ``d``, and ``g2(d)``, the growth rate the innovation
frontier delivers when labour is split as the regime dictates.

All regimes share one algebraic shape (see ``_pykernels``), so a regime is
reduced to a :class:`CurveCoeffs` record. Variants that are pure parameter
transformations (extra privacy cost, zero subsidies, eta -> 0) therefore
reproduce their base curves exactly, not just approximately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

from . import kernels
from .errors import DegenerateDomain, DomainError, GammaShareError, RangeError
from .params import ModelParams, markup_factor, profit_share

__all__ = [
    "RegimeKind",
    "Regime",
    "CurveCoeffs",
    "CurveDomain",
    "curve_coeffs",
    "curve_domain",
    "curve_pair",
    "labor_share",
    "planner_g1",
    "planner_g2",
    "decentralized_g1",
    "decentralized_g2",
    "innovation_only_g1",
    "innovation_only_g2",
    "constant_returns_curves",
    "additional_privacy_curves",
    "subsidized_decentralized_curves",
    "production_only_values",
]


class RegimeKind(str, Enum):
    PLANNER = "planner"
    DECENTRALIZED = "decentralized"
    PRODUCTION_ONLY = "production-only"
    INNOVATION_ONLY = "innovation-only"
    CR_PLANNER = "cr-planner"
    CR_DECENTRALIZED = "cr-decentralized"
    ADDITIONAL_PRIVACY = "additional-privacy"
    SUBSIDIZED = "subsidized"

    @property
    def needs_gamma_share(self) -> bool:
        return self in (RegimeKind.DECENTRALIZED, RegimeKind.SUBSIDIZED)

    @property
    def needs_theta(self) -> bool:
        return self in (RegimeKind.CR_PLANNER, RegimeKind.CR_DECENTRALIZED)

    @property
    def needs_alpha(self) -> bool:
        return self is RegimeKind.ADDITIONAL_PRIVACY

    @property
    def hyperbolic(self) -> bool:
        return self in (RegimeKind.DECENTRALIZED, RegimeKind.SUBSIDIZED, RegimeKind.CR_DECENTRALIZED)


_REGIME_ALIASES = {
    "planner-multi": RegimeKind.PLANNER,
    "sp": RegimeKind.PLANNER,
    "dc": RegimeKind.DECENTRALIZED,
    "production": RegimeKind.PRODUCTION_ONLY,
    "innovation": RegimeKind.INNOVATION_ONLY,
    "constant-returns-planner": RegimeKind.CR_PLANNER,
    "constant-returns-decentralized": RegimeKind.CR_DECENTRALIZED,
    "alpha": RegimeKind.ADDITIONAL_PRIVACY,
    "subsidized-decentralized": RegimeKind.SUBSIDIZED,
}


@dataclass(frozen=True)
class Regime:
    """Which BGP system is active. ``scheme`` is set only for the subsidized kind."""

    kind: RegimeKind
    scheme: object = None

    def __post_init__(self):
        if not isinstance(self.kind, RegimeKind):
            object.__setattr__(self, "kind", RegimeKind(self.kind))
        if self.kind is RegimeKind.SUBSIDIZED:
            s = self.scheme
            if s is None or getattr(s, "s_p", None) is None or getattr(s, "s_n", None) is None:
                raise ValueError("subsidized regime needs a revenue scheme with s_p and s_n")
        elif self.scheme is not None:
            raise ValueError(f"regime {self.kind.value} takes no subsidy scheme")

    @property
    def name(self) -> str:
        return self.kind.value

    @classmethod
    def parse(cls, name: str, scheme=None) -> "Regime":
        key = name.strip().lower().replace("_", "-")
        kind = _REGIME_ALIASES.get(key)
        if kind is None:
            try:
                kind = RegimeKind(key)
            except ValueError:
                names = ", ".join(k.value for k in RegimeKind)
                raise ValueError(f"unknown regime {name!r}; expected one of {names}") from None
        return cls(kind, scheme)


PLANNER = Regime(RegimeKind.PLANNER)
DECENTRALIZED = Regime(RegimeKind.DECENTRALIZED)
PRODUCTION_ONLY = Regime(RegimeKind.PRODUCTION_ONLY)
INNOVATION_ONLY = Regime(RegimeKind.INNOVATION_ONLY)
CR_PLANNER = Regime(RegimeKind.CR_PLANNER)
CR_DECENTRALIZED = Regime(RegimeKind.CR_DECENTRALIZED)
ADDITIONAL_PRIVACY = Regime(RegimeKind.ADDITIONAL_PRIVACY)


class CurveCoeffs(NamedTuple):
    kappa: float
    c0: float
    hyper: bool
    a: float
    b: float
    r: float
    xi: float
    eps_l: float

    @property
    def args(self) -> tuple:
        return tuple(self)


@dataclass(frozen=True)
class CurveDomain:
    """Open interval ``(d_lo, d_hi)`` where a nontrivial intersection must lie."""

    d_lo: float
    d_hi: float
    lo_is_trivial_root: bool

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.d_hi)


def _linear(p: ModelParams, kappa: float, c0: float, slope: float, ratio: float) -> CurveCoeffs:
    return CurveCoeffs(kappa, c0, False, slope, math.inf, ratio, p.xi, p.eps_l)


def _market(p: ModelParams, one_plus_sp: float, one_plus_sn: float) -> CurveCoeffs:
    # zero subsidies multiply by exactly 1.0, so the plain decentralized
    # coefficients are reproduced bit for bit
    m = markup_factor(p)
    share = profit_share(p)
    if not share > 0.0:
        raise GammaShareError(share)
    scaled = one_plus_sp * m
    return CurveCoeffs(
        p.kappa,
        scaled * p.eta,
        True,
        p.rho,
        p.xi * share * one_plus_sp * one_plus_sn,
        (1.0 - p.xi) / p.xi / scaled,
        p.xi,
        p.eps_l,
    )


def curve_coeffs(regime: Regime, p: ModelParams) -> CurveCoeffs:
    """Reduce ``regime`` under ``p`` to the shared curve coefficients."""
    kind = regime.kind
    xi_ratio = (1.0 - p.xi) / p.xi
    planner_slope = (p.gamma - 1.0) * p.rho / p.xi
    if kind is RegimeKind.PLANNER:
        return _linear(p, p.kappa, p.eta, planner_slope, xi_ratio)
    if kind is RegimeKind.ADDITIONAL_PRIVACY:
        if p.alpha is None:
            raise RangeError("alpha", None, "required by the additional-privacy regime")
        return _linear(p, (1.0 + p.alpha) * p.kappa, p.eta, planner_slope, xi_ratio)
    if kind is RegimeKind.INNOVATION_ONLY:
        return _linear(p, p.kappa, 0.0, planner_slope, xi_ratio)
    if kind is RegimeKind.DECENTRALIZED:
        return _market(p, 1.0, 1.0)
    if kind is RegimeKind.SUBSIDIZED:
        s = regime.scheme
        return _market(p, 1.0 + s.s_p, 1.0 + s.s_n)
    if kind in (RegimeKind.CR_PLANNER, RegimeKind.CR_DECENTRALIZED):
        if p.theta is None:
            raise RangeError("theta", None, "required by the constant-returns regimes")
        theta = p.theta
        if kind is RegimeKind.CR_PLANNER:
            slope = p.rho / (p.xi * (1.0 / (p.gamma - 1.0) + theta))
            return _linear(p, p.kappa, theta, slope, xi_ratio / (1.0 - theta))
        m = markup_factor(p)
        return CurveCoeffs(p.kappa, m * theta, True, p.rho, p.xi / p.gamma,
                           xi_ratio / (m * (1.0 - theta)), p.xi, p.eps_l)
    raise ValueError(f"regime {kind.value} has a closed form, not a curve pair")


# -- evaluation ---------------------------------------------------------------

# |x| below this multiple of c0 is rounding residue from d_lo = sqrt(c0/kappa)
# itself; treat it as the boundary point x = 0 so both curves vanish there
_BOUNDARY_SNAP = 8.0 * 2.220446049250313e-16


def _x_value(d: float, c: CurveCoeffs) -> float:
    x = c.kappa * d * d - c.c0
    if abs(x) <= _BOUNDARY_SNAP * c.c0:
        return 0.0
    return x


def _check_d(d: float):
    if not (isinstance(d, (int, float)) and math.isfinite(d)) or d < 0.0:
        raise DomainError(f"data per capita must be a finite non-negative number, got {d!r}")


def _g1(d: float, c: CurveCoeffs) -> float:
    x = _x_value(d, c)
    if c.hyper:
        if x < 0.0 or x >= c.b:
            raise DomainError(
                f"d={d!r}: kappa*d^2 - {c.c0:.6g} = {x:.6g} outside [0, {c.b:.6g})"
            )
        return c.a * x / (c.b - x)
    return c.a * x


def _g2_ell(d: float, c: CurveCoeffs) -> tuple[float, float]:
    x = _x_value(d, c)
    if x < 0.0:
        raise DomainError(f"d={d!r} is below the lower domain bound sqrt({c.c0:.6g}/{c.kappa:.6g})")
    rx = c.r * x
    ell = rx / (1.0 + rx)
    return c.eps_l * ell ** (1.0 - c.xi) * d ** c.xi, ell


def curve_pair(regime: Regime, d: float, p: ModelParams) -> tuple[float, float]:
    """``(g1(d), g2(d))`` for ``regime``; raises :class:`DomainError` off-domain."""
    _check_d(d)
    c = curve_coeffs(regime, p)
    g2, _ = _g2_ell(d, c)
    return _g1(d, c), g2


def labor_share(regime: Regime, d: float, p: ModelParams) -> float:
    """Fraction of labour in innovation implied by data level ``d``."""
    _check_d(d)
    return _g2_ell(d, curve_coeffs(regime, p))[1]


def planner_g1(d: float, p: ModelParams) -> float:
    """Required growth for the planner; defined (possibly negative) for every d."""
    _check_d(d)
    return _g1(d, curve_coeffs(PLANNER, p))


def planner_g2(d: float, p: ModelParams) -> float:
    _check_d(d)
    return _g2_ell(d, curve_coeffs(PLANNER, p))[0]


def decentralized_g1(d: float, p: ModelParams) -> float:
    _check_d(d)
    return _g1(d, curve_coeffs(DECENTRALIZED, p))


def decentralized_g2(d: float, p: ModelParams) -> float:
    _check_d(d)
    return _g2_ell(d, curve_coeffs(DECENTRALIZED, p))[0]


def innovation_only_g1(d: float, p: ModelParams) -> float:
    _check_d(d)
    return _g1(d, curve_coeffs(INNOVATION_ONLY, p))


def innovation_only_g2(d: float, p: ModelParams) -> float:
    _check_d(d)
    return _g2_ell(d, curve_coeffs(INNOVATION_ONLY, p))[0]


def constant_returns_curves(d: float, p: ModelParams, side: str = "planner") -> tuple[float, float]:
    """Curve pair under constant-returns production; ``side`` is planner or decentralized."""
    if side not in ("planner", "decentralized"):
        raise ValueError(f"side must be 'planner' or 'decentralized', got {side!r}")
    regime = CR_PLANNER if side == "planner" else CR_DECENTRALIZED
    return curve_pair(regime, d, p)


def additional_privacy_curves(d: float, p: ModelParams) -> tuple[float, float]:
    return curve_pair(ADDITIONAL_PRIVACY, d, p)


def subsidized_decentralized_curves(d: float, p: ModelParams, scheme) -> tuple[float, float]:
    return curve_pair(Regime(RegimeKind.SUBSIDIZED, scheme), d, p)


def production_only_values(p: ModelParams) -> tuple[float, float, float]:
    """``(d', g', l_R')`` when data only enter production. No validation."""
    d = math.sqrt(p.eta / p.kappa)
    g = p.eps_l - (p.gamma - 1.0) * p.rho
    l_r = 1.0 - (p.gamma - 1.0) * p.rho / p.eps_l
    return d, g, l_r


# -- domains ------------------------------------------------------------------


def domain_from_coeffs(c: CurveCoeffs) -> CurveDomain:
    d_lo = math.sqrt(c.c0 / c.kappa)
    d_hi = math.sqrt((c.b + c.c0) / c.kappa) if c.hyper else math.inf
    # linear kinds: g1 and g2 both vanish at d_lo; hyperbolic kinds too, but
    # the domain there is cut by the asymptote instead of running to infinity
    return CurveDomain(d_lo, d_hi, True)


def curve_domain(regime: Regime, p: ModelParams) -> CurveDomain:
    """Interval on which both curves are defined and a crossing is guaranteed."""
    if regime.kind is RegimeKind.PRODUCTION_ONLY:
        d = math.sqrt(p.eta / p.kappa)
        return CurveDomain(d, d, False)
    c = curve_coeffs(regime, p)
    if c.hyper and not c.b > 0.0:
        raise DegenerateDomain(f"upper bound of kappa*d^2 - c0 is {c.b:.6g} <= 0")
    dom = domain_from_coeffs(c)
    if not dom.d_hi > dom.d_lo:
        raise DegenerateDomain(f"empty domain ({dom.d_lo}, {dom.d_hi})")
    return dom


def eval_coeffs(d: float, c: CurveCoeffs) -> tuple[float, float, float, float]:
    """Raw ``(x, g1, g2, ell)`` through the active kernel backend."""
    return kernels.eval_pair(float(d), *c)

"""Model parameters, admissibility checks and config-file parsing."""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any, Mapping

from .errors import GammaShareError, RangeError

__all__ = [
    "ModelParams",
    "BASELINE",
    "validate_params",
    "profit_share",
    "markup_factor",
    "params_from_mapping",
    "load_params",
    "parse_keyvalue_text",
]


@dataclass(frozen=True)
class ModelParams:
    """Scalars of the data-economy growth model.

    Defaults are the baseline calibration used for the numerical tables.
    ``theta`` (data share under constant-returns production) and ``alpha``
    (extra privacy cost of multiple uses) are only read by the regimes that
    need them.
    """

    eta: float = 0.1
    xi: float = 0.5
    kappa: float = 0.2
    gamma: float = 4.0
    rho: float = 0.03
    bigL: float = 1.0
    epsilon: float = 1.0
    theta: float | None = None
    alpha: float | None = None

    def replace(self, **changes) -> "ModelParams":
        return replace(self, **changes)

    def as_dict(self) -> dict[str, Any]:
        return asdict(self)

    @property
    def eps_l(self) -> float:
        return self.epsilon * self.bigL


BASELINE = ModelParams()

FIELD_NAMES = tuple(f.name for f in fields(ModelParams))
_ALIASES = {"L": "bigL", "eps": "epsilon"}
_OPTIONAL = {"theta", "alpha"}


def markup_factor(p: ModelParams) -> float:
    """1 - 1/gamma, the share of revenue paid to factors under the markup."""
    return 1.0 - 1.0 / p.gamma


def profit_share(p: ModelParams) -> float:
    """Incumbent profit share 1 - (1 - 1/gamma)(1 + eta).

    Not validated: the sign is checked by the regimes that require it.
    """
    return 1.0 - markup_factor(p) * (1.0 + p.eta)


def _finite(name, value):
    if value is None or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise RangeError(name, value, "must be a finite number")


def _open_unit(name, value):
    _finite(name, value)
    if not 0.0 < value < 1.0:
        raise RangeError(name, value, "must lie in (0, 1)")


def _positive(name, value):
    _finite(name, value)
    if not value > 0.0:
        raise RangeError(name, value, "must be positive")


def validate_params(raw: ModelParams, regime=None) -> ModelParams:
    """Return ``raw`` unchanged if it is admissible, else raise.

    When ``regime`` is given its extra requirements are enforced too:
    a positive profit share for decentralized kinds, ``theta`` for the
    constant-returns kinds and ``alpha`` for the additional-privacy planner.
    kappa >= 1 only warns so that sweeps can run past the usual range.
    """
    _open_unit("eta", raw.eta)
    _open_unit("xi", raw.xi)
    _positive("kappa", raw.kappa)
    if raw.kappa >= 1.0:
        warnings.warn(f"kappa={raw.kappa} is outside the usual range (0, 1)", UserWarning, stacklevel=2)
    _finite("gamma", raw.gamma)
    if not raw.gamma > 1.0:
        raise RangeError("gamma", raw.gamma, "elasticity of substitution must exceed 1")
    _positive("rho", raw.rho)
    _positive("bigL", raw.bigL)
    _positive("epsilon", raw.epsilon)
    if raw.theta is not None:
        _open_unit("theta", raw.theta)
    if raw.alpha is not None:
        _finite("alpha", raw.alpha)
        if raw.alpha < 0.0:
            raise RangeError("alpha", raw.alpha, "must be non-negative")

    if regime is not None:
        kind = getattr(regime, "kind", regime)
        if getattr(kind, "needs_theta", False) and raw.theta is None:
            raise RangeError("theta", None, f"required by regime {kind.value}")
        if getattr(kind, "needs_alpha", False) and raw.alpha is None:
            raise RangeError("alpha", None, f"required by regime {kind.value}")
        if getattr(kind, "needs_gamma_share", False):
            share = profit_share(raw)
            if not share > 0.0:
                raise GammaShareError(share)
    return raw


# -- config parsing -----------------------------------------------------------


def _coerce(key: str, value: Any):
    if key in _OPTIONAL and (value is None or (isinstance(value, str) and value.strip().lower() in ("", "none", "null"))):
        return None
    if isinstance(value, bool):
        raise RangeError(key, value, "expected a number")
    if isinstance(value, (int, float)):
        return float(value)
    try:
        return float(str(value).strip())
    except ValueError:
        raise RangeError(key, value, "expected a number") from None


def canonical_key(key: str) -> str:
    key = key.strip()
    key = _ALIASES.get(key, key)
    if key not in FIELD_NAMES:
        raise KeyError(f"unknown parameter {key!r}; expected one of {', '.join(FIELD_NAMES)}")
    return key


def params_from_mapping(values: Mapping[str, Any], base: ModelParams = BASELINE) -> ModelParams:
    """Overlay ``values`` on ``base``. Unknown keys raise ``KeyError``."""
    changes = {}
    for key, value in values.items():
        name = canonical_key(key)
        changes[name] = _coerce(name, value)
    return replace(base, **changes)


def parse_keyvalue_text(text: str) -> dict[str, str]:
    """Parse ``key=value`` lines; ``#`` starts a comment."""
    out: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value, got {line!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def load_params(path: str | Path, base: ModelParams = BASELINE) -> ModelParams:
    """Read a key=value or JSON parameter file (JSON if it parses as an object)."""
    text = Path(path).read_text(encoding="utf-8")
    stripped = text.lstrip()
    if stripped.startswith("{"):
        data = json.loads(text)
        if "params" in data and isinstance(data["params"], dict):
            data = data["params"]
    else:
        data = parse_keyvalue_text(text)
    return params_from_mapping(data, base)

"""Backend selection for the hot loops.

The compiled extension is used when it imports; set ``DATAGROWTH_PURE_PYTHON=1``
to force the pure-Python fallback. ``BACKEND`` names the active one.
"""

import contextlib
import os

from . import _pykernels

python_backend = _pykernels

try:
    from . import _ckernels as compiled_backend
except ImportError:  # extension not built
    compiled_backend = None

if compiled_backend is not None and os.environ.get("DATAGROWTH_PURE_PYTHON", "") not in ("1", "true", "yes"):
    _active = compiled_backend
else:
    _active = python_backend

_EXPORTS = ("BACKEND", "STEP_OK", "eval_pair", "f_values", "refine_root", "rk4_cumulative")


def _install(module):
    g = globals()
    for name in _EXPORTS:
        g[name] = getattr(module, name)


_install(_active)


def available_backends():
    out = {"python": python_backend}
    if compiled_backend is not None:
        out["cython"] = compiled_backend
    return out


def activate(name: str) -> str:
    """Make ``name`` the active backend for this process; returns the previous name."""
    backends = available_backends()
    if name not in backends:
        raise ValueError(f"backend {name!r} unavailable; have {', '.join(backends)}")
    previous = globals()["BACKEND"]
    _install(backends[name])
    return previous


@contextlib.contextmanager
def using(name: str):
    previous = activate(name)
    try:
        yield
    finally:
        activate(previous)

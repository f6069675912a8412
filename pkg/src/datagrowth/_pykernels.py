"""Pure-Python hot loops. Mirrors ``_ckernels.pyx`` operation for operation.

Every regime's curve pair is described by the same eight coefficients::

    x(d)  = kappa * d**2 - c0
    g1(d) = a * x                    (linear kinds)
          = a * x / (b - x)          (hyperbolic kinds, b = vertical asymptote)
    ell   = r*x / (1 + r*x)          (labour share in innovation)
    g2(d) = eps_l * ell**(1 - xi) * d**xi
"""

import math

import numpy as np

BACKEND = "python"

STEP_OK = 0
STEP_FAILED = 1


def eval_pair(d, kappa, c0, hyper, a, b, r, xi, eps_l):
    """Return ``(x, g1, g2, ell)`` at ``d`` without domain checks."""
    x = kappa * d * d - c0
    if hyper:
        if x >= b:
            g1 = math.inf
        else:
            g1 = a * x / (b - x)
    else:
        g1 = a * x
    rx = r * x
    ell = rx / (1.0 + rx)
    if ell < 0.0 or d < 0.0:
        # C pow() of a negative base with a fractional exponent is NaN
        g2 = math.nan
    else:
        g2 = eps_l * ell ** (1.0 - xi) * d ** xi
    return x, g1, g2, ell


def _f(d, kappa, c0, hyper, a, b, r, xi, eps_l):
    x = kappa * d * d - c0
    if x < 0.0:
        return math.nan
    if hyper:
        if x >= b:
            return math.inf
        g1 = a * x / (b - x)
    else:
        g1 = a * x
    rx = r * x
    ell = rx / (1.0 + rx)
    return g1 - eps_l * ell ** (1.0 - xi) * d ** xi


def f_values(ds, kappa, c0, hyper, a, b, r, xi, eps_l):
    """F = g1 - g2 on an array of points; NaN below the domain, +inf past the asymptote."""
    ds = np.ascontiguousarray(ds, dtype=np.float64)
    out = np.empty_like(ds)
    for i in range(ds.shape[0]):
        out[i] = _f(float(ds[i]), kappa, c0, hyper, a, b, r, xi, eps_l)
    return out


def refine_root(lo, hi, flo, fhi, kappa, c0, hyper, a, b, r, xi, eps_l, rel_tol, abs_tol, max_iter):
    """Shrink a sign-change bracket ``F(lo) < 0 < F(hi)``.

    Regula falsi steps, with a forced bisection after any step that fails to
    halve the bracket. Returns ``(d, F(d), iterations)`` for the endpoint with
    the smaller residual.
    """
    force_bisect = False
    it = 0
    while it < max_iter:
        width = hi - lo
        scale = max(abs(lo), abs(hi))
        if width <= rel_tol * scale and min(-flo, fhi) <= abs_tol:
            break
        if force_bisect or not math.isfinite(fhi):
            m = 0.5 * (lo + hi)
        else:
            m = lo - flo * (hi - lo) / (fhi - flo)
            if not lo < m < hi:
                m = 0.5 * (lo + hi)
        if not lo < m < hi:
            break
        fm = _f(m, kappa, c0, hyper, a, b, r, xi, eps_l)
        it += 1
        if fm == 0.0:
            return m, 0.0, it
        if fm < 0.0:
            lo, flo = m, fm
        else:
            hi, fhi = m, fm
        force_bisect = (hi - lo) > 0.5 * width
    if -flo <= fhi:
        return lo, flo, it
    return hi, fhi, it


def _cum_rate(n, pref, cbar, half_xi):
    if not n > 0.0:
        return math.nan
    return pref * (cbar / n) ** half_xi * n


def _rk4(n, h, pref, cbar, half_xi):
    k1 = _cum_rate(n, pref, cbar, half_xi)
    k2 = _cum_rate(n + 0.5 * h * k1, pref, cbar, half_xi)
    k3 = _cum_rate(n + 0.5 * h * k2, pref, cbar, half_xi)
    k4 = _cum_rate(n + h * k3, pref, cbar, half_xi)
    return n + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _advance(n, h, pref, cbar, half_xi, depth):
    try:
        out = _rk4(n, h, pref, cbar, half_xi)
    except (OverflowError, ZeroDivisionError, ValueError):
        out = math.nan
    if math.isfinite(out) and out > 0.0:
        return out, STEP_OK
    if depth >= 20:
        return out, STEP_FAILED
    half = 0.5 * h
    mid, status = _advance(n, half, pref, cbar, half_xi, depth + 1)
    if status != STEP_OK:
        return mid, status
    return _advance(mid, half, pref, cbar, half_xi, depth + 1)


def rk4_cumulative(n0, step, n_steps, pref, cbar, half_xi):
    """Integrate dN/dt = pref * (cbar/N)**half_xi * N with fixed RK4 steps.

    A step that yields a non-finite or non-positive value is redone as two
    half steps, recursively, at most 20 halvings deep. Returns
    ``(levels, status, failed_index)``.
    """
    levels = np.empty(n_steps + 1, dtype=np.float64)
    levels[0] = n0
    n = float(n0)
    for i in range(n_steps):
        n, status = _advance(n, step, pref, cbar, half_xi, 0)
        if status != STEP_OK:
            return levels[: i + 1], status, i
        levels[i + 1] = n
    return levels, STEP_OK, -1

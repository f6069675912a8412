# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops. Same arithmetic, in the same order, as ``_pykernels.py``."""

from libc.math cimport pow, isfinite, INFINITY, NAN, fabs

import numpy as np

BACKEND = "cython"

cdef enum:
    _OK = 0
    _FAILED = 1

STEP_OK = _OK
STEP_FAILED = _FAILED


cdef inline double _f(double d, double kappa, double c0, bint hyper, double a,
                      double b, double r, double xi, double eps_l) nogil:
    cdef double x = kappa * d * d - c0
    cdef double g1, rx, ell
    if x < 0.0:
        return NAN
    if hyper:
        if x >= b:
            return INFINITY
        g1 = a * x / (b - x)
    else:
        g1 = a * x
    rx = r * x
    ell = rx / (1.0 + rx)
    return g1 - eps_l * pow(ell, 1.0 - xi) * pow(d, xi)


def eval_pair(double d, double kappa, double c0, bint hyper, double a, double b,
              double r, double xi, double eps_l):
    cdef double x = kappa * d * d - c0
    cdef double g1, rx, ell, g2
    if hyper:
        if x >= b:
            g1 = INFINITY
        else:
            g1 = a * x / (b - x)
    else:
        g1 = a * x
    rx = r * x
    ell = rx / (1.0 + rx)
    g2 = eps_l * pow(ell, 1.0 - xi) * pow(d, xi)
    return x, g1, g2, ell


def f_values(ds, double kappa, double c0, bint hyper, double a, double b,
             double r, double xi, double eps_l):
    cdef double[::1] src = np.ascontiguousarray(ds, dtype=np.float64)
    out = np.empty(src.shape[0], dtype=np.float64)
    cdef double[::1] dst = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(src.shape[0]):
            dst[i] = _f(src[i], kappa, c0, hyper, a, b, r, xi, eps_l)
    return out


def refine_root(double lo, double hi, double flo, double fhi, double kappa,
                double c0, bint hyper, double a, double b, double r, double xi,
                double eps_l, double rel_tol, double abs_tol, int max_iter):
    cdef bint force_bisect = False
    cdef bint exact = False
    cdef int it = 0
    cdef double width, scale, m = lo, fm
    with nogil:
        while it < max_iter:
            width = hi - lo
            scale = fabs(lo) if fabs(lo) > fabs(hi) else fabs(hi)
            if width <= rel_tol * scale and (-flo if -flo < fhi else fhi) <= abs_tol:
                break
            if force_bisect or not isfinite(fhi):
                m = 0.5 * (lo + hi)
            else:
                m = lo - flo * (hi - lo) / (fhi - flo)
                if not (lo < m < hi):
                    m = 0.5 * (lo + hi)
            if not (lo < m < hi):
                break
            fm = _f(m, kappa, c0, hyper, a, b, r, xi, eps_l)
            it += 1
            if fm == 0.0:
                exact = True
                break
            if fm < 0.0:
                lo = m
                flo = fm
            else:
                hi = m
                fhi = fm
            force_bisect = (hi - lo) > 0.5 * width
    if exact:
        return m, 0.0, it
    if -flo <= fhi:
        return lo, flo, it
    return hi, fhi, it


cdef inline double _cum_rate(double n, double pref, double cbar, double half_xi) nogil:
    return pref * pow(cbar / n, half_xi) * n


cdef inline double _rk4(double n, double h, double pref, double cbar, double half_xi) nogil:
    cdef double k1 = _cum_rate(n, pref, cbar, half_xi)
    cdef double k2 = _cum_rate(n + 0.5 * h * k1, pref, cbar, half_xi)
    cdef double k3 = _cum_rate(n + 0.5 * h * k2, pref, cbar, half_xi)
    cdef double k4 = _cum_rate(n + h * k3, pref, cbar, half_xi)
    return n + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


cdef int _advance(double n, double h, double pref, double cbar, double half_xi,
                  int depth, double* out) nogil:
    cdef double res = _rk4(n, h, pref, cbar, half_xi)
    cdef double mid
    cdef int status
    if isfinite(res) and res > 0.0:
        out[0] = res
        return _OK
    if depth >= 20:
        out[0] = res
        return _FAILED
    status = _advance(n, 0.5 * h, pref, cbar, half_xi, depth + 1, &mid)
    if status != _OK:
        out[0] = mid
        return status
    return _advance(mid, 0.5 * h, pref, cbar, half_xi, depth + 1, out)


def rk4_cumulative(double n0, double step, Py_ssize_t n_steps, double pref,
                   double cbar, double half_xi):
    levels = np.empty(n_steps + 1, dtype=np.float64)
    cdef double[::1] lv = levels
    cdef double n = n0
    cdef Py_ssize_t i
    cdef int status = _OK
    cdef Py_ssize_t failed = -1
    lv[0] = n0
    with nogil:
        for i in range(n_steps):
            status = _advance(n, step, pref, cbar, half_xi, 0, &n)
            if status != _OK:
                failed = i
                break
            lv[i + 1] = n
    if status != _OK:
        return levels[: failed + 1], status, failed
    return levels, _OK, -1

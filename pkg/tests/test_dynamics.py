import math

import numpy as np
import pytest

import oracles
from datagrowth import kernels
from datagrowth.curves import PLANNER
from datagrowth.dynamics import (
    bgp_time_path,
    closure_constant,
    cumulative_privacy_path,
    richardson_ratio,
)
from datagrowth.errors import RangeError, StepError
from datagrowth.params import BASELINE
from datagrowth.solver import solve_bgp

B = BASELINE


@pytest.fixture(scope="module")
def planner():
    return solve_bgp(PLANNER, B)


def test_bgp_path_levels(planner):
    path = bgp_time_path(planner, B, 1.0, [0.0, 1.0, 2.0])
    assert len(path) == 3
    assert path.n_level[0] == 1.0
    assert path.n_level[1] == pytest.approx(math.exp(2.9160), rel=1e-3)
    assert np.all(path.d_path == planner.d)
    assert np.all(path.g_n_path == planner.g_n)


def test_bgp_output_is_log_affine(planner):
    t = np.linspace(0.0, 5.0, 51)
    path = bgp_time_path(planner, B, 2.0, t)
    log_y = np.log(path.y_level)
    slope, intercept = np.polyfit(t, log_y, 1)
    assert slope == pytest.approx(0.9720, abs=5e-4)
    assert np.max(np.abs(log_y - (slope * t + intercept))) <= 1e-10


@pytest.mark.parametrize("n0, grid", [(0.0, [0.0, 1.0]), (-1.0, [0.0])])
def test_bgp_path_rejects_bad_start(planner, n0, grid):
    with pytest.raises(RangeError):
        bgp_time_path(planner, B, n0, grid)


@pytest.mark.parametrize("grid", [[], [0.0, 0.0], [1.0, 0.5], [[0.0, 1.0]]])
def test_bgp_path_rejects_bad_grid(planner, grid):
    with pytest.raises(ValueError):
        bgp_time_path(planner, B, 1.0, grid)


def test_columns_cover_every_series(planner):
    cols = bgp_time_path(planner, B, 1.0, [0.0, 1.0]).columns()
    assert list(cols) == ["t", "n_level", "y_level", "d_path", "g_n_path"]


@pytest.mark.parametrize(
    "kwargs",
    [dict(l_r=0.0), dict(l_r=1.0), dict(n0=0.0), dict(step=0.0), dict(step=math.inf), dict(horizon=-1.0)],
)
def test_cumulative_rejects_bad_inputs(kwargs):
    with pytest.raises(RangeError):
        cumulative_privacy_path(B, **{"l_r": 0.5, **kwargs})


def test_cumulative_matches_closed_form(planner):
    path = cumulative_privacy_path(B, planner.l_r, n0=1.0, horizon=20.0, step=0.01)
    exact = oracles.cumulative_exact(B, planner.l_r, 1.0, path.t)
    np.testing.assert_allclose(path.n_level, exact, rtol=1e-8)
    finer = cumulative_privacy_path(B, planner.l_r, n0=1.0, horizon=20.0, step=0.005)
    err = abs(path.n_level[-1] / exact[-1] - 1.0)
    err_half = abs(finer.n_level[-1] / exact[-1] - 1.0)
    assert 10.0 < err / err_half < 20.0


def test_cumulative_defaults_to_planner_share(planner):
    a = cumulative_privacy_path(B, horizon=1.0, step=0.1)
    b = cumulative_privacy_path(B, planner.l_r, horizon=1.0, step=0.1)
    np.testing.assert_array_equal(a.n_level, b.n_level)
    assert len(a) == 11


def test_cumulative_growth_decays_as_power_of_level(planner):
    path = cumulative_privacy_path(B, planner.l_r, horizon=30.0, step=0.01)
    assert np.all(np.diff(path.g_n_path) < 0.0)
    ratio = path.g_n_path / path.g_n_path[0]
    expected = (path.n_level / path.n_level[0]) ** (-B.xi / 2.0)
    np.testing.assert_allclose(ratio, expected, rtol=1e-12)
    # the closure holds pointwise
    np.testing.assert_allclose(path.n_level * path.d_path**2, closure_constant(B, planner.l_r), rtol=1e-12)


def test_data_falls_at_half_the_variety_rate(planner):
    path = cumulative_privacy_path(B, planner.l_r, horizon=5.0, step=0.001)
    dt = path.t[1] - path.t[0]
    log_n = np.log(path.n_level)
    log_d = np.log(path.d_path)
    n_rate = np.gradient(log_n, dt)[1:-1]
    d_rate = np.gradient(log_d, dt)[1:-1]
    np.testing.assert_allclose(-n_rate, 2.0 * d_rate, rtol=1e-9)
    np.testing.assert_allclose(n_rate, path.g_n_path[1:-1], rtol=1e-5)


def test_step_overflow_raises():
    p = B.replace(xi=0.02)
    with pytest.raises(StepError):
        cumulative_privacy_path(p, l_r=0.9, horizon=1e6, step=10.0)


def test_cumulative_backend_parity(backend, planner):
    path = cumulative_privacy_path(B, planner.l_r, horizon=10.0, step=0.05)
    if kernels.compiled_backend is None:
        return
    other = "python" if backend == "cython" else "cython"
    with kernels.using(other):
        twin = cumulative_privacy_path(B, planner.l_r, horizon=10.0, step=0.05)
    np.testing.assert_array_equal(path.n_level, twin.n_level)


def test_richardson_ratio_approaches_sixteen(planner):
    ratios = [richardson_ratio(B, planner.l_r, step=h) for h in (0.5, 0.2, 0.1, 0.05)]
    assert all(a < b for a, b in zip(ratios, ratios[1:]))
    assert 14.0 < ratios[-1] < 17.0

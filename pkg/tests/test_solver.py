import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from datagrowth import kernels
from datagrowth.curves import (
    CR_DECENTRALIZED,
    CR_PLANNER,
    DECENTRALIZED,
    INNOVATION_ONLY,
    PLANNER,
    PRODUCTION_ONLY,
    curve_domain,
    curve_pair,
)
from datagrowth.errors import BracketFailure, NonpositiveGrowthError, VerificationFailure
from datagrowth.params import BASELINE
from datagrowth.solver import (
    SolverConfig,
    bracket_root,
    production_only_closed_form,
    solve_bgp,
    uniqueness_scan,
    verify_solution,
)

B = BASELINE

TABLE_ROWS = [
    (PLANNER, 2.9160, 9.0277, 0.9419),
    (DECENTRALIZED, 0.2897, 0.8783, 0.0956),
    (PRODUCTION_ONLY, 0.9100, 0.7071, 0.9100),
    (INNOVATION_ONLY, 2.9097, 8.9903, 0.9417),
]


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(rel_tol_d=0.0),
        dict(abs_tol_f=-1.0),
        dict(bracket_start_offset=0.0),
        dict(bracket_growth=1.0),
        dict(max_expansions=0),
        dict(max_iterations=0),
        dict(scan_points=1),
    ],
)
def test_config_rejects_bad_values(kwargs):
    with pytest.raises(ValueError):
        SolverConfig(**kwargs)


@pytest.mark.parametrize("regime, g, d, l_r", TABLE_ROWS, ids=lambda v: getattr(v, "name", ""))
def test_baseline_rows(regime, g, d, l_r):
    sol = solve_bgp(regime, B)
    np.testing.assert_allclose((sol.g_n, sol.d, sol.l_r), (g, d, l_r), atol=5e-4)
    assert sol.unique
    assert sol.g_y == pytest.approx(sol.g_n / 3.0, rel=1e-15)


@pytest.mark.parametrize("regime", [PLANNER, DECENTRALIZED, INNOVATION_ONLY])
def test_bracket_straddles_root(regime):
    lo, hi = bracket_root(regime, B)
    dom = curve_domain(regime, B)
    assert dom.d_lo < lo < hi < dom.d_hi
    g1, g2 = curve_pair(regime, lo, B)
    assert g1 - g2 < 0.0
    g1, g2 = curve_pair(regime, hi, B)
    assert g1 - g2 > 0.0
    assert lo <= solve_bgp(regime, B).d <= hi


def test_bracket_failure_carries_samples():
    # curves that never cross above the trivial root
    p = B.replace(kappa=0.9, eta=0.1, xi=0.05, epsilon=1e-6)
    scan = uniqueness_scan(PLANNER, p)
    assert not scan.unique and scan.intervals == []
    with pytest.raises(BracketFailure) as exc:
        solve_bgp(PLANNER, p)
    assert exc.value.samples
    d0, f0 = exc.value.samples[0]
    assert d0 > math.sqrt(p.eta / p.kappa)


def test_nonpositive_growth_in_closed_form():
    with pytest.raises(NonpositiveGrowthError):
        solve_bgp(PRODUCTION_ONLY, B.replace(epsilon=0.09))


def test_closed_form_unit_data_when_eta_equals_kappa():
    sol = production_only_closed_form(B.replace(eta=0.2, kappa=0.2))
    assert sol.d == 1.0
    report = verify_solution(sol, B.replace(eta=0.2, kappa=0.2), tol=1e-14)
    assert report.passed


def test_solves_are_deterministic():
    a = solve_bgp(DECENTRALIZED, B)
    b = solve_bgp(DECENTRALIZED, B)
    assert a == b


def test_verification_reports_and_rejects():
    sol = solve_bgp(PLANNER, B)
    report = verify_solution(sol, B)
    assert report.passed
    assert set(report.residuals) >= {"curve_gap", "labor_share", "frontier", "output_growth"}
    with pytest.raises(VerificationFailure) as exc:
        verify_solution(replace(sol, d=sol.d + 1e-3), B)
    assert "curve_gap" in exc.value.violations


def test_closed_form_perturbation_detected():
    sol = production_only_closed_form(B)
    with pytest.raises(VerificationFailure):
        verify_solution(replace(sol, l_r=sol.l_r * 1.001), B)


def test_corner_flag():
    sol = solve_bgp(PLANNER, B, d_cap=5.0)
    assert sol.corner and sol.d > 5.0
    assert not solve_bgp(PLANNER, B, d_cap=20.0).corner
    assert solve_bgp(PRODUCTION_ONLY, B, d_cap=0.5).corner


def test_as_row_is_flat():
    row = solve_bgp(DECENTRALIZED, B).as_row()
    assert row["regime"] == DECENTRALIZED.name
    assert row["bracket_lo"] < row["d"] < row["bracket_hi"]
    assert all(not isinstance(v, (tuple, list, dict)) for v in row.values())


@pytest.mark.parametrize("regime, name", [(CR_PLANNER, "cr-planner"), (CR_DECENTRALIZED, "cr-decentralized")])
def test_constant_returns_matches_oracle(regime, name):
    p = B.replace(theta=0.1)
    sol = solve_bgp(regime, p)
    assert sol.d == pytest.approx(oracles.dense_grid_root(name, p), rel=1e-10)
    # output scales with N**(1/(gamma-1) + theta)
    assert sol.n_exponent == pytest.approx(1.0 / 3.0 + 0.1, rel=1e-15)
    assert sol.g_y == pytest.approx(sol.n_exponent * sol.g_n, rel=1e-15)
    verify_solution(sol, p)


def test_backends_agree_on_solves(rng):
    if kernels.compiled_backend is None:
        pytest.skip("extension not built")
    for _ in range(20):
        p = oracles.random_params(rng, B)
        for regime in (PLANNER, DECENTRALIZED, INNOVATION_ONLY):
            with kernels.using("python"):
                a = solve_bgp(regime, p)
            with kernels.using("cython"):
                b = solve_bgp(regime, p)
            assert (a.d, a.g_n, a.l_r, a.iterations) == (b.d, b.g_n, b.l_r, b.iterations)


@settings(max_examples=60, deadline=None)
@given(
    seed=st.integers(0, 2**32 - 1),
    regime=st.sampled_from([PLANNER, DECENTRALIZED, INNOVATION_ONLY]),
)
def test_solution_invariants(seed, regime):
    p = oracles.random_params(np.random.default_rng(seed), B)
    sol = solve_bgp(regime, p)
    dom = curve_domain(regime, p)
    assert 0.0 < sol.l_r < 1.0
    assert sol.g_n >= 0.0
    assert dom.d_lo < sol.d < dom.d_hi
    assert sol.residual_f <= SolverConfig().abs_tol_f
    assert sol.g_y * (p.gamma - 1.0) == pytest.approx(sol.g_n, rel=1e-14)
    frontier = p.epsilon * p.bigL * sol.l_r ** (1.0 - p.xi) * sol.d**p.xi
    assert frontier == pytest.approx(sol.g_n, rel=1e-10)
    verify_solution(sol, p)

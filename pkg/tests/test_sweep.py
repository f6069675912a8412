import math

import numpy as np
import pytest

from datagrowth.curves import (
    ADDITIONAL_PRIVACY,
    CR_DECENTRALIZED,
    CR_PLANNER,
    DECENTRALIZED,
    INNOVATION_ONLY,
    PLANNER,
)
from datagrowth.errors import MissingRegimeError
from datagrowth.params import BASELINE
from datagrowth.solver import solve_bgp
from datagrowth.sweep import (
    DEFAULT_GRIDS,
    SWEEP_PARAMS,
    SweepSpec,
    classify_direction,
    default_regimes,
    gap_metrics,
    run_sweep,
)


@pytest.mark.parametrize(
    "param, grid",
    [
        ("gamma", (2.0, 3.0)),
        ("eta", ()),
        ("eta", (0.1, 0.1)),
        ("eta", (0.2, 0.1)),
        ("eta", (0.1, math.nan)),
    ],
)
def test_spec_validation(param, grid):
    with pytest.raises(ValueError):
        SweepSpec(param, grid)


def test_spec_needs_a_regime():
    with pytest.raises(ValueError):
        SweepSpec("eta", (0.1,), regimes=())


def test_rows_are_grid_major():
    spec = SweepSpec("kappa", (0.1, 0.2, 0.3))
    table = run_sweep(spec)
    assert len(table.rows) == 6
    assert [(r.value, r.regime) for r in table.rows] == [
        (v, reg) for v in (0.1, 0.2, 0.3) for reg in (PLANNER, DECENTRALIZED)
    ]
    assert table.all_ok and table.failures() == []


def test_baseline_gap():
    table = run_sweep(SweepSpec("kappa", (0.2,)))
    gap = table.gaps[0.2]
    assert gap["delta_g_n"] == pytest.approx(2.6263, abs=5e-4)
    assert gap["delta_d"] > 0 and gap["delta_l_r"] > 0
    planner = solve_bgp(PLANNER, BASELINE)
    assert table.rows[0].solution == planner


def test_gap_metrics_need_both_regimes():
    table = run_sweep(SweepSpec("kappa", (0.2, 0.3), regimes=(PLANNER,)))
    assert table.gaps == {}
    with pytest.raises(MissingRegimeError, match="decentralized"):
        gap_metrics(table)


def test_gap_metrics_directions():
    summary = gap_metrics(run_sweep(SweepSpec.default("kappa")))
    assert len(summary.values) == 25
    assert set(summary.directions) == {"delta_d", "delta_g_n", "delta_l_r"}
    assert all(v in ("increasing", "decreasing", "constant", "mixed") for v in summary.directions.values())


def test_failures_are_tagged_not_raised():
    table = run_sweep(SweepSpec("eta", (0.1, 0.34, 0.5)))
    bad = table.failures()
    assert not table.all_ok
    assert {(r.value, r.regime) for r in bad} == {(0.34, DECENTRALIZED), (0.5, DECENTRALIZED)}
    assert all(r.error.startswith("GammaShareError:") for r in bad)
    col = table.column(DECENTRALIZED, "g_n")
    assert math.isfinite(col[0]) and np.isnan(col[1:]).all()
    # the planner is fine beyond the market's admissible range
    assert np.isfinite(table.column(PLANNER, "g_n")).all()
    assert set(table.gaps) == {0.1}


def test_order_of_regimes_does_not_change_values():
    a = run_sweep(SweepSpec("xi", (0.3, 0.5, 0.7)))
    b = run_sweep(SweepSpec("xi", (0.3, 0.5, 0.7), regimes=(DECENTRALIZED, PLANNER)))
    for reg in (PLANNER, DECENTRALIZED):
        np.testing.assert_array_equal(a.column(reg, "d"), b.column(reg, "d"))


def test_parallel_matches_serial():
    spec = SweepSpec("eta", DEFAULT_GRIDS["eta"][:8])
    serial = run_sweep(spec)
    parallel = run_sweep(spec, workers=2)
    assert serial.rows == parallel.rows
    assert serial.gaps == parallel.gaps


def test_alpha_sweep_matches_direct_solves():
    regimes = default_regimes("alpha")
    assert regimes[0] == ADDITIONAL_PRIVACY
    table = run_sweep(SweepSpec.default("alpha", regimes=regimes))
    assert table.all_ok
    g = table.column(ADDITIONAL_PRIVACY, "g_n")
    assert g[0] == solve_bgp(PLANNER, BASELINE).g_n
    assert g[-1] == pytest.approx(2.9060, abs=5e-4)
    assert classify_direction(g) == "decreasing"
    # sharing with production beats innovation-only use up to alpha = 0.006
    g_inno = table.column(INNOVATION_ONLY, "g_n")
    assert list(g > g_inno) == [True, True, True, True, False, False]


def test_theta_sweep_regimes():
    assert default_regimes("theta") == (CR_PLANNER, CR_DECENTRALIZED)
    table = run_sweep(SweepSpec("theta", (0.05, 0.1), regimes=default_regimes("theta")))
    assert table.all_ok


@pytest.mark.parametrize(
    "values, expected",
    [
        ([1, 2, 3], "increasing"),
        ([3, 2, 1], "decreasing"),
        ([1, 1, 1], "constant"),
        ([1, 3, 2], "mixed"),
        ([1.0, math.nan, 2.0], "increasing"),
        ([5.0], "constant"),
    ],
)
def test_classify_direction(values, expected):
    assert classify_direction(values) == expected


def test_default_grids():
    assert set(DEFAULT_GRIDS) == set(SWEEP_PARAMS)
    for param in ("eta", "xi", "kappa", "theta"):
        assert len(DEFAULT_GRIDS[param]) == 25
    assert default_regimes("eta") == (PLANNER, DECENTRALIZED)

"""Command-line front end: ``datagrowth <command> [options]``.

Parameter precedence is defaults < config file < ``--set`` flags. The config
file comes from ``--config`` or, failing that, the ``DATAGROWTH_CONFIG``
environment variable. Exit status is 0 only when every requested solve
succeeded and passed verification.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .curves import (
    ADDITIONAL_PRIVACY,
    DECENTRALIZED,
    INNOVATION_ONLY,
    PLANNER,
    PRODUCTION_ONLY,
    Regime,
    RegimeKind,
    curve_domain,
    curve_pair,
    labor_share,
)
from .dynamics import bgp_time_path, cumulative_privacy_path
from .errors import ModelError, VerificationFailure
from .output import (
    atomic_write_text,
    companion_path,
    csv_text,
    format_cell,
    header_lines,
    round4,
    svg_line_chart,
    write_csv,
    write_json,
    write_panels,
)
from .params import BASELINE, ModelParams, load_params, params_from_mapping, validate_params
from .policy import (
    SubsidyScheme,
    factor_restoration_residuals,
    factor_subsidies,
    revenue_subsidies,
    verify_restoration,
)
from .solver import DEFAULT_CONFIG, SolverConfig, solve_bgp, verify_solution
from .sweep import DEFAULT_GRIDS, SWEEP_PARAMS, SweepSpec, default_regimes, run_sweep

CONFIG_ENV = "DATAGROWTH_CONFIG"
TABLE_COLUMNS = ("model", "g_n", "d", "l_r")
FULL_COLUMNS = (
    "model", "regime", "g_n", "d", "l_r", "g_y", "output_coeff", "n_exponent",
    "residual_f", "bracket_lo", "bracket_hi", "iterations", "unique", "corner",
)
TABLE_A1_ALPHAS = (0.0, 0.002, 0.004, 0.006, 0.008, 0.010)
FACTOR_TOL = 1e-9


class UsageError(Exception):
    """Bad flag combination detected after argparse."""


# -- argument parsing -----------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value or JSON parameter file")
    common.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                        help="override one parameter (repeatable)")
    common.add_argument("--format", choices=("csv", "json", "svg"), default="csv")
    common.add_argument("--out", help="output file (a directory for sweep); stdout when omitted")
    common.add_argument("--tol-d", type=float, help="relative tolerance on d")
    common.add_argument("--tol-f", type=float, help="absolute tolerance on g1 - g2")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="datagrowth", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common()

    p = sub.add_parser("solve", parents=[common], help="solve one regime")
    p.add_argument("--regime", default="planner")
    p.add_argument("--sp", type=float, help="production revenue subsidy for the subsidized regime")
    p.add_argument("--sn", type=float, help="innovation revenue subsidy for the subsidized regime")
    p.add_argument("--curves", action="store_true", help="emit both growth curves on a grid of d")
    p.add_argument("--points", type=int, default=400)

    sub.add_parser("table2", parents=[common], help="baseline four-regime table")
    sub.add_parser("tableA1", parents=[common], help="additional-privacy table")

    p = sub.add_parser("sweep", parents=[common], help="one-parameter sweep")
    p.add_argument("--param", required=True, choices=SWEEP_PARAMS)
    p.add_argument("--regime", "--regimes", dest="regimes", help="comma-separated regime names")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--grid", help="lo:hi:n, evenly spaced")
    g.add_argument("--grid-list", help="v1,v2,... strictly increasing")
    p.add_argument("--workers", type=int, default=None)

    p = sub.add_parser("policy", parents=[common], help="subsidies that restore the planner path")
    p.add_argument("--scheme", choices=("revenue", "factor"), default="revenue")

    p = sub.add_parser("dynamics", parents=[common], help="time paths")
    p.add_argument("--mode", choices=("bgp", "cumulative"), default="bgp")
    p.add_argument("--regime", default="planner")
    p.add_argument("--horizon", type=float, default=None)
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("--points", type=int, default=101, help="grid size for bgp mode")
    p.add_argument("--n0", type=float, default=1.0)
    p.add_argument("--l-r", dest="l_r", type=float, default=None, help="fixed labour share (cumulative)")
    return parser


def _load(args) -> tuple[ModelParams, SolverConfig]:
    base = BASELINE
    path = args.config or os.environ.get(CONFIG_ENV)
    if path:
        base = load_params(path, base)
    changes = {}
    for item in args.overrides:
        if "=" not in item:
            raise UsageError(f"--set expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        changes[key.strip()] = value.strip()
    try:
        p = params_from_mapping(changes, base)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    validate_params(p)
    cfg = DEFAULT_CONFIG
    if args.tol_d is not None:
        cfg = replace(cfg, rel_tol_d=args.tol_d)
    if args.tol_f is not None:
        cfg = replace(cfg, abs_tol_f=args.tol_f)
    return p, cfg


def parse_grid(text: str) -> tuple:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"--grid expects lo:hi:n, got {text!r}")
    lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    if n < 1:
        raise UsageError("--grid needs n >= 1")
    return tuple(np.linspace(lo, hi, n))


def _regime(name: str) -> Regime:
    try:
        return Regime.parse(name)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# -- emission -------------------------------------------------------------------


def _emit_table(args, rows, p, cfg, columns=TABLE_COLUMNS, full_columns=FULL_COLUMNS, title=""):
    """Rounded table at --out plus a full-precision companion; JSON holds full rows."""
    comments = header_lines(p, cfg, {"table": title} if title else None)
    if args.format == "svg":
        raise UsageError(f"--format svg is not available for {args.command}")
    if args.format == "json":
        if args.out:
            write_json(args.out, rows, p, cfg, {"table": title} if title else None)
        else:
            sys.stdout.write(json.dumps({"params": p.as_dict(), "rows": rows}, indent=2) + "\n")
        return
    if args.out:
        write_csv(args.out, columns, rows, comments, rounded=True)
        write_csv(companion_path(args.out), full_columns, rows, comments)
    else:
        sys.stdout.write(csv_text(columns, rows, comments, round4))


def _solve_verified(regime, p, cfg):
    sol = solve_bgp(regime, p, cfg)
    verify_solution(sol, p)
    return sol


def _row(label, sol) -> dict:
    return {"model": label, **sol.as_row()}


def _diag(msg: str):
    sys.stderr.write(msg.rstrip("\n") + "\n")


# -- commands -------------------------------------------------------------------


def cmd_table2(args, p, cfg) -> int:
    spec = (
        ("Social Planner", PLANNER),
        ("Decentralized Economy", DECENTRALIZED),
        ("Only in Production (SP)", PRODUCTION_ONLY),
        ("Only in Innovation (SP)", INNOVATION_ONLY),
    )
    rows = [_row(label, _solve_verified(reg, p, cfg)) for label, reg in spec]
    _emit_table(args, rows, p, cfg, title="baseline")
    return 0


def cmd_tableA1(args, p, cfg) -> int:
    rows = []
    for alpha in TABLE_A1_ALPHAS:
        pa = p.replace(alpha=alpha)
        rows.append(_row(f"Social Planner (alpha={alpha:g})", _solve_verified(ADDITIONAL_PRIVACY, pa, cfg)))
    rows.append(_row("Only in Production (SP)", _solve_verified(PRODUCTION_ONLY, p, cfg)))
    rows.append(_row("Only in Innovation (SP)", _solve_verified(INNOVATION_ONLY, p, cfg)))
    _emit_table(args, rows, p, cfg, title="additional privacy")
    return 0


def _subsidized_regime(args, p, cfg) -> Regime:
    if args.sp is not None and args.sn is not None:
        scheme = SubsidyScheme.revenue(args.sp, args.sn)
    else:
        scheme = revenue_subsidies(p, _solve_verified(PLANNER, p, cfg))
        if args.sp is not None or args.sn is not None:
            scheme = SubsidyScheme.revenue(
                scheme.s_p if args.sp is None else args.sp, scheme.s_n if args.sn is None else args.sn
            )
    return Regime(RegimeKind.SUBSIDIZED, scheme)


def _curve_rows(regime, p, sol, points):
    dom = curve_domain(regime, p)
    hi = dom.d_hi * (1.0 - 1e-6) if dom.bounded else max(2.0 * sol.d, dom.d_lo + 1.0)
    rows = []
    for d in np.linspace(dom.d_lo, hi, points):
        d = float(d)
        g1, g2 = curve_pair(regime, d, p)
        rows.append({"d": d, "g1": g1, "g2": g2, "f": g1 - g2, "l_r": labor_share(regime, d, p)})
    return rows


def cmd_solve(args, p, cfg) -> int:
    if args.regime.strip().lower().replace("_", "-") in ("subsidized", "subsidized-decentralized"):
        regime = _subsidized_regime(args, p, cfg)
    else:
        regime = _regime(args.regime)
    sol = _solve_verified(regime, p, cfg)
    row = _row(regime.name, sol)
    if regime.scheme is not None:
        row.update(regime.scheme.as_dict())
        row.pop("kind", None)
    if not args.curves:
        cols = list(FULL_COLUMNS) + [k for k in ("s_p", "s_n") if k in row]
        _emit_full(args, cols, [row], p, cfg)
        return 0
    if regime.kind is RegimeKind.PRODUCTION_ONLY:
        raise UsageError("the production-only regime has a closed form and no curve pair")
    rows = _curve_rows(regime, p, sol, args.points)
    extra = {"regime": regime.name, "solution": f"d={sol.d!r} g_n={sol.g_n!r} l_r={sol.l_r!r}"}
    comments = header_lines(p, cfg, extra)
    cols = ("d", "g1", "g2", "f", "l_r")
    if args.format == "json":
        _require_out(args)
        write_json(args.out, rows, p, cfg, {"solution": row})
    elif args.out:
        write_csv(args.out, cols, rows, comments)
        if args.format == "svg":
            x = [r["d"] for r in rows]
            chart = svg_line_chart(x, {"g1": [r["g1"] for r in rows], "g2": [r["g2"] for r in rows]},
                                   title=f"{regime.name} curves", xlabel="d")
            atomic_write_text(Path(args.out).with_suffix(".svg"), chart)
    else:
        sys.stdout.write(csv_text(cols, rows, comments))
    return 0


def _require_out(args):
    if not args.out:
        raise UsageError(f"--format {args.format} needs --out")


def _emit_full(args, cols, rows, p, cfg, extra=None):
    if args.format == "svg":
        raise UsageError(f"--format svg is not available for {args.command} without --curves")
    if args.format == "json":
        if args.out:
            write_json(args.out, rows, p, cfg, extra)
            return
        sys.stdout.write(json.dumps({"params": p.as_dict(), **(extra or {}), "rows": rows}, indent=2) + "\n")
        return
    comments = header_lines(p, cfg, extra)
    if args.out:
        write_csv(args.out, cols, rows, comments)
    else:
        sys.stdout.write(csv_text(cols, rows, comments, format_cell))


def cmd_sweep(args, p, cfg) -> int:
    if args.grid:
        grid = parse_grid(args.grid)
    elif args.grid_list:
        grid = tuple(float(v) for v in args.grid_list.split(",") if v.strip())
    else:
        grid = DEFAULT_GRIDS[args.param]
    regimes = (
        tuple(_regime(n) for n in args.regimes.split(",") if n.strip()) if args.regimes else default_regimes(args.param)
    )
    try:
        spec = SweepSpec(args.param, grid, regimes, p, cfg)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    table = run_sweep(spec, workers=args.workers)

    rows = []
    for r in table.rows:
        row = {args.param: r.value, "regime": r.regime.name}
        if r.ok:
            row.update({k: v for k, v in r.solution.as_row().items() if k != "regime"})
        row["error"] = r.error
        gaps = table.gaps.get(r.value)
        if gaps:
            row.update(gaps)
        rows.append(row)
    cols = [args.param, "regime", "g_n", "d", "l_r", "g_y", "residual_f", "iterations", "unique", "error"]
    if table.gaps:
        cols += ["delta_d", "delta_g_n", "delta_l_r"]
    comments = header_lines(p, cfg, {"sweep": f"param={args.param} regimes={','.join(r.name for r in regimes)}"})

    if not args.out:
        if args.format != "csv":
            raise UsageError(f"--format {args.format} needs --out")
        sys.stdout.write(csv_text(cols, rows, comments))
    else:
        out = Path(args.out)
        if args.format == "json":
            write_json(out / "sweep.json", rows, p, cfg, {"param": args.param})
        else:
            write_csv(out / "sweep.csv", cols, rows, comments)
            panels = {}
            for var in ("g_n", "d", "l_r"):
                panels[var] = {f"{reg.name}_{var}": table.column(reg, var) for reg in regimes}
            if table.gaps:
                panels["gap"] = {
                    k: np.array([table.gaps.get(v, {}).get(k, math.nan) for v in spec.grid])
                    for k in ("delta_d", "delta_g_n", "delta_l_r")
                }
            write_panels(out, args.param, spec.grid, panels, comments, svg=args.format == "svg")

    for r in table.failures():
        _diag(f"failed: {args.param}={r.value!r} {r.regime.name}: {r.error}")
    return 0 if table.all_ok else 1


def cmd_policy(args, p, cfg) -> int:
    planner = _solve_verified(PLANNER, p, cfg)
    if args.scheme == "revenue":
        scheme = revenue_subsidies(p, planner)
        rep = verify_restoration(p, scheme, planner, cfg)
        row = {**scheme.as_dict(), "one_plus_sp": scheme.one_plus_sp, "one_plus_sn": scheme.one_plus_sn,
               "d_subsidized": rep.d_subsidized, "g_subsidized": rep.g_subsidized,
               "d_planner": rep.d_planner, "g_planner": rep.g_planner,
               "rel_gap_d": rep.rel_gap_d, "rel_gap_g": rep.rel_gap_g, "passed": rep.passed}
        passed = rep.passed
    else:
        scheme = factor_subsidies(p, planner)
        res = factor_restoration_residuals(p, scheme, planner)
        passed = all(v <= FACTOR_TOL for v in res.values())
        row = {**scheme.as_dict(), "one_minus_sd1": scheme.one_minus_sd1, "one_minus_sd2": scheme.one_minus_sd2,
               "one_minus_sl": scheme.one_minus_sl, "d_planner": planner.d, "g_planner": planner.g_n,
               "l_planner": planner.l_r, **{f"residual_{k}": v for k, v in res.items()}, "passed": passed}
    _emit_full(args, list(row), [row], p, cfg)
    if not passed:
        _diag(f"{args.scheme} subsidies did not restore the planner path")
    return 0 if passed else 1


def cmd_dynamics(args, p, cfg) -> int:
    if args.mode == "bgp":
        regime = _regime(args.regime)
        sol = _solve_verified(regime, p, cfg)
        horizon = 10.0 if args.horizon is None else args.horizon
        if not horizon > 0 or args.points < 2:
            raise UsageError("bgp mode needs --horizon > 0 and --points >= 2")
        path = bgp_time_path(sol, p, args.n0, np.linspace(0.0, horizon, args.points))
        extra = {"mode": f"bgp regime={regime.name}"}
    else:
        horizon = 150.0 if args.horizon is None else args.horizon
        l_r = args.l_r if args.l_r is not None else _solve_verified(PLANNER, p, cfg).l_r
        path = cumulative_privacy_path(p, l_r, args.n0, horizon, args.step)
        extra = {"mode": f"cumulative l_r={l_r!r} step={args.step!r}"}
    cols = path.columns()
    rows = [{k: float(v[i]) for k, v in cols.items()} for i in range(len(path))]
    if args.format == "svg":
        _require_out(args)
        write_csv(args.out, list(cols), rows, header_lines(p, cfg, extra))
        chart = svg_line_chart(path.t, {"g_n": path.g_n_path}, title=f"{args.mode} growth of N", xlabel="t")
        atomic_write_text(Path(args.out).with_suffix(".svg"), chart)
        return 0
    _emit_full(args, list(cols), rows, p, cfg, extra)
    return 0


COMMANDS = {
    "solve": cmd_solve,
    "table2": cmd_table2,
    "tableA1": cmd_tableA1,
    "sweep": cmd_sweep,
    "policy": cmd_policy,
    "dynamics": cmd_dynamics,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        p, cfg = _load(args)
        return COMMANDS[args.command](args, p, cfg)
    except UsageError as exc:
        _diag(f"datagrowth {args.command}: error: {exc}")
        return 2
    except VerificationFailure as exc:
        _diag(f"datagrowth {args.command}: verification failed: {exc}")
        return 1
    except (ModelError, ValueError, ArithmeticError, OSError) as exc:
        _diag(f"datagrowth {args.command}: {type(exc).__name__}: {exc}")
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

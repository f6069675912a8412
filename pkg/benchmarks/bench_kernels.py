"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--quick] [--repeat N]

Each case runs under both backends via ``kernels.using``; the table reports
the best-of-N wall time per call and the speed-up of the compiled build.
"""

import argparse
import sys
import timeit

import numpy as np

from datagrowth import kernels
from datagrowth.curves import DECENTRALIZED, PLANNER, curve_coeffs
from datagrowth.params import BASELINE
from datagrowth.solver import solve_bgp


def _cases(quick):
    grid = np.linspace(0.0, 12.0, 2_000 if quick else 200_000)
    c = curve_coeffs(PLANNER, BASELINE)
    steps = 1_000 if quick else 100_000
    return {
        "f_values": lambda: kernels.f_values(grid, *c),
        "solve planner": lambda: solve_bgp(PLANNER, BASELINE),
        "solve decentralized": lambda: solve_bgp(DECENTRALIZED, BASELINE),
        "rk4 path": lambda: kernels.rk4_cumulative(1.0, 0.01, steps, 2.9, 3.0, 0.25),
    }


def time_backend(name, quick=False, repeat=5):
    out = {}
    with kernels.using(name):
        for label, fn in _cases(quick).items():
            number = 1 if not quick else 3
            out[label] = min(timeit.repeat(fn, number=number, repeat=repeat)) / number
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true", help="small inputs, for smoke runs")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    backends = [b for b, mod in kernels.available_backends().items() if mod is not None]
    results = {b: time_backend(b, args.quick, args.repeat) for b in backends}
    print(f"{'case':<22}" + "".join(f"{b:>14}" for b in backends) + ("     speed-up" if len(backends) > 1 else ""))
    for label in results[backends[0]]:
        line = f"{label:<22}" + "".join(f"{results[b][label] * 1e3:>11.3f} ms" for b in backends)
        if "cython" in results and "python" in results:
            line += f"{results['python'][label] / results['cython'][label]:>12.1f}x"
        print(line)
    if "cython" not in results:
        print("compiled backend not built; only the Python fallback was timed", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())

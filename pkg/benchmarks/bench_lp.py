"""Time the exact LP solves with and without the floating-point warm start.

    python benchmarks/bench_lp.py --n 8 12 --k 1 3 --program primal design

By default both paths run.  Setting ``SPOA_WARM_START=0`` or ``=1`` restricts
the run to the cold or warm path respectively.
"""

from __future__ import annotations

import argparse
import os
import time

from spoa.bounds import WelfareCurve, build_design, build_primal
from spoa.lp import solve

BUILDERS = {"primal": build_primal, "design": build_design}


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, nargs="+", default=[6, 10])
    parser.add_argument("--k", type=int, nargs="+", default=[1, 3])
    parser.add_argument("--program", nargs="+", choices=sorted(BUILDERS), default=["primal", "design"])
    args = parser.parse_args()

    env = os.environ.get("SPOA_WARM_START")
    modes = [env != "0"] if env is not None else [True, False]
    print(f"{'program':8} {'n':>3} {'k':>3} {'mode':5} {'pivots':>7} {'seconds':>9}  value")
    for name in args.program:
        for n in args.n:
            for k in args.k:
                if k > n:
                    continue
                lp = BUILDERS[name](n, WelfareCurve.indicator(n), k)
                values = set()
                for warm in modes:
                    start = time.perf_counter()
                    sol = solve(lp, warm_start=warm)
                    elapsed = time.perf_counter() - start
                    values.add(sol.value)
                    mode = "warm" if warm else "cold"
                    print(f"{name:8} {n:>3} {k:>3} {mode:5} {sol.iterations:>7} {elapsed:>9.3f}  {sol.value}")
                if len(values) > 1:
                    raise SystemExit(f"warm and cold values differ for {name} n={n} k={k}")


if __name__ == "__main__":
    main()

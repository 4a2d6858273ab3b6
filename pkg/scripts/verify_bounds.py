"""Cross-check the closed-form fidelity bound against the numerical search.

Runs the multi-start measurement optimizer on a grid of ensembles and prints
one line per grid point with the analytic bound, the best value the search
reached, and the signed gap. Every gap should sit within the optimizer
tolerance below zero; a positive gap would falsify the bound.

    python3 scripts/verify_bounds.py
    python3 scripts/verify_bounds.py --m 2 3 --steps 9 --restarts 32 --seed 7
"""

import argparse
import math
import sys
import time

from qrelay import OptimizerConfig, max_fidelity_analytic, optimize_fidelity, symmetric_ensemble


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, nargs="+", default=[2, 3, 4, 5, 8])
    ap.add_argument("--steps", type=int, default=5,
                    help="colatitude grid points from 0 to pi/2 inclusive")
    ap.add_argument("--elements", type=int, default=4)
    ap.add_argument("--restarts", type=int, default=16)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if args.steps < 2 or any(m < 2 for m in args.m):
        ap.error("need steps >= 2 and every m >= 2")

    cfg = OptimizerConfig(n_elements=args.elements, restarts=args.restarts,
                          seed=args.seed)
    print(f"{'m':>3} {'theta':>12} {'bound':>20} {'achieved':>20} "
          f"{'gap':>12} {'time_s':>7}")
    worst = -math.inf
    for m in args.m:
        for i in range(args.steps):
            theta = (math.pi / 2) * i / (args.steps - 1)
            bound = max_fidelity_analytic(m, theta)
            start = time.perf_counter()
            _, value, _ = optimize_fidelity(symmetric_ensemble(m, theta), cfg)
            elapsed = time.perf_counter() - start
            gap = value - bound
            worst = max(worst, gap)
            print(f"{m:>3} {theta:>12.8f} {bound:>20.15f} {value:>20.15f} "
                  f"{gap:>12.2e} {elapsed:>7.2f}")
    print(f"\nworst gap (achieved - bound): {worst:.3e}")
    return 0 if worst <= 1e-6 else 1


if __name__ == "__main__":
    sys.exit(main())

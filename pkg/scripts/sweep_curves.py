"""Tabulate the closed-form relay curves over the colatitude range.

Writes one CSV per ensemble size (or a single combined CSV with an ``m``
column) containing the minimum error probability, the maximum achievable
fidelity, and the retransmission colatitude. Useful for plotting how the
performance curves flatten as the number of signals grows.

    python3 scripts/sweep_curves.py --m 2 3 5 8 --steps 101 --out curves/
    python3 scripts/sweep_curves.py --m 3 --steps 11          # stdout
"""

import argparse
import csv
import math
import sys
from pathlib import Path

from qrelay import max_fidelity_analytic, min_error_analytic, retransmission_colatitude

HEADER = ["theta", "p_e_min", "f_max", "chi"]


def curve_rows(m: int, steps: int):
    for i in range(steps):
        theta = (math.pi / 2) * i / (steps - 1)
        yield [f"{v:.17g}" for v in (theta, min_error_analytic(m, theta),
                                     max_fidelity_analytic(m, theta),
                                     retransmission_colatitude(m, theta))]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, nargs="+", default=[2, 3, 4, 8],
                    help="ensemble sizes to tabulate")
    ap.add_argument("--steps", type=int, default=101,
                    help="grid points from 0 to pi/2 inclusive")
    ap.add_argument("--out", type=Path, default=None,
                    help="directory for per-m CSV files (default: stdout)")
    args = ap.parse_args(argv)
    if args.steps < 2 or any(m < 2 for m in args.m):
        ap.error("need steps >= 2 and every m >= 2")

    if args.out is None:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(["m"] + HEADER)
        for m in args.m:
            for row in curve_rows(m, args.steps):
                writer.writerow([str(m)] + row)
        return 0

    args.out.mkdir(parents=True, exist_ok=True)
    for m in args.m:
        path = args.out / f"curves_m{m}.csv"
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(HEADER)
            writer.writerows(curve_rows(m, args.steps))
        print(f"wrote {path}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())

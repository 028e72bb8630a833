#!/usr/bin/env python3
"""Growth study: log L2 norms of repeated Laplacian applications to a
Gaussian on [-1,1]^2, with window fits of log-norm against j log j.

The factorial-power law for order-2 operators bounds these norms by
C^(j+1) (j!)^2, i.e. a j log j slope of at most 2.  The Gaussian is
entire, so its iterates grow like C^j j! and the fitted slope drifts
down toward 1 as the window moves right; the script prints the windowed
slopes, the entire-function comparison, and the smallest C certifying
the factorial-power upper bound on the computed range.

Usage: python scripts/iterate_growth_study.py [--b-max N] [--scale S]
"""

import argparse
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from iterlab import (Box, MultiPoly, OperatorSystem, PolyGaussian,  # noqa: E402
                     iterate_norm_table, parse_poly)


def window_slope(logs, j_lo, j_hi):
    js = np.arange(j_lo, j_hi + 1)
    x = js * np.log(js)
    y = np.array([logs[j] for j in js])
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    return float(coef[0])


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--b-max", type=int, default=30)
    ap.add_argument("--scale", type=float, default=1.0)
    args = ap.parse_args()

    lap = OperatorSystem((parse_poly("-1 2 0; -1 0 2"),), 2)
    gauss = PolyGaussian.real(MultiPoly.constant(2, 1), Fraction(args.scale))
    box = Box((-1.0, -1.0), (1.0, 1.0))
    table = iterate_norm_table(lap, gauss, box, b_max=args.b_max)
    logs = [table.entries[(j,)] for j in range(args.b_max + 1)]

    print(f"j, log||Lap^j u||  (scale={args.scale}, box [-1,1]^2)")
    for j, v in enumerate(logs):
        print(f"{j:3d}  {v: .6f}")

    print("\nwindow fits of log-norm against j log j:")
    for lo, hi in ((8, 15), (10, 20), (15, min(args.b_max, 30))):
        if hi <= args.b_max and hi > lo:
            print(f"  j in [{lo:2d},{hi:2d}]: slope = {window_slope(logs, lo, hi):.4f}")

    # smallest C with log-norm <= (j+1) log C + 2 log j! over the range
    need = max((logs[j] - 2.0 * math.lgamma(j + 1)) / (j + 1)
               for j in range(args.b_max + 1))
    print(f"\nfactorial-power upper bound holds with C = {math.exp(need):.4f}")
    print("entire-function comparison: log-norm - [j log j + j(log 4 - 1)]:")
    for j in (10, 20, min(args.b_max, 30)):
        if j <= args.b_max and j > 1:
            ref = j * math.log(j) + j * (math.log(4.0) - 1.0)
            print(f"  j={j:3d}: {logs[j] - ref: .3f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

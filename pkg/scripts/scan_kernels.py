"""Compare exact kernels with the enumerated states, weight by weight, across classes.

    python scripts/scan_kernels.py --window 6
"""

import argparse
import time
from fractions import Fraction

from uqpoly.basis import kernel_vs_states
from uqpoly.newton import _tag
from uqpoly.uqsl import RepParams

h = Fraction(1, 2)
CASES = [(1, 1), (2, 1), (0, 2), (2, h), (h, 1), (h, h), (3 * h, -h), (h, -3 * h),
         (2, -1), (-1, 2), (3, -2), (2, -2), (-2, 3), (-2, 2), (1, -1)]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--window", type=int, default=6)
    W = ap.parse_args().window
    for r in CASES:
        p = RepParams(3, r)
        t = time.perf_counter()
        rep = kernel_vs_states(p, W)
        bad = rep.disagreements()
        status = "agree" if not bad else f"DISAGREE at {[b.weight for b in bad]}"
        print(f"r = ({r[0]}, {r[1]})  {_tag(p):20} {len(rep.rows):3} weights  {status}  {time.perf_counter() - t:.1f}s")


if __name__ == "__main__":
    main()

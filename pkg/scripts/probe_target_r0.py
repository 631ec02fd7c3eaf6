"""List every target r_0 for which each invariant operator intertwines in gl(3) mode.

    python scripts/probe_target_r0.py
"""

from fractions import Fraction

from uqpoly.intertwiners import fit_target_r0, op_dx_power, op_qd2, op_qd3
from uqpoly.uqsl import RepParams

half = Fraction(1, 2)
CASES = [
    (op_dx_power, (1, half)),
    (op_dx_power, (2, 1)),
    (op_qd2, (half, 1)),
    (op_qd2, (1, 2)),
    (lambda p: op_qd3(p), (half, half)),
    (lambda p: op_qd3(p, regularized=True), (2, -2)),
]


def main():
    for build, r in CASES:
        for r0 in (0, 2):
            iw = build(RepParams(3, r, r0=r0))
            hits = fit_target_r0(iw, W=3, span=6)
            print(f"{iw.label:8} r = {str(r):12} source r0 = {r0}: target r0 in {[str(h) for h in hits]}, recorded {iw.target.r0}")


if __name__ == "__main__":
    main()

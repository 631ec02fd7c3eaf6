"""Write the frozen reference files in tests/golden/.

The states and beta tables come from repeated generator action (C^k x^j and
A^l C^k B^j 1), not from the closed sums under test, so they act as an
independent oracle.  Rerun only deliberately:

    python scripts/freeze_golden.py
"""

import json
from fractions import Fraction
from pathlib import Path

from uqpoly.basis import basis_to_json, enumerate_indices, state_v_by_action
from uqpoly.intertwiners import invariant_subspace
from uqpoly.mpoly import MPoly
from uqpoly.newton import build_diagram, render
from uqpoly.qdiff import apply
from uqpoly.uqsl import RepParams, gamma

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"

STATE_CASES = {
    "states_r1_1.json": ((1, 1), None),
    "states_r2_1.json": ((2, 1), None),
    "states_r2_m2_w4.json": ((2, -2), 4),
    "states_rhalf_mhalf3_w3.json": ((Fraction(1, 2), Fraction(-3, 2)), 3),
}


def beta_by_action(params, K, j):
    C = gamma(params, "E13")
    m = MPoly.monomial(params.varset, (j, 0, 0))
    out = {}
    for k in range(K + 1):
        for s in range(k + 1):
            c = m.coeff((j + s, k - s, s))
            out[f"{k},{s}"] = str(-c if s % 2 else c)
        m = apply(C, m)
    return out


def main():
    GOLDEN.mkdir(parents=True, exist_ok=True)
    for name, (r, w) in STATE_CASES.items():
        p = RepParams(3, r)
        pairs = [(i, state_v_by_action(i, p)) for i in enumerate_indices(p, w)]
        (GOLDEN / name).write_text(basis_to_json(pairs) + "\n")
        print(f"{name}: {len(pairs)} states")
    p = RepParams(3, (1, 1))
    (GOLDEN / "kernel_r1_1_w4.json").write_text(invariant_subspace(p, 4).to_json() + "\n")
    p = RepParams(3, (1, 2))
    (GOLDEN / "diagram_r1_2.json").write_text(render(build_diagram(p), "json").decode() + "\n")
    betas = {}
    for r in [(2, 1), (3, 0), (1, 3)]:
        p = RepParams(3, r)
        betas[",".join(map(str, r))] = {str(j): beta_by_action(p, 5, j) for j in range(int(r[0]) + 1)}
    (GOLDEN / "beta_tables.json").write_text(json.dumps(betas, indent=1) + "\n")
    print("kernel, diagram and beta tables written")


if __name__ == "__main__":
    main()

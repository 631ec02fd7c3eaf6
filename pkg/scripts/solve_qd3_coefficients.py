"""Solve for the coefficients of the double-sum operator from the intertwining condition.

Each (s, t) term is fixed up to a scalar c_{s,t}; stacking
op(Gamma_src(X) m) - Gamma_tgt(X) op(m) = 0 over generators and monomials gives a
linear system whose nullspace is compared with the closed-form coefficients.

    python scripts/solve_qd3_coefficients.py --r 1/2,1/2 --window 6
"""

import argparse
from fractions import Fraction

from uqpoly import linalg
from uqpoly.intertwiners import _L, _qd3_ratio, gl_pair, op_qd3
from uqpoly.mpoly import MPoly, monomials_upto
from uqpoly.qdiff import apply, lower_op, qbracket_op, qexp_op
from uqpoly.qscalar import ONE, qfact, qpow
from uqpoly.uqsl import RepParams, gamma, parse_r, sl_generators


def term_ops(params):
    vs = params.varset
    r = params.r[0] + params.r[1]
    M = int(r) + 2
    out = {}
    for s in range(M + 1):
        for t in range(M - s + 1):
            op = lower_op(vs, (t, M - t, t))
            for u in range(1, M - s - t + 1):
                op = op @ qbracket_op(vs, _L(-t + 1 - u, x=1))
            op = op @ qexp_op(vs, _L(x=Fraction(2 * s - M, 4), z=Fraction(t + M, 4), y=Fraction(t, 4)), 1)
            out[(s, t)] = op
    return out


def closed_coefficient(params, s, t, cross_term=True):
    r1, r2 = params.r
    R = int(r1 + r2)
    M = R + 2
    d = params.scale
    e = Fraction(M - t - 2 * s, 4) * r1 + Fraction(M * t, 2) + Fraction((R + 1) * (s - 4), 2)
    if cross_term:
        e -= Fraction(s * t, 2)
    c = _qd3_ratio(params, s, "poly") * qpow(e, d)
    return c / (qfact(s, d) * qfact(t, d) * qfact(M - s - t, d))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--r", default="1/2,1/2")
    ap.add_argument("--window", type=int, default=6)
    a = ap.parse_args()
    params = RepParams(3, parse_r(a.r))
    iw = op_qd3(params, mode="poly")
    src, tgt = gl_pair(iw)
    ops = term_ops(params)
    keys = sorted(ops)
    vs = params.varset
    rows = {}
    for g in sl_generators(3):
        A, B = gamma(src, g), gamma(tgt, g)
        for e in monomials_upto(3, a.window):
            m = MPoly._raw(vs, {e: ONE})
            for col, k in enumerate(keys):
                img = apply(ops[k], apply(A, m)) - apply(B, apply(ops[k], m))
                for f, c in img._t.items():
                    rows.setdefault((str(g), e, f), [0] * len(keys))[col] = c
    mat = [[x if x else ONE * 0 for x in row] for row in rows.values()]
    ns = linalg.nullspace(mat, len(keys))
    print(f"r = {params.r}: {len(keys)} unknowns, {len(mat)} equations, nullspace dimension {len(ns)}")
    if len(ns) != 1:
        return
    v = ns[0]
    ref = next(i for i, x in enumerate(v) if x)
    for cross in (True, False):
        base = closed_coefficient(params, *keys[ref], cross)
        ok = all(
            v[i] * base == closed_coefficient(params, *k, cross) * v[ref] for i, k in enumerate(keys)
        )
        print(f"closed form {'with' if cross else 'without'} q^(-st/2): {'matches' if ok else 'does not match'}")


if __name__ == "__main__":
    main()

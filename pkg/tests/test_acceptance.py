"""Acceptance criteria, each run exactly (zero tolerance) and reported as one PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v -s`` or ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import sys
from fractions import Fraction
from math import factorial

import pytest

from uqpoly.basis import (
    StateIndex,
    _rank_of,
    beta,
    enumerate_indices,
    kernel_vs_states,
    qhyper_2f1,
    state_v,
    states_for,
)
from uqpoly.intertwiners import (
    check_intertwining,
    invariant_subspace,
    kernel_matrix,
    op_dx_power,
    op_n2_xminus,
    op_qd2,
    op_qd3,
)
from uqpoly.mpoly import MPoly, monomials_upto
from uqpoly.newton import build_diagram, closed_form_count, count_points
from uqpoly.qdiff import apply, first_difference
from uqpoly.qscalar import ZERO, limit_t_to_1, qnum, qpoch, qpow, tpow
from uqpoly.uqsl import RepParams, gamma, gamma3_fast, sl_generators, verify_relations

half = Fraction(1, 2)
GRID = [(a, b) for a in range(3) for b in range(3)] + [(half, half)]


def P(*r, **kw):
    return RepParams(len(r) + 1, tuple(Fraction(x) for x in r), **kw)


_lines = []


def report(num: int, title: str, failures: list):
    ok = not failures
    line = f"{'PASS' if ok else 'FAIL'} criterion {num:>2}: {title}"
    if failures:
        line += f"  [{len(failures)} failing, first: {failures[0]}]"
    _lines.append(line)
    print(line)
    assert ok, line


@pytest.fixture(autouse=True)
def _show(capsys):
    yield
    if _lines:
        with capsys.disabled():
            sys.stdout.write("\n" + _lines.pop() + "\n")


# ---------------------------------------------------------------------------
# 1. relation suite


def test_criterion_01_relations():
    fails = []
    params = [P(*r) for r in GRID] + [P(r) for r in (0, 1, 2, half)]
    for p in params:
        bad = [c.name for c in verify_relations(p, W=5) if not c.ok]
        fails += [(p.r, b) for b in bad]
    report(1, "defining relations at W = 5 for n = 2, 3", fails)


# ---------------------------------------------------------------------------
# 2. builder consistency


def test_criterion_02_builders():
    fails = []
    for r in [(1, 1), (half, Fraction(3, 2)), (2, -half), (Fraction(-1, 3), Fraction(2, 3))]:
        for r0 in (0, 4):
            for sl in (True, False):
                p = P(*r, r0=r0, sl=sl)
                for g in sl_generators(3):
                    a, b = gamma(p, g), gamma3_fast(p, g)
                    if a != b or first_difference(a, b, 5) is not None:
                        fails.append((r, r0, sl, str(g)))
        # the sl operators do not see r0 at all
        for g in sl_generators(3):
            if gamma(P(*r, r0=4), g) != gamma(P(*r), g):
                fails.append((r, "r0-dependence", str(g)))
    report(2, "recursive builder = closed forms for all generators, r0 in {0, 4}", fails)


# ---------------------------------------------------------------------------
# 3. lowest-weight data


def test_criterion_03_lowest_weight():
    fails = []
    for r in [0, 1, 2, 3, -1, -3, half, Fraction(-5, 2)]:
        p = P(r)
        vs, d = p.varset, p.scale
        one = MPoly.constant(vs)
        x = MPoly.monomial(vs, (1,))
        want = {"H1": one.scale_by(-p.r[0]), "E12": x.scale_by(qnum(p.r[0], d)), "E21": MPoly(vs)}
        for g, w in want.items():
            if apply(gamma(p, g), one) != w:
                fails.append((p.r, g))
    for r1 in (0, 1, 2, 3, -2, half, Fraction(-3, 2)):
        for r2 in (0, 1, 2, -1, -3, half, Fraction(5, 2)):
            p = P(r1, r2)
            a, b = p.r
            vs, d = p.varset, p.scale
            one = MPoly.constant(vs)
            x, z, y = (MPoly.monomial(vs, e) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
            want = {
                "E12": x.scale_by(qnum(a, d)),
                "E21": MPoly(vs),
                "H1": one.scale_by(-a),
                "H2": one.scale_by(-b),
                "E31": MPoly(vs),
                "E32": MPoly(vs),
                "E13": z.scale_by(qpow(-a / 4, d) * qnum(a + b, d)) - (x * y).scale_by(qpow((2 * b + 1) / 4, d) * qnum(a, d)),
                "E23": y.scale_by(qnum(b, d)),
            }
            for g, w in want.items():
                if apply(gamma(p, g), one) != w:
                    fails.append((p.r, g))
    report(3, "action on the lowest weight vector 1 for n = 2, 3", fails)


# ---------------------------------------------------------------------------
# 4. dimension formula


def test_criterion_04_dimensions():
    fails = []
    for r1 in range(3):
        for r2 in range(3):
            p = P(r1, r2)
            r = r1 + r2
            want = (r1 + 1) * (r2 + 1) * (r + 2) // 2
            # stability is judged between W = r+2 and r+4, not by the W-1 heuristic
            d1 = invariant_subspace(p, r + 2, check_window=False).dimension
            d2 = invariant_subspace(p, r + 4, check_window=False).dimension
            if not d1 == d2 == want:
                fails.append(((r1, r2), d1, d2, want))
    report(4, "invariant subspace dimension (r1+1)(r2+1)(r+2)/2, stable from W = r+2 to r+4", fails)


# ---------------------------------------------------------------------------
# 5. adjoint representation


def test_criterion_05_adjoint():
    p = P(1, 1)
    vs = p.varset
    fails = []
    rep = kernel_vs_states(p, 4)
    if not rep.agree:
        fails.append(("weights", rep.disagreements()))
    kb = invariant_subspace(p, 4)
    states = [v for _, v in states_for(p)]
    if kb.dimension != 8 or len(states) != 8:
        fails.append(("count", kb.dimension, len(states)))
    xy, z = MPoly.monomial(vs, (1, 0, 1)), MPoly.monomial(vs, (0, 1, 0))
    v101 = xy.scale_by(tpow(1) + tpow(-3)) - z.scale_by(tpow(-5))
    v010 = -xy.scale_by(tpow(3)) + z.scale_by(tpow(1) + tpow(-3))
    if state_v(StateIndex(1, 0, 1), p) != v101:
        fails.append("v101")
    if state_v(StateIndex(0, 1, 0), p) != v010:
        fails.append("v010")
    if _rank_of(kb.basis + states, vs) != 8 or _rank_of(states, vs) != 8:
        fails.append("span")
    report(5, "r = (1,1): kernel span = the 8 states, v101 and v010 exact", fails)


# ---------------------------------------------------------------------------
# 6. intertwining


def test_criterion_06_intertwining():
    iws = []
    for r1 in range(3):
        for r2 in (0, 1, 2, half, -1, -3):
            iws.append(op_dx_power(P(r1, r2)))
            iws.append(op_qd2(P(r2, r1)))
    for r in [(half, half), (Fraction(3, 2), -half), (half, Fraction(-3, 2))]:
        iws.append(op_qd3(P(*r)))
    for r in [(2, -2), (3, -2), (-2, 3), (2, -1), (-1, 2), (half, Fraction(-3, 2))]:
        iws.append(op_qd3(P(*r), regularized=True))
    for r in range(5):
        iws.append(op_n2_xminus(P(r)))
    fails = []
    for iw in iws:
        rep = check_intertwining(iw, W=5)
        if not rep.ok:
            fails.append((iw.label, iw.source.r, rep.witness))
    report(6, f"intertwining of {len(iws)} operators at W = 5", fails)


# ---------------------------------------------------------------------------
# 7. beta coefficients


def test_criterion_07_beta():
    fails = []
    for r1 in range(4):
        for r2 in range(4):
            p = P(r1, r2)
            r = r1 + r2
            for j in range(r1 + 1):
                for k in range(7):
                    for s in range(7):
                        a = beta(k, s, j, p)
                        b = beta(k, s, j, p, method="recursive")
                        if a != b:
                            fails.append(("recursion", (r1, r2), j, k, s))
                        zero = s > min(k, r1 - j) or k > r - j
                        if (a == ZERO) != zero:
                            fails.append(("pattern", (r1, r2), j, k, s))
                        # the two-case vanishing rule, as a sufficient condition
                        rule_zero = s > min(k, r1 - j) if r != r1 else s > k
                        if rule_zero and a != ZERO:
                            fails.append(("two-case rule", (r1, r2), j, k, s))
    report(7, "beta: recursion = closed form for k, s <= 6, vanishing pattern", fails)


# ---------------------------------------------------------------------------
# 8. hypergeometric states at r = -1


def test_criterion_08_hypergeometric():
    fails = []
    r1 = half
    p = P(r1, -1 - r1)
    vs, d = p.varset, p.scale
    for j in range(4):
        for l in range(4):
            v = state_v(StateIndex(l, 0, j), p)
            pre = qpow(Fraction(-l * j, 4), d) * qpoch(r1, j, d) * qpoch(j - r1 - 1, l, d)
            coef = qhyper_2f1(-j, -l, r1 - j + 1, min(j, l), d)
            w = {}
            for s, c in enumerate(coef):
                w[(j - s, s, l - s)] = pre * c * qpow(s * (r1 + l) / 4, d)
            if v != MPoly(vs, w):
                fails.append(("2F1", j, l))
    # classical states annihilated by (r1 - x dx) dz - dy dx
    for r1 in (half, Fraction(3, 2), Fraction(-1, 3)):
        for j in range(4):
            for l in range(4):
                f = {}
                for n in range(min(j, l) + 1):
                    rising = 1
                    for i in range(n):
                        rising *= r1 - j + 1 + i
                    f[(j - n, n, l - n)] = Fraction(
                        factorial(j) * factorial(l), factorial(n) * factorial(j - n) * factorial(l - n)
                    ) / rising
                out = {}
                for (a, b, c), val in f.items():
                    if b:
                        out[(a, b - 1, c)] = out.get((a, b - 1, c), 0) + val * b * (r1 - a)
                    if a and c:
                        out[(a - 1, b, c - 1)] = out.get((a - 1, b, c - 1), 0) - val * a * c
                if any(out.values()):
                    fails.append(("classical", r1, j, l))
                # the q -> 1 limit of the state is proportional to f
                if r1 == half:
                    lim = {e: limit_t_to_1(c) for e, c in state_v(StateIndex(l, 0, j), p).items()}
                    lead = lim.get((j, 0, l), Fraction(0))
                    if lead and {e: c for e, c in lim.items() if c} != {e: lead * c for e, c in f.items()}:
                        fails.append(("limit", j, l))
    report(8, "r = -1: states = prefactor x 2F1^q; classical states solve the q = 1 equation", fails)


# ---------------------------------------------------------------------------
# 9. counting and diagrams


def test_criterion_09_counting():
    fails = []
    for r1 in range(6):
        for r2 in range(6):
            p = P(r1, r2)
            d = build_diagram(p)
            if count_points(d) != closed_form_count(r1, r2) or count_points(d) != len(enumerate_indices(p)):
                fails.append(("count", r1, r2))
    W = 6
    samples = [(1, 1), (2, half), (half, 2), (half, half), (Fraction(3, 2), -half),
               (2, -2), (3, -2), (-2, 3), (-2, 2), (2, -1), (-1, 2), (0, -1), (-1, 0)]
    seen = set()
    for r in samples:
        p = P(*r)
        seen.add(build_diagram(p, W).case_tag)
        d = build_diagram(p, W)
        want = {(i.j, i.l, i.k) for i in enumerate_indices(p, W)}
        if d.point_set() != want:
            fails.append(("points", r))
    # the degenerate mixed points reduce to the single-box index sets
    for a in (0, 2, 3):
        e = enumerate_indices(P(a, -1), W).as_set()
        if e != {(l, k, j) for l in range(W + 1) for k in range(W + 1) for j in range(a + 1) if l + k + j <= W}:
            fails.append(("R1 box", a))
        e = enumerate_indices(P(-1, a), W).as_set()
        if e != {(l, k, j) for l in range(a + 1) for k in range(W + 1) for j in range(W + 1) if l + k + j <= W}:
            fails.append(("R2 box", a))
    want_tags = {"BOTH_FINITE", "R1_ONLY", "R2_ONLY", "RPLUS1_ONLY", "MIXED_R1:two-sets",
                 "MIXED_R2:two-sets", "MIXED_R1:edge", "MIXED_R2:edge"}
    if seen != want_tags:
        fails.append(("classes", sorted(want_tags - seen)))
    report(9, "point counts and diagram point sets for every class", fails)


# ---------------------------------------------------------------------------
# 10. n = 2 module


def test_criterion_10_sl2():
    fails = []
    for r in range(5):
        p = P(r)
        vs = p.varset
        Xp, Xm, H = gamma(p, "E12"), gamma(p, "E21"), gamma(p, "H1")
        for k in range(r + 5):
            m = MPoly.monomial(vs, (k,))
            if apply(Xp, m) != MPoly(vs, {(k + 1,): qnum(r - k)}):
                fails.append(("X+", r, k))
            want = MPoly(vs, {(k - 1,): qnum(k)}) if k else MPoly(vs)
            if apply(Xm, m) != want:
                fails.append(("X-", r, k))
            if apply(H, m) != m.scale_by(2 * k - r):
                fails.append(("H", r, k))
        ker = kernel_matrix([op_n2_xminus(p).op], r + 4, vs)
        want = [MPoly.monomial(vs, (k,)) for k in range(r + 1)]
        if sorted(ker.basis, key=lambda q: list(q._t)) != want:
            fails.append(("kernel", r))
        if apply(Xm, MPoly.monomial(vs, (r + 1,))) != MPoly(vs, {(r,): qnum(r + 1)}) or not qnum(r + 1):
            fails.append(("complement", r))
    report(10, "n = 2 action table, kernel of (X-)^(r+1), complement not invariant", fails)


# ---------------------------------------------------------------------------
# 11. classical limit


def _classical_ops(r1, r2):
    r = r1 + r2

    def act(terms):
        # terms: list of (coefficient function of (a, b, c), shift) with the polynomial in (x, z, y)
        def f(e):
            out = {}
            for coef, shift in terms:
                v = coef(*e)
                if v:
                    t = tuple(x + s for x, s in zip(e, shift))
                    out[t] = out.get(t, 0) + v
            return {k: v for k, v in out.items() if v}

        return f

    X, Z, Y = (1, 0, 0), (0, 1, 0), (0, 0, 1)
    neg = lambda s: tuple(-x for x in s)
    add = lambda a, b: tuple(x + y for x, y in zip(a, b))
    return {
        # x (r1 - x dx) + z dy
        "E12": act([(lambda a, b, c: r1 - a, X), (lambda a, b, c: c, add(Z, neg(Y)))]),
        # dx + y dz
        "E21": act([(lambda a, b, c: a, neg(X)), (lambda a, b, c: b, add(Y, neg(Z)))]),
        "H1": act([(lambda a, b, c: 2 * a - c + b - r1, (0, 0, 0))]),
        "H2": act([(lambda a, b, c: -a + 2 * c + b - r2, (0, 0, 0))]),
        "E31": act([(lambda a, b, c: b, neg(Z))]),
        "E32": act([(lambda a, b, c: c, neg(Y))]),
        # z (r - x dx - z dz - y dy) - y x (r1 - x dx)
        "E13": act([(lambda a, b, c: r - a - b - c, Z), (lambda a, b, c: -(r1 - a), add(X, Y))]),
        # y (r2 + x dx - z dz - y dy) - z dx
        "E23": act([(lambda a, b, c: r2 + a - b - c, Y), (lambda a, b, c: -a, add(Z, neg(X)))]),
    }


def test_criterion_11_classical():
    from uqpoly.classical import apply_classical, classical_limit

    fails = []
    for r in [(0, 0), (1, 1), (2, 1), (half, half), (Fraction(-3, 2), Fraction(2, 3)), (3, -2)]:
        p = P(*r)
        hand = _classical_ops(*p.r)
        for g in sl_generators(3):
            op = gamma(p, g)
            cop = classical_limit(op)
            for e in monomials_upto(3, 4):
                m = MPoly.monomial(p.varset, e)
                got = {k: limit_t_to_1(c) for k, c in apply(op, m).items()}
                got = {k: v for k, v in got.items() if v}
                want = hand[str(g)](e)
                if got != want or apply_classical(cop, m) != want:
                    fails.append((r, str(g), e))
    report(11, "q -> 1 limits of the n = 3 generators on monomials of degree <= 4", fails)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))

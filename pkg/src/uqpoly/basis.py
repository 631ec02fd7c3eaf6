"""Explicit polynomial bases of the n = 3 subrepresentations.

States are v_{l k j} = A^l C^k B^j . 1 with A = Gamma(E23), B = Gamma(E12),
C = Gamma(E13).  Everything here is an explicit finite sum; the operator
action is the independent check.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from . import linalg
from .mpoly import MPoly, VarSet, format_poly, monomials_upto, parse_poly
from .qdiff import apply
from .qscalar import ONE, ZERO, PoleError, QScalar, qbinom, qfact, qnum, qpoch, qpoch_rising, qpow
from .uqsl import Reducibility, RepParams, classify, gamma, mixed_edge

__all__ = [
    "StateIndex",
    "beta",
    "beta_table",
    "state_v",
    "state_v_by_action",
    "apply_word",
    "reorder_identities",
    "transform_relations",
    "transform_constant",
    "qhyper_2f1",
    "IndexSet",
    "enumerate_indices",
    "lambda_solution_check",
    "states_for",
    "basis_to_json",
    "basis_from_json",
    "CheckResult",
    "kernel_vs_states",
    "KernelStateReport",
]


@dataclass(frozen=True, order=True)
class StateIndex:
    l: int
    k: int
    j: int

    def __post_init__(self):
        if min(self.l, self.k, self.j) < 0:
            raise ValueError(f"negative state index {self}")

    def as_list(self) -> list:
        return [self.l, self.k, self.j]


@dataclass
class CheckResult:
    name: str
    ok: bool
    witness: object = None

    def as_dict(self) -> dict:
        d = {"name": self.name, "status": "pass" if self.ok else "fail"}
        if self.witness is not None:
            d["witness"] = str(self.witness)
        return d


def _n3(params: RepParams):
    if params.n != 3:
        raise ValueError("the basis module is for n = 3")
    r1, r2 = params.r
    return r1, r2, r1 + r2, params.scale


# ---------------------------------------------------------------------------
# beta coefficients: C^k x^j = sum_s (-1)^s beta_{k,s} x^(j+s) z^(k-s) y^s


def beta_table(K: int, j: int, params: RepParams) -> dict:
    """beta_{k,s} for k <= K from the one-step recursion, starting at beta_{0,0} = 1."""
    r1, r2, r, d = _n3(params)
    b = {(0, 0): ONE}
    for k in range(K):
        for s in range(k + 2):
            lo = b.get((k, s), ZERO)
            hi = b.get((k, s - 1), ZERO)
            v = ZERO
            if lo:
                v = v + qpow(Fraction(j - s, 4) - r1 / 4, d) * qnum(r - j - s - k, d) * lo
            if hi:
                v = v + qpow((2 * r2 + j - k - s + 2) / Fraction(4), d) * qnum(r1 - j - s + 1, d) * hi
            b[(k + 1, s)] = v
    return b


def beta(k: int, s: int, j: int, params: RepParams, method: str = "closed") -> QScalar:
    if not 0 <= s <= k:
        return ZERO
    if method == "recursive":
        return beta_table(k, j, params)[(k, s)]
    if method != "closed":
        raise ValueError(f"unknown method {method!r}")
    r1, r2, r, d = _n3(params)
    e = Fraction(k, 4) * (j - r1) + Fraction(s, 4) * (2 * r - r1 + 2 - k)
    # both factorial ratios as falling products
    return qpow(e, d) * qbinom(k, s, d) * qpoch(r1 - j, s, d) * qpoch(r - j - s, k - s, d)


# ---------------------------------------------------------------------------
# states


def state_v(idx: StateIndex, params: RepParams) -> MPoly:
    """Closed double sum for v_{l k j}; every Gamma_q ratio is a falling product."""
    r1, r2, r, d = _n3(params)
    l, k, j = idx.l, idx.k, idx.j
    vs = params.varset
    out = {}
    for s in range(k + 1):
        head = qbinom(k, s, d) * qpoch(r1, j + s, d) * qpoch(r - j - s, k - s, d)
        if not head:
            continue
        for n in range(min(l, j + s) + 1):
            e = Fraction((j - r1) * k - l * j, 4) + Fraction(s - n, 4) * (r1 + 2 * r2 - k - l + 2)
            c = head * qbinom(l, n, d) * qpow(e, d)
            c = c * qpoch(r2 + j + s - k - n, l - n, d) * qpoch(j + s, n, d)
            if not c:
                continue
            if (s - n) % 2:
                c = -c
            mono = (j + s - n, k - s + n, l + s - n)
            out[mono] = out[mono] + c if mono in out else c
    return MPoly(vs, out)


def apply_word(ops: list, p: MPoly) -> MPoly:
    """Apply the product ops[0] ops[1] ... (rightmost first)."""
    for op in reversed(ops):
        p = apply(op, p)
    return p


def _abc(params: RepParams):
    return gamma(params, "E23"), gamma(params, "E12"), gamma(params, "E13")


def state_v_by_action(idx: StateIndex, params: RepParams) -> MPoly:
    A, B, C = _abc(params)
    p = MPoly.constant(params.varset, 1)
    return apply_word([A] * idx.l + [C] * idx.k + [B] * idx.j, p)


# ---------------------------------------------------------------------------
# reordering and transformation identities


def reorder_identities(params: RepParams, bound: int = 3, W: int = 3) -> list:
    """Commutation identities among A, B, C, checked on every monomial of degree <= W."""
    r1, r2, r, d = _n3(params)
    A, B, C = _abc(params)
    vs = params.varset
    mons = [MPoly._raw(vs, {e: ONE}) for e in monomials_upto(len(vs), W)]
    out = []

    def check(name, lhs, rhs_terms):
        for m in mons:
            rhs = MPoly(vs)
            for c, word in rhs_terms:
                rhs = rhs + apply_word(word, m).scale_by(c)
            if apply_word(lhs, m) != rhs:
                return CheckResult(name, False, next(iter(m._t)))
        return CheckResult(name, True)

    for a in range(bound + 1):
        for b in range(bound + 1):
            c = qpow(Fraction(a * b, 2), d)
            out.append(check(f"A^{a} C^{b} = q^({a * b}/2) C^{b} A^{a}", [A] * a + [C] * b, [(c, [C] * b + [A] * a)]))
            out.append(check(f"C^{b} B^{a} = q^({a * b}/2) B^{a} C^{b}", [C] * b + [B] * a, [(c, [B] * a + [C] * b)]))
    for j in range(bound + 1):
        for l in range(bound + 1):
            terms = []
            for t in range(min(j, l) + 1):
                c = qbinom(l, t, d) * qbinom(j, t, d) * qfact(t, d) * qpow(Fraction((l - t) * (j - t), 2), d)
                terms.append((c, [A] * (l - t) + [C] * t + [B] * (j - t)))
            out.append(check(f"B^{j} A^{l} expansion", [B] * j + [A] * l, terms))
    one = MPoly.constant(vs, 1)
    if r2.denominator == 1 and r2 >= 0:
        m2 = int(r2) + 1
        ok = apply_word([A] * m2, one).is_zero()
        out.append(CheckResult(f"A^{m2} 1 = 0", ok))
        # boundary: A^m C^k B^j 1 with m = r2 + 1 is a combination of states with l < m
        for k in range(bound + 1):
            for j in range(bound + 1):
                lhs = state_v_by_action(StateIndex(m2, k, j), params)
                rhs = MPoly(vs)
                for t in range(1, min(m2, j) + 1):
                    c = qbinom(m2, t, d) * qbinom(j, t, d) * qfact(t, d)
                    c = c * qpow(Fraction((m2 - t) * (j - t) - m2 * j + m2 * k - k * (m2 - t), 2), d)
                    rhs = rhs - state_v(StateIndex(m2 - t, k + t, j - t), params).scale_by(c)
                out.append(CheckResult(f"boundary A^{m2} C^{k} B^{j} 1", lhs == rhs, None if lhs == rhs else (k, j)))
    return out


def _v2(k: int, j: int, params: RepParams) -> MPoly:
    return state_v(StateIndex(0, k, j), params)


def transform_constant(k: int, j: int, params: RepParams, short_form: bool = False) -> QScalar:
    """c with A v_{k j} = c v_{k+1, j-1}.

    Derived value: -q^((k-j-r2)/2) [j] [r1-j+1] / [r-j+1].  ``short_form=True``
    gives -q^(-(r+1)/2) [j], which disagrees with the action (already at
    q = 1 when r2 > 0).
    """
    r1, r2, r, d = _n3(params)
    if short_form:
        return -qpow(Fraction(-(r + 1), 2), d) * qnum(j, d)
    return -qpow(Fraction(k - j, 2) - r2 / 2, d) * qnum(j, d) * qnum(r1 - j + 1, d) / qnum(r - j + 1, d)


def transform_relations(params: RepParams, short_form: bool = False) -> list:
    """A v_{k j} = c v_{k+1, j-1} for all k, j when r2 = 0, and on the edge k = r - j otherwise."""
    r1, r2, r, d = _n3(params)
    if r1.denominator != 1 or r2.denominator != 1 or r1 < 0 or r2 < 0:
        raise ValueError("transform relations need nonnegative integer parameters")
    A = gamma(params, "E23")
    R = int(r)
    pairs = []
    for j in range(int(r1) + 1):
        if r2 == 0:
            pairs.extend((k, j) for k in range(R - j + 1))
        else:
            pairs.append((R - j, j))
    out = []
    for k, j in pairs:
        lhs = apply(A, _v2(k, j, params))
        if j > 0:
            rhs = _v2(k + 1, j - 1, params).scale_by(transform_constant(k, j, params, short_form))
        else:
            rhs = MPoly(params.varset)
        out.append(CheckResult(f"A v[{k},{j}]", lhs == rhs, None if lhs == rhs else (k, j)))
    return out


# ---------------------------------------------------------------------------
# terminating q-hypergeometric sum


def qhyper_2f1(a: int, b: int, c: int, k_terminate: int, scale: int = 1) -> list:
    """Coefficients of w^s, s <= k_terminate: (a)_s (b)_s / ((c)_s [s]!) with rising q-Pochhammers.

    Arguments may be rationals; a zero (c)_s before termination raises PoleError.
    """
    out = []
    for s in range(k_terminate + 1):
        den = qpoch_rising(c, s, scale)
        if not den:
            raise PoleError(f"(c)_s vanishes at c = {c}, s = {s}")
        out.append(qpoch_rising(a, s, scale) * qpoch_rising(b, s, scale) / (den * qfact(s, scale)))
    return out


# ---------------------------------------------------------------------------
# index sets


@dataclass
class IndexSet:
    indices: list
    cls: Reducibility
    truncated: bool
    window: int | None
    constraints: list = field(default_factory=list)

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def as_set(self) -> set:
        return {(i.l, i.k, i.j) for i in self.indices}


def _int(x: Fraction) -> int:
    return int(x)


def _boxes(params: RepParams) -> tuple:
    """Index region as a union of boxes: list of ((l range), (k range), (j range)), None = unbounded.

    Also returns the printable constraint list and the class tag.
    """
    r1, r2 = params.r
    r = r1 + r2
    cls = classify(params)
    inf = None
    if cls is Reducibility.BOTH_FINITE:
        return cls, [("sum", _int(r), (0, _int(r2)), (0, _int(r1)))], [
            "0 <= j + k + l <= r",
            "0 <= j <= r1",
            "0 <= l <= r2",
        ]
    if cls is Reducibility.R1_ONLY or (cls is Reducibility.MIXED_R1 and mixed_edge(params)):
        return cls, [((0, inf), (0, inf), (0, _int(r1)))], ["0 <= k", "0 <= j <= r1", "0 <= l"]
    if cls is Reducibility.R2_ONLY or (cls is Reducibility.MIXED_R2 and mixed_edge(params)):
        return cls, [((0, _int(r2)), (0, inf), (0, inf))], ["0 <= k", "0 <= j", "0 <= l <= r2"]
    if cls is Reducibility.RPLUS1_ONLY:
        return cls, [((0, inf), (0, _int(r + 1)), (0, inf))], ["0 <= k <= r + 1", "0 <= j", "0 <= l"]
    if cls is Reducibility.MIXED_R1:
        m = _int(-r2 - 1)
        return cls, [((0, inf), (0, inf), (m, _int(r1))), ((0, inf), (0, _int(r + 1)), (0, m - 1))], [
            "0 <= k, -r2 - 1 <= j <= r1, 0 <= l",
            "or 0 <= k <= r + 1, 0 <= j <= -r2 - 2, 0 <= l",
        ]
    if cls is Reducibility.MIXED_R2:
        m = _int(-r1 - 1)
        return cls, [((m, _int(r2)), (0, inf), (0, inf)), ((0, m - 1), (0, _int(r + 1)), (0, inf))], [
            "0 <= k, 0 <= j, -r1 - 1 <= l <= r2",
            "or 0 <= k <= r + 1, 0 <= j, 0 <= l <= -r1 - 2",
        ]
    raise ValueError(f"{params.r} is generic: no proper invariant subspace")


def _in_box(box, l, k, j) -> bool:
    if box[0] == "sum":
        _, tot, (l0, l1), (j0, j1) = box
        return l + k + j <= tot and l0 <= l <= l1 and j0 <= j <= j1
    for x, (lo, hi) in zip((l, k, j), box):
        if x < lo or (hi is not None and x > hi):
            return False
    return True


def _finite_boxes(boxes) -> bool:
    return all(b[0] == "sum" or all(hi is not None for _, hi in b) for b in boxes)


def enumerate_indices(params: RepParams, window: int | None = None) -> IndexSet:
    """Admissible (l, k, j) for the class of ``params``.

    Unbounded directions are cut at l + k + j <= window (``truncated`` is set).
    """
    cls, boxes, constraints = _boxes(params)
    finite = _finite_boxes(boxes)
    if finite:
        bound = max(
            (b[1] if b[0] == "sum" else sum(hi for _, hi in b)) for b in boxes
        )
        truncated = False
    else:
        if window is None:
            raise ValueError("an infinite index set needs a window")
        bound = window
        truncated = True
    found = []
    for tot in range(bound + 1):
        for l in range(tot + 1):
            for k in range(tot - l + 1):
                j = tot - l - k
                if any(_in_box(b, l, k, j) for b in boxes):
                    found.append(StateIndex(l, k, j))
    found.sort()
    return IndexSet(found, cls, truncated, window if truncated else None, constraints)


def states_for(params: RepParams, window: int | None = None) -> list:
    """(index, polynomial) pairs over the enumerated index set."""
    return [(i, state_v(i, params)) for i in enumerate_indices(params, window)]


def basis_to_json(pairs: Iterable) -> str:
    return json.dumps(
        [{"index": i.as_list(), "polynomial": format_poly(p)} for i, p in pairs], indent=2
    )


def basis_from_json(text: str, vs: VarSet) -> list:
    return [(StateIndex(*d["index"]), parse_poly(d["polynomial"], vs)) for d in json.loads(text)]


# ---------------------------------------------------------------------------
# the r2 = 0 two-equation characterization


@dataclass
class LambdaReport:
    r: int
    window: int
    dimension: int
    expected: int
    ansatz_in_kernel: bool
    spans_kernel: bool
    matches_beta: bool

    @property
    def ok(self) -> bool:
        return (
            self.dimension == self.expected
            and self.ansatz_in_kernel
            and self.spans_kernel
            and self.matches_beta
        )


def _rank_of(polys: list, vs: VarSet) -> int:
    if not polys:
        return 0
    cols = sorted({e for p in polys for e in p._t})
    rows = [[p.coeff(e) for e in cols] for p in polys]
    return linalg.rank(rows, len(cols))


def lambda_solution_check(r: int, W: int | None = None) -> LambdaReport:
    """At (r1, r2) = (r, 0): the joint kernel of the two defining operators is the span
    of f_{jk} = sum_s (-1)^s binom(k,s) q^(s(r+2-k)/4) x^(j+s) z^(k-s) y^s / [r-j-k]!,
    and each f_{jk} is proportional to v_{0kj}."""
    from .intertwiners import invariant_subspace

    params = RepParams(3, (r, 0))
    d = params.scale
    vs = params.varset
    if W is None:
        W = 2 * r + 1
    ker = invariant_subspace(params, W, check_window=False)
    ansatz = []
    match = True
    for j in range(r + 1):
        for k in range(r - j + 1):
            norm = ONE / qfact(r - j - k, d)
            terms = {}
            for s in range(k + 1):
                c = qbinom(k, s, d) * qpow(Fraction(s * (r + 2 - k), 4), d) * norm
                terms[(j + s, k - s, s)] = -c if s % 2 else c
            f = MPoly(vs, terms)
            ansatz.append(f)
            v = _v2(k, j, params)
            lead = v.coeff((j, k, 0))
            if not lead or v.scale_by(norm / lead) != f:
                match = False
    from .intertwiners import defining_operators

    ops = [iw.op for iw in defining_operators(params)]
    in_kernel = all(apply(op, f).is_zero() for op in ops for f in ansatz)
    rk_k = _rank_of(ker.basis, vs)
    rk_a = _rank_of(ansatz, vs)
    rk_both = _rank_of(ker.basis + ansatz, vs)
    expected = (r + 1) * (r + 2) // 2
    return LambdaReport(r, W, ker.dimension, expected, in_kernel, rk_k == rk_a == rk_both, match)


# ---------------------------------------------------------------------------
# kernel versus the enumerated states, weight by weight


def _weight(e) -> tuple:
    a, b, c = e
    return (a + b, c + b)


@dataclass
class WeightComparison:
    weight: tuple
    kernel_dim: int
    state_rank: int
    joint_rank: int

    @property
    def agree(self) -> bool:
        return self.kernel_dim == self.state_rank == self.joint_rank


@dataclass
class KernelStateReport:
    params: RepParams
    window: int
    rows: list

    @property
    def agree(self) -> bool:
        return all(r.agree for r in self.rows)

    def disagreements(self) -> list:
        return [r for r in self.rows if not r.agree]


def kernel_vs_states(params: RepParams, W: int) -> KernelStateReport:
    """Compare the exact kernel with span{v_{lkj}} on every weight space that fits in degree <= W.

    A weight (p, p') space is fully inside the window when p + p' <= W.
    """
    from .intertwiners import invariant_subspace

    vs = params.varset
    ker = invariant_subspace(params, W, check_window=False)
    by_w = {}
    for p in ker.basis:
        ws = {_weight(e) for e in p._t}
        if len(ws) != 1:
            raise ArithmeticError("kernel basis vector is not weight homogeneous")
        by_w.setdefault(ws.pop(), []).append(p)
    st_w = {}
    for idx in enumerate_indices(params, W):
        w = (idx.j + idx.k, idx.k + idx.l)
        if sum(w) <= W:
            st_w.setdefault(w, []).append(state_v(idx, params))
    rows = []
    for w in sorted(set(by_w) | set(st_w)):
        if sum(w) > W:
            continue
        kb, sb = by_w.get(w, []), st_w.get(w, [])
        rows.append(WeightComparison(w, len(kb), _rank_of(sb, vs), _rank_of(kb + sb, vs)))
    return KernelStateReport(params, W, rows)

"""Invariant q-difference operators, intertwining checks and exact kernels."""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg
from .mpoly import MPoly, VarSet, format_poly, monomials_upto, parse_poly
from .qdiff import (
    Lin,
    QDiffOp,
    apply,
    lower_op,
    mul_op,
    qbracket_op,
    qexp_op,
    scalar_op,
)
from .qscalar import (
    ONE,
    ZERO,
    PoleError,
    QScalar,
    gamma_ratio,
    qbinom,
    qfact,
    qpoch,
    qpow,
)
from .uqsl import GenLabel, Reducibility, RepParams, classify, gamma, mixed_edge, sl_generators

__all__ = [
    "Intertwiner",
    "op_dx_power",
    "op_qd2",
    "op_qd3",
    "op_n2_xminus",
    "check_intertwining",
    "gl_pair",
    "central_value",
    "fit_target_r0",
    "degree_monotone",
    "IntertwiningReport",
    "kernel_matrix",
    "KernelData",
    "KernelBasis",
    "invariant_subspace",
    "defining_operators",
    "WindowTooSmall",
]

Q14 = Fraction(1, 4)


class WindowTooSmall(UserWarning):
    pass


def _zplus(x: Fraction) -> bool:
    return x.denominator == 1 and x >= 0


def _require_zplus(x: Fraction, what: str):
    if not _zplus(x):
        raise ValueError(f"{what} = {x} is not a nonnegative integer")
    return int(x)


@dataclass(frozen=True)
class Intertwiner:
    op: QDiffOp
    source: RepParams
    target: RepParams
    label: str

    def __call__(self, p: MPoly) -> MPoly:
        return apply(self.op, p)


def op_n2_xminus(params: RepParams) -> Intertwiner:
    """(X^-)^(r+1) = D_x^(r+1) for n = 2; target r' = -r - 2."""
    if params.n != 2:
        raise ValueError("op_n2_xminus needs n = 2")
    r = _require_zplus(params.r[0], "r")
    vs = params.varset
    op = lower_op(vs, (r + 1,))
    return Intertwiner(op, params, params.with_r((-params.r[0] - 2,)), "N2_XMINUS")


def op_dx_power(params: RepParams) -> Intertwiner:
    """D_x^(r1+1); target (-r1-2, r+1)."""
    if params.n != 3:
        raise ValueError("op_dx_power needs n = 3")
    r1, r2 = params.r
    k = _require_zplus(r1, "r_1")
    op = lower_op(params.varset, (k + 1, 0, 0))
    target = params.with_r((-r1 - 2, r1 + r2 + 1)).with_r0(params.r0 + r1 + 1)
    return Intertwiner(op, params, target, "DX_POW")


def _L(c=0, x=0, z=0, y=0) -> Lin:
    return Lin(Fraction(c), (Fraction(x), Fraction(z), Fraction(y)))


def op_qd2(params: RepParams, nx_exponent: str = "k") -> Intertwiner:
    """sum_s binom(k,s) x^(k-s) D_z^(k-s) D_y^s q^(s(Nz-r1)/4 + (s-k)Ny/4 - k Nx/4), k = r2+1.

    ``nx_exponent="s"`` swaps the last exponent to ``-s Nx/4`` (used only to
    test that alternative reading).
    """
    if params.n != 3:
        raise ValueError("op_qd2 needs n = 3")
    r1, r2 = params.r
    k = _require_zplus(r2, "r_2") + 1
    vs = params.varset
    op = scalar_op(vs, 0)
    for s in range(k + 1):
        m = k if nx_exponent == "k" else s
        form = _L(-s * r1, x=-m, z=s, y=s - k)
        term = mul_op(vs, (k - s, 0, 0)) @ lower_op(vs, (0, k - s, s)) @ qexp_op(vs, form, Q14)
        op = op + term.scaled(qbinom(k, s, vs.scale))
    return Intertwiner(op, params, params.with_r((r1 + r2 + 1, -r2 - 2)), "QD2")


def _qd3_ratio(params: RepParams, s: int, mode: str) -> QScalar:
    """The s-dependent Gamma_q(-1-r1)/Gamma_q(r-r1+2-s) factor of the third operator.

    mode:
      "gamma"    -- the ratio itself (finite limit when both sit on poles)
      "poly"     -- multiplied by the s-independent Gamma_q(r-r1+2)/Gamma_q(-1-r1):
                    the falling product [r-r1+1]...[r-r1+2-s], finite everywhere
      "factorial" -- the replacement (-1)^(r+1-s) [r1-r-1+s]! / [r1+1]!
      "reg"      -- "poly" rescaled so that s = 0 agrees with "factorial"
                    (left as "poly" where that value is undefined)
    """
    r1, r2 = params.r
    r = r1 + r2
    d = params.scale
    if mode == "gamma":
        return gamma_ratio(-1 - r1, r - r1 + 2 - s, d)
    if mode == "poly":
        return qpoch(r - r1 + 1, s, d)
    if mode == "factorial":
        a = r1 - r - 1 + s
        if a.denominator != 1 or a < 0 or r1 + 1 < 0 or r1.denominator != 1:
            raise PoleError(f"factorial replacement undefined at r = {params.r}, s = {s}")
        sign = -1 if (r + 1 - s) % 2 else 1
        return qfact(int(a), d) * sign / qfact(int(r1 + 1), d)
    if mode == "reg":
        try:
            c0 = _qd3_ratio(params, 0, "factorial")
        except PoleError:
            c0 = ONE
        return c0 * qpoch(r - r1 + 1, s, d)
    raise ValueError(f"unknown mode {mode!r}")


def op_qd3(
    params: RepParams, regularized: bool = False, mode: str | None = None, cross_term: bool = True
) -> Intertwiner:
    """The double-sum operator for r+1 in Z_+; target (-r2-2, -r1-2).

    Each (s, t) term carries an extra q^(-st/2) relative to the bare
    coefficient; without it the operator fails to intertwine E12 as soon as
    s t > 0 is reachable (r >= 0).  ``cross_term=False`` drops it.

    Without regularization the Gamma_q ratio is used as is and a
    :class:`PoleError` propagates where it is infinite.  The regularized
    operator replaces the ratio by its pole-free falling-product form, which
    differs from the unregularized one by an s-independent factor wherever
    that one is finite; its s = 0 term is normalized to the factorial
    replacement.  ``mode`` overrides the choice (see ``_qd3_ratio``).
    """
    if params.n != 3:
        raise ValueError("op_qd3 needs n = 3")
    r1, r2 = params.r
    r = r1 + r2
    R = _require_zplus(r + 1, "r + 1") - 1
    if mode is None:
        mode = "reg" if regularized else "gamma"
    vs = params.varset
    d = vs.scale
    M = R + 2
    ratios = [_qd3_ratio(params, s, mode) for s in range(M + 1)]
    op = scalar_op(vs, 0)
    for s in range(M + 1):
        if not ratios[s]:
            continue
        for t in range(M - s + 1):
            c = ratios[s] * qpow(
                Fraction(M - t - 2 * s, 4) * r1 + Fraction(M * t, 2) + Fraction((R + 1) * (s - 4), 2)
                - (Fraction(s * t, 2) if cross_term else 0),
                d,
            )
            c = c / (qfact(s, d) * qfact(t, d) * qfact(M - s - t, d))
            ops = lower_op(vs, (t, M - t, t))
            for u in range(1, M - s - t + 1):
                ops = ops @ qbracket_op(vs, _L(-t + 1 - u, x=1))
            ops = ops @ qexp_op(vs, _L(x=Fraction(2 * s - M, 4), z=Fraction(t + M, 4), y=Fraction(t, 4)), 1)
            op = op + ops.scaled(c)
    label = "QD3_REG" if regularized else "QD3"
    return Intertwiner(op, params, params.with_r((-r2 - 2, -r1 - 2)), label)


def degree_monotone(iw: Intertwiner) -> bool:
    """No term raises total degree, so kernels truncated at degree W are exact."""
    return all(sum(t.up) <= sum(t.down) for t in iw.op.terms())


# ---------------------------------------------------------------------------
# intertwining


@dataclass
class IntertwiningReport:
    label: str
    ok: bool
    checked: int
    witness: tuple | None = None  # (generator, exponent vector)

    def as_dict(self) -> dict:
        d = {"name": f"intertwining[{self.label}]", "status": "pass" if self.ok else "fail"}
        if self.witness:
            d["witness"] = [self.witness[0], list(self.witness[1])]
        return d


def central_value(params: RepParams) -> Fraction:
    """Scalar by which the gl(n) centre acts: sum_i (n - i) r_i with r_0 included."""
    n = params.n
    return n * params.r0 + sum((n - i) * params.r[i - 1] for i in range(1, n))


def gl_pair(iw: Intertwiner) -> tuple:
    """Source and target as gl(n) realizations, each with its own r_0.

    r_0 only rescales E_in by q^(-r_0/4) and E_ni by q^(r_0/4), an
    automorphism of the sl(n) relations, so each constructor records which
    target r_0 the intertwining holds for (D_x power: r_0 + r_1 + 1, the
    other two: r_0).  The centre itself is not intertwined in general.
    """
    src = RepParams(iw.source.n, iw.source.r, iw.source.r0, sl=False)
    tgt = RepParams(iw.target.n, iw.target.r, iw.target.r0, sl=False)
    return src, tgt


def fit_target_r0(iw: Intertwiner, W: int = 4, span: int = 12) -> list:
    """All target r_0 in [-span, span] (step 1/d) for which E_1n intertwines up to degree W."""
    src, tgt = gl_pair(iw)
    n = src.n
    g = GenLabel("E", 1, n)
    a = gamma(src, g)
    d = src.scale
    hits = []
    for k in range(-span * d, span * d + 1):
        cand = tgt.with_r0(Fraction(k, d))
        if cand.scale != d:
            continue
        b = gamma(cand, g)
        if all(
            apply(iw.op, apply(a, m)) == apply(b, apply(iw.op, m))
            for m in (MPoly._raw(src.varset, {e: ONE}) for e in monomials_upto(len(src.varset), W))
        ):
            hits.append(Fraction(k, d))
    return hits


def check_intertwining(iw: Intertwiner, W: int = 5, generators: Iterable | None = None) -> IntertwiningReport:
    """op o Gamma(X)_source == Gamma(X)_target o op on every monomial of degree <= W.

    The check runs on the gl(n) realizations (see :func:`gl_pair`).
    """
    src, tgt = gl_pair(iw)
    vs = iw.op.vs
    gens = list(generators) if generators is not None else sl_generators(src.n)
    checked = 0
    for g in gens:
        a = gamma(src, g)
        b = gamma(tgt, g)
        if a.vs != vs or b.vs != vs:
            raise ValueError("source and target representations live on different scales")
        for e in monomials_upto(len(vs), W):
            m = MPoly._raw(vs, {e: ONE})
            checked += 1
            if apply(iw.op, apply(a, m)) != apply(b, apply(iw.op, m)):
                return IntertwiningReport(iw.label, False, checked, (str(g), e))
    return IntertwiningReport(iw.label, True, checked)


# ---------------------------------------------------------------------------
# kernels


_T0 = (Fraction(2), Fraction(3, 2), Fraction(5, 3), Fraction(7, 4), Fraction(11, 5), Fraction(13, 7))


@dataclass
class KernelData:
    dimension: int
    basis: list  # MPoly
    rank: int
    ncols: int
    eval_ranks: dict  # t0 -> rank


def kernel_matrix(ops: Sequence[QDiffOp], W: int, vs: VarSet | None = None) -> KernelData:
    """Joint kernel of ``ops`` on the monomials of degree <= W.

    Columns that never share an image monomial are eliminated separately;
    the total rank is cross-checked at three rational points.
    """
    if vs is None:
        if not ops:
            raise ValueError("need a VarSet when no operators are given")
        vs = ops[0].vs
    cols = monomials_upto(len(vs), W)
    images = {}
    col_rows = {}
    for c, e in enumerate(cols):
        m = MPoly._raw(vs, {e: ONE})
        img = {}
        for k, op in enumerate(ops):
            for f, v in apply(op, m)._t.items():
                img[(k, f)] = v
        images[c] = img
        col_rows[c] = set(img)
    basis = []
    total_rank = 0
    blocks = linalg.components(col_rows)
    block_data = []
    for block in blocks:
        rows = sorted({r for c in block for r in images[c]})
        if not rows:
            for c in block:
                basis.append((c, {c: ONE}))
            continue
        ridx = {r: i for i, r in enumerate(rows)}
        mat = [[ZERO] * len(block) for _ in rows]
        for j, c in enumerate(block):
            for r, v in images[c].items():
                mat[ridx[r]][j] = v
        block_data.append((block, mat))
        ns = linalg.nullspace(mat, len(block))
        total_rank += len(block) - len(ns)
        for v in ns:
            vec = {block[j]: x for j, x in enumerate(v) if x}
            basis.append((min(vec), vec))
    basis.sort(key=lambda bv: bv[0])
    polys = [MPoly._raw(vs, {cols[c]: x for c, x in vec.items()}) for _, vec in basis]
    eval_ranks = {}
    for t0 in _T0:
        if len(eval_ranks) == 3:
            break
        try:
            eval_ranks[t0] = sum(linalg.rank_at(mat, len(block), t0) for block, mat in block_data)
        except PoleError:
            continue
    for t0, rk in eval_ranks.items():
        if rk != total_rank:
            raise ArithmeticError(f"rank mismatch at t0 = {t0}: exact {total_rank}, evaluated {rk}")
    return KernelData(len(polys), polys, total_rank, len(cols), eval_ranks)


def defining_operators(params: RepParams) -> list:
    """The intertwiners whose joint kernel is the invariant subspace."""
    if params.n == 2:
        return [op_n2_xminus(params)]
    cls = classify(params)
    edge = mixed_edge(params)
    if cls is Reducibility.R1_ONLY:
        return [op_dx_power(params)]
    if cls is Reducibility.R2_ONLY:
        return [op_qd2(params)]
    if cls is Reducibility.BOTH_FINITE:
        return [op_dx_power(params), op_qd2(params)]
    if cls is Reducibility.RPLUS1_ONLY:
        return [op_qd3(params)]
    if cls is Reducibility.MIXED_R1:
        return [op_dx_power(params)] if edge else [op_dx_power(params), op_qd3(params, regularized=True)]
    if cls is Reducibility.MIXED_R2:
        return [op_qd2(params)] if edge else [op_qd2(params), op_qd3(params, regularized=True)]
    raise ValueError(f"{params.r} is generic: the module is irreducible")


@dataclass
class KernelBasis:
    window: int
    basis: list
    cls: Reducibility
    operators: list
    params: RepParams | None = None
    eval_ranks: dict = field(default_factory=dict)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def to_json(self) -> str:
        d = {
            "window": self.window,
            "class": str(self.cls),
            "params": [str(x) for x in self.params.r] if self.params else None,
            "operators": list(self.operators),
            "dimension": self.dimension,
            "basis": [format_poly(p) for p in self.basis],
        }
        return json.dumps(d, indent=2)

    @classmethod
    def from_json(cls, text: str, vs: VarSet) -> "KernelBasis":
        d = json.loads(text)
        params = RepParams(vs.n, tuple(Fraction(x) for x in d["params"])) if d.get("params") else None
        return cls(
            d["window"],
            [parse_poly(s, vs) for s in d["basis"]],
            Reducibility(d["class"]),
            d["operators"],
            params,
        )


def _finite(params: RepParams) -> bool:
    if params.n == 2:
        return _zplus(params.r[0])
    return classify(params) is Reducibility.BOTH_FINITE


def invariant_subspace(params: RepParams, W: int, check_window: bool = True) -> KernelBasis:
    """Exact joint kernel of the class's defining operators up to degree W."""
    cls = classify(params)
    if cls is Reducibility.GENERIC_IRREDUCIBLE:
        raise ValueError(f"{params.r} is generic: the module is irreducible")
    iws = defining_operators(params)
    data = kernel_matrix([iw.op for iw in iws], W, params.varset)
    if check_window and _finite(params) and W >= 1:
        lower = kernel_matrix([iw.op for iw in iws], W - 1, params.varset)
        if lower.dimension != data.dimension:
            warnings.warn(
                f"kernel dimension changes between W = {W - 1} and W = {W}; window may be too small",
                WindowTooSmall,
                stacklevel=2,
            )
    return KernelBasis(W, data.basis, cls, [iw.label for iw in iws], params, data.eval_ranks)

"""The realization of U_q(gl(n)) / U_q(sl(n)) by q-difference operators.

``gamma`` runs the level-by-level recursion (level m adds the variables
z_1^m, ..., z_{m-1}^m); ``gamma3_fast`` hard-codes the n = 3 closed forms.
Both return :class:`QDiffOp` objects over ``VarSet(n, scale)``.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm

from .mpoly import VarSet
from .qdiff import (
    Lin,
    QDiffOp,
    compose,
    d_op,
    first_difference,
    linear_op,
    qbracket_op,
    qexp_op,
    scalar_op,
    var_op,
)
from .qscalar import ONE, QScalar, qnum, qpow

__all__ = [
    "RepParams",
    "GenLabel",
    "parse_label",
    "sl_generators",
    "gamma",
    "gamma3_fast",
    "diag_form",
    "verify_relations",
    "RelationCheck",
    "weight_of",
    "Reducibility",
    "classify",
    "parse_r",
]

Q14 = Fraction(1, 4)
Q12 = Fraction(1, 2)


def parse_r(text: str) -> tuple:
    """``"1,1"`` or ``"1/2, -3/2"`` -> tuple of Fractions."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            raise ValueError(f"empty entry in parameter list {text!r}")
        out.append(Fraction(part))
    return tuple(out)


@dataclass(frozen=True)
class RepParams:
    """Rank n and parameters r_1..r_{n-1}.

    ``r0`` is the central gl(n) parameter; with ``sl=True`` (default) the
    generators are rescaled so that nothing depends on it.
    """

    n: int
    r: tuple
    r0: int = 0
    sl: bool = True
    scale: int = field(init=False)

    def __post_init__(self):
        r = tuple(Fraction(x) for x in self.r)
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if len(r) != self.n - 1:
            raise ValueError(f"need {self.n - 1} parameters for n = {self.n}, got {len(r)}")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "r0", Fraction(self.r0))
        d = 1
        for x in r + (self.r0,):
            d = lcm(d, x.denominator)
        object.__setattr__(self, "scale", d)

    @classmethod
    def of(cls, *r, r0=0, sl=True) -> "RepParams":
        return cls(len(r) + 1, tuple(r), r0, sl)

    @property
    def varset(self) -> VarSet:
        return VarSet(self.n, self.scale)

    def rsum(self, k: int) -> Fraction:
        """r^k = r_1 + ... + r_k (r^0 = 0)."""
        return sum(self.r[:k], Fraction(0))

    @property
    def total(self) -> Fraction:
        return self.rsum(self.n - 1)

    def with_r(self, r) -> "RepParams":
        return RepParams(self.n, tuple(r), self.r0, self.sl)

    def with_r0(self, r0) -> "RepParams":
        return RepParams(self.n, self.r, r0, self.sl)

    def label(self) -> str:
        return ",".join(str(x) for x in self.r)


# ---------------------------------------------------------------------------
# generator labels


@dataclass(frozen=True)
class GenLabel:
    kind: str  # "E", "H" or "Z"
    i: int = 0
    j: int = 0

    def __str__(self):
        if self.kind == "Z":
            return "Z"
        if self.kind == "H":
            return f"H{self.i}" if self.i < 10 else f"H_{self.i}"
        if self.i < 10 and self.j < 10:
            return f"E{self.i}{self.j}"
        return f"E_{self.i}_{self.j}"

    def check(self, n: int) -> "GenLabel":
        if self.kind == "E" and not (1 <= self.i <= n and 1 <= self.j <= n):
            raise ValueError(f"generator {self} out of range for n = {n}")
        if self.kind == "H" and not 1 <= self.i < n:
            raise ValueError(f"generator {self} out of range for n = {n}")
        return self


_LABEL = re.compile(r"^(?:E(\d)(\d)|E_(\d+)_(\d+)|H_?(\d+)|Z)$")


def parse_label(text: str, n: int | None = None) -> GenLabel:
    m = _LABEL.match(text.strip())
    if not m:
        raise ValueError(f"bad generator label {text!r}")
    if m.group(1):
        g = GenLabel("E", int(m.group(1)), int(m.group(2)))
    elif m.group(3):
        g = GenLabel("E", int(m.group(3)), int(m.group(4)))
    elif m.group(5):
        g = GenLabel("H", int(m.group(5)))
    else:
        g = GenLabel("Z")
    return g.check(n) if n is not None else g


def sl_generators(n: int) -> list:
    """Off-diagonal E_ij followed by the Cartan H_i."""
    out = [GenLabel("E", i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    return out + [GenLabel("H", i) for i in range(1, n)]


# ---------------------------------------------------------------------------
# recursive builder


def _go(vs: VarSet, lin: Lin, factor) -> QDiffOp:
    return qexp_op(vs, lin, factor)


def _level_numbers(vs: VarSet, m: int) -> list:
    """N_i^m for i = 1..m-1 as linear forms."""
    nv = len(vs)
    return [Lin.number(nv, vs.index(i, m)) for i in range(1, m)]


def diag_form(params: RepParams, level: int, i: int) -> Lin:
    """Gamma_level(E_ii) as a linear form in the N's (it is diagonal)."""
    vs = params.varset
    nv = len(vs)
    if level == 0:
        # Gamma_{m-1}(E_mm) at m = 1: the centre only
        return Lin.of(nv, params.r0)
    if i == level:
        # Gamma_{m-1}(E_mm) = r^{m-1} + r_0, then subtract the level-m numbers
        base = Lin.of(nv, params.rsum(level - 1) + params.r0)
        for nk in _level_numbers(vs, level):
            base = base - nk
        return base
    if i > level:
        return Lin.of(nv, params.rsum(i - 1) + params.r0)
    return diag_form(params, level - 1, i) + Lin.number(nv, vs.index(i, level))


def _alpha(params: RepParams, m: int, i: int, j: int) -> Lin:
    """The exponent alpha_ij at level m (a linear form, q-units)."""
    vs = params.varset
    nv = len(vs)
    G = {k: diag_form(params, m - 1, k) for k in range(1, m + 1)}
    Nm = {k: Lin.number(nv, vs.index(k, m)) for k in range(1, m)}
    out = Lin.zero(nv)
    for k in range(1, j):
        out = out - G[k] * Q14
    for k in range(j + 1, m):
        out = out + G[k] * Q14
    if i == j:
        return out
    sigma = 1 if i < j else -1
    mid = G[m]
    for k in range(1, m):
        mid = mid - Nm[k]
    out = out + (mid * Q12 + Fraction(3, 4)) * sigma
    out = out + (Nm[i] + Nm[j]) * (Q14 * sigma)
    for k in range(min(i, j) + 1, max(i, j)):
        out = out + Nm[k] * (Q12 * sigma)
    return out


def _build_level(params: RepParams, m: int, prev: dict) -> dict:
    """Gamma_m(E_ij) for i != j from the level m-1 operators (raw normalization)."""
    vs = params.varset
    nv = len(vs)
    G = {k: diag_form(params, m - 1, k) for k in range(1, m + 1)}
    Nm = {k: Lin.number(nv, vs.index(k, m)) for k in range(1, m)}
    z = {k: var_op(vs, vs.index(k, m)) for k in range(1, m)}
    D = {k: d_op(vs, vs.index(k, m)) for k in range(1, m)}
    out = {}
    for i in range(1, m):
        for j in range(1, m):
            if i == j:
                continue
            if i < j:
                first = compose(prev[(i, j)], _go(vs, Nm[i] - Nm[j], Q14))
                second = _go(vs, G[j] - G[i], Q14) @ z[i] @ D[j]
            else:
                first = compose(prev[(i, j)], _go(vs, Nm[j] - Nm[i], Q14))
                second = _go(vs, G[i] - G[j], Q14) @ z[i] @ D[j]
            out[(i, j)] = first + second
    for i in range(1, m):
        # lowering generator E_mi
        lin = Lin.zero(nv)
        for k in range(1, i):
            lin = lin + G[k]
        for k in range(i + 1, m):
            lin = lin - G[k]
        out[(m, i)] = _go(vs, lin, Q14) @ D[i]
        # raising generator E_im
        br = G[m] - G[i]
        for k in range(1, m):
            br = br - Nm[k]
        high = _go(vs, _alpha(params, m, i, i), 1) @ z[i] @ qbracket_op(vs, br)
        for j in range(1, m):
            if j != i:
                high = high - _go(vs, _alpha(params, m, i, j), 1) @ z[j] @ prev[(i, j)]
        out[(i, m)] = high
    return out


@lru_cache(maxsize=None)
def _gl_table(params: RepParams) -> dict:
    """All off-diagonal Gamma_n(E_ij) in gl(n) normalization (r_0 kept).

    The recursion runs on the raw operators; afterwards every non-simple
    generator E_ij (|i - j| > 1) is multiplied on the left by
    q^(-+ 1/2 sum_{i<k<j} Gamma_n(E_kk)) so that it becomes the q-commutator
    of its simple neighbours.
    """
    n = params.n
    vs = params.varset
    raw = {}
    for m in range(2, n + 1):
        raw = _build_level(params, m, raw)
    table = {}
    for (i, j), op in raw.items():
        lo, hi = min(i, j), max(i, j)
        if hi - lo > 1:
            mid = Lin.zero(len(vs))
            for k in range(lo + 1, hi):
                mid = mid + diag_form(params, n, k)
            op = _go(vs, mid, -Q12 if i < j else Q12) @ op
        table[(i, j)] = op
    return table


def _scalar_ratio(a: QDiffOp, b: QDiffOp):
    """c with a = c * b, or None when no such scalar exists."""
    if len(a) != len(b) or a.is_zero():
        return None
    ta, tb = a._t, b._t
    ratio = None
    for key, pa in ta.items():
        pb = tb.get(key)
        if pb is None or set(pa) != set(pb):
            return None
        for alpha, ca in pa.items():
            c = ca / pb[alpha]
            if ratio is None:
                ratio = c
            elif c != ratio:
                return None
    return ratio


@lru_cache(maxsize=None)
def _r0_factor(params: RepParams, i: int, j: int) -> QScalar:
    """Scalar s with Gamma(E_ij)[r_0] = s * Gamma(E_ij)[r_0 = 0], for sl(n) rescaling."""
    if params.r0 == 0:
        return ONE
    a = _gl_table(params)[(i, j)]
    b = _gl_table(params.with_r0(0))[(i, j)]
    if a.is_zero() and b.is_zero():
        return ONE
    c = _scalar_ratio(a, b)
    if c is None:
        raise ValueError(f"r_0 dependence of E{i}{j} is not an overall scalar")
    return c


def gamma(params: RepParams, g) -> QDiffOp:
    """The operator Gamma_n(g) built by the recursion."""
    if isinstance(g, str):
        g = parse_label(g, params.n)
    g.check(params.n)
    vs = params.varset
    n = params.n
    if g.kind == "H":
        return linear_op(vs, diag_form(params, n, g.i) - diag_form(params, n, g.i + 1))
    if g.kind == "Z":
        tot = Lin.zero(len(vs))
        for i in range(1, n + 1):
            tot = tot + diag_form(params, n, i)
        return linear_op(vs, tot)
    if g.i == g.j:
        return linear_op(vs, diag_form(params, n, g.i))
    if params.sl and n > 3:
        # r_0 is no longer an overall factor here; the sl(n) operators are the
        # r_0 = 0 ones (r_0 != 0 only conjugates the simple generators)
        return _gl_table(params.with_r0(0))[(g.i, g.j)]
    op = _gl_table(params)[(g.i, g.j)]
    if params.sl:
        op = op.scaled(_r0_factor(params, g.i, g.j).inverse())
    return op


# ---------------------------------------------------------------------------
# n = 3 closed forms


def gamma3_fast(params: RepParams, g) -> QDiffOp:
    """The hard-coded n = 3 operators (q-factors act first, then D, then brackets/variables).

    In gl mode the r_0 dependence is kept; in sl mode it is dropped.
    """
    if params.n != 3:
        raise ValueError("gamma3_fast needs n = 3")
    if isinstance(g, str):
        g = parse_label(g, 3)
    vs = params.varset
    r1, r2 = params.r
    r = r1 + r2
    r0 = Fraction(0) if params.sl else params.r0
    L = lambda c=0, x=0, z=0, y=0: Lin(Fraction(c), (Fraction(x), Fraction(z), Fraction(y)))
    X, Z, Y = var_op(vs, 0), var_op(vs, 1), var_op(vs, 2)
    Dx, Dz, Dy = d_op(vs, 0), d_op(vs, 1), d_op(vs, 2)
    q = lambda lin: qexp_op(vs, lin, Q14)
    br = lambda lin: qbracket_op(vs, lin)
    key = str(g)
    if key == "E12":
        return X @ br(L(r1, x=-1)) @ q(L(z=1, y=-1)) + Z @ Dy @ q(L(r1, x=-2))
    if key == "E21":
        return Dx @ q(L(z=1, y=-1)) + Y @ Dz @ q(L(r1, x=-2))
    if key == "H1":
        return linear_op(vs, L(-r1, x=2, z=1, y=-1))
    if key == "H2":
        return linear_op(vs, L(-r2, x=-1, z=1, y=2))
    if key == "E31":
        return Dz @ q(L(r1 + r0, x=-1, y=2))
    if key == "E32":
        return Dy @ q(L(r0, x=1))
    if key == "E13":
        return Z @ br(L(r, x=-1, z=-1, y=-1)) @ q(L(-r1 - r0, x=1, y=-2)) - X @ Y @ br(
            L(r1, x=-1)
        ) @ q(L(2 * r2 - r0 + 1, x=1, z=-1, y=-3))
    if key == "E23":
        return Y @ br(L(r2, x=1, z=-1, y=-1)) @ q(L(-r0, x=-1)) - Z @ Dx @ q(
            L(-(2 * r - r1 + r0 + 1), x=-1, z=1, y=1)
        )
    if key == "Z":
        return scalar_op(vs, 3 * r0 + 2 * r1 + r2)
    raise ValueError(f"generator {key} has no closed form")


# ---------------------------------------------------------------------------
# relations


@dataclass
class RelationCheck:
    name: str
    ok: bool
    witness: tuple | None = None
    detail: str = ""

    def as_dict(self) -> dict:
        d = {"name": self.name, "status": "pass" if self.ok else "fail"}
        if self.witness is not None:
            d["witness"] = list(self.witness)
        if self.detail:
            d["detail"] = self.detail
        return d


def _q_bracket_of_diag(vs: VarSet, lin: Lin) -> QDiffOp:
    return qbracket_op(vs, lin)


def _comm(a, b):
    return compose(a, b) - compose(b, a)


def _check(name, lhs, rhs, W) -> RelationCheck:
    e = first_difference(lhs, rhs, W)
    return RelationCheck(name, e is None, e)


def verify_relations(params: RepParams, W: int = 4, builder=None) -> list:
    """Check the defining relations by action on all monomials of degree <= W."""
    n = params.n
    vs = params.varset
    G = builder or gamma
    E = lambda i, j: G(params, GenLabel("E", i, j))
    H = {i: diag_form(params, n, i) - diag_form(params, n, i + 1) for i in range(1, n)}
    Hop = {i: linear_op(vs, H[i]) for i in range(1, n)}
    checks = []
    zero = scalar_op(vs, 0)
    # (a) Cartan operators commute
    ok = all(_comm(Hop[i], Hop[j]).is_zero() for i in Hop for j in Hop)
    checks.append(RelationCheck("cartan_commute", ok))
    # (b) [E_i,i+1, E_j+1,j] = delta_ij [H_i]
    for i in range(1, n):
        for j in range(1, n):
            lhs = _comm(E(i, i + 1), E(j + 1, j))
            rhs = _q_bracket_of_diag(vs, H[i]) if i == j else zero
            checks.append(_check(f"[E{i}{i + 1},E{j + 1}{j}]", lhs, rhs, W))
    # Cartan weights: [H_i, E_j,j+1] = a_ij E_j,j+1 and [H_i, E_j+1,j] = -a_ij E_j+1,j
    for i in range(1, n):
        for j in range(1, n):
            a = 2 if i == j else (-1 if abs(i - j) == 1 else 0)
            up, dn = E(j, j + 1), E(j + 1, j)
            checks.append(_check(f"[H{i},E{j}{j + 1}]", _comm(Hop[i], up), up.scaled(a), W))
            checks.append(_check(f"[H{i},E{j + 1}{j}]", _comm(Hop[i], dn), dn.scaled(-a), W))
    # (c) q-Serre relations for adjacent simple generators, both signs
    two = qnum(2, vs.scale)
    for i in range(1, n - 1):
        for a, b, tag in (
            (E(i, i + 1), E(i + 1, i + 2), "+"),
            (E(i + 1, i + 2), E(i, i + 1), "+"),
            (E(i + 1, i), E(i + 2, i + 1), "-"),
            (E(i + 2, i + 1), E(i + 1, i), "-"),
        ):
            lhs = compose(compose(a, a), b) - compose(compose(a, b), a).scaled(two) + compose(b, compose(a, a))
            checks.append(_check(f"serre{tag}({i})", lhs, zero, W))
    # far-apart simple generators commute
    for i in range(1, n):
        for j in range(i + 2, n):
            for a, b in ((E(i, i + 1), E(j, j + 1)), (E(i + 1, i), E(j + 1, j))):
                checks.append(_check(f"far({i},{j})", _comm(a, b), zero, W))
    # (d) the q-commutator definitions of the non-simple n = 3 generators
    if n == 3:
        e13 = compose(E(1, 2), E(2, 3)) - compose(E(2, 3), E(1, 2)).scaled(qpow(Q12, vs.scale))
        e31 = compose(E(3, 2), E(2, 1)) - compose(E(2, 1), E(3, 2)).scaled(qpow(-Q12, vs.scale))
        checks.append(RelationCheck("E13=q-commutator", e13 == E(1, 3)))
        checks.append(RelationCheck("E31=q-commutator", e31 == E(3, 1)))
    # (e) the centre acts as a scalar
    zval = sum((n - i) * (params.r0 if i == 0 else params.r[i - 1]) for i in range(n))
    zop = G(params, GenLabel("Z")) if builder is None else gamma(params, GenLabel("Z"))
    checks.append(_check("Z_scalar", zop, scalar_op(vs, zval), W))
    return checks


# ---------------------------------------------------------------------------
# weights and reducibility


def weight_of(e, params: RepParams) -> tuple:
    """Cartan eigenvalues of the monomial with exponent vector ``e``."""
    n = params.n
    if hasattr(e, "_t"):
        (e,) = list(e._t)
    return tuple(
        (diag_form(params, n, i) - diag_form(params, n, i + 1))(e) for i in range(1, n)
    )


class Reducibility(str, enum.Enum):
    GENERIC_IRREDUCIBLE = "GENERIC_IRREDUCIBLE"
    R1_ONLY = "R1_ONLY"
    R2_ONLY = "R2_ONLY"
    BOTH_FINITE = "BOTH_FINITE"
    RPLUS1_ONLY = "RPLUS1_ONLY"
    MIXED_R1 = "MIXED_R1"
    MIXED_R2 = "MIXED_R2"
    SL2_FINITE = "SL2_FINITE"

    def __str__(self):
        return self.value


def _zplus(x: Fraction) -> bool:
    return x.denominator == 1 and x >= 0


def classify(params: RepParams) -> Reducibility:
    """Reducibility stratum of the lowest-weight module (n = 2 or 3)."""
    if params.n == 2:
        return Reducibility.SL2_FINITE if _zplus(params.r[0]) else Reducibility.GENERIC_IRREDUCIBLE
    if params.n != 3:
        raise ValueError("classify supports n = 2, 3")
    r1, r2 = params.r
    a, b, c = _zplus(r1), _zplus(r2), _zplus(r1 + r2 + 1)
    if a and b:
        return Reducibility.BOTH_FINITE
    if a and c:
        return Reducibility.MIXED_R1
    if b and c:
        return Reducibility.MIXED_R2
    if a:
        return Reducibility.R1_ONLY
    if b:
        return Reducibility.R2_ONLY
    if c:
        return Reducibility.RPLUS1_ONLY
    return Reducibility.GENERIC_IRREDUCIBLE


def mixed_edge(params: RepParams) -> bool:
    """True at the degenerate mixed points r_2 = -1 (MIXED_R1) or r_1 = -1 (MIXED_R2)."""
    cls = classify(params)
    if cls is Reducibility.MIXED_R1:
        return params.r[1] == -1
    if cls is Reducibility.MIXED_R2:
        return params.r[0] == -1
    return False

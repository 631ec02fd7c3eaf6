"""Normal-ordered q-difference operators acting on :class:`MPoly`.

An operator is a finite sum of terms

    c(N) * x^u * q^L(N) * D^b

read right to left: the lowering part ``D^b`` acts first (``D_v x_v^e =
[e] x_v^(e-1)``), then the diagonal factor ``c(N) q^L(N)`` is evaluated on the
lowered exponents, then the variables ``x^u`` multiply.  ``c(N)`` is a
polynomial in the number operators with Q(t) coefficients (needed for the
Cartan generators, which are linear in N); ``L`` is an integer linear form
counted in units of the coefficient variable ``t``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb
from typing import Iterable, Sequence

from .mpoly import MPoly, VarSet, monomials_upto
from .qscalar import ONE, ZERO, LaurentPoly, QScalar, qpoch, tpow

__all__ = [
    "Lin",
    "NumberForm",
    "OpTerm",
    "QDiffOp",
    "apply",
    "compose",
    "op_power",
    "op_equal",
    "identity",
    "scalar_op",
    "mul_op",
    "lower_op",
    "qexp_op",
    "qbracket_op",
    "linear_op",
    "var_op",
    "d_op",
    "apply_chain",
    "first_difference",
    "format_op",
]


# ---------------------------------------------------------------------------
# linear forms


@dataclass(frozen=True)
class Lin:
    """Rational linear form ``const + sum_v coeffs[v] * N_v`` (natural units)."""

    const: Fraction
    coeffs: tuple

    @classmethod
    def zero(cls, nvars: int) -> "Lin":
        return cls(Fraction(0), (Fraction(0),) * nvars)

    @classmethod
    def of(cls, nvars: int, const=0, **_unused) -> "Lin":
        return cls(Fraction(const), (Fraction(0),) * nvars)

    @classmethod
    def number(cls, nvars: int, v: int, c=1) -> "Lin":
        co = [Fraction(0)] * nvars
        co[v] = Fraction(c)
        return cls(Fraction(0), tuple(co))

    def __add__(self, other):
        if not isinstance(other, Lin):
            return Lin(self.const + Fraction(other), self.coeffs)
        return Lin(self.const + other.const, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return Lin(-self.const, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-other if isinstance(other, Lin) else -Fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, k):
        k = Fraction(k)
        return Lin(self.const * k, tuple(a * k for a in self.coeffs))

    __rmul__ = __mul__

    def __call__(self, e) -> Fraction:
        return self.const + sum(a * x for a, x in zip(self.coeffs, e))

    def is_constant(self) -> bool:
        return not any(self.coeffs)

    def to_form(self, factor, scale: int) -> "NumberForm":
        """The exponent of ``q^(factor * self)`` in t-units."""
        k = Fraction(factor) * 4 * scale
        vals = [self.const * k] + [a * k for a in self.coeffs]
        if any(v.denominator != 1 for v in vals):
            raise ValueError(f"q^({factor}*({self})) is not an integer power of t at scale {scale}")
        return NumberForm(int(vals[0]), tuple(int(v) for v in vals[1:]))


@dataclass(frozen=True, order=True)
class NumberForm:
    """Integer linear form in t-units: ``q^L`` acts on ``x^e`` as ``t^(const + coeffs.e)``."""

    const: int
    coeffs: tuple

    @classmethod
    def zero(cls, nvars: int) -> "NumberForm":
        return cls(0, (0,) * nvars)

    def __call__(self, e) -> int:
        return self.const + sum(a * x for a, x in zip(self.coeffs, e))

    def __add__(self, other: "NumberForm") -> "NumberForm":
        return NumberForm(self.const + other.const, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def shift(self, c) -> "NumberForm":
        """L(N + c)."""
        return NumberForm(self(c), self.coeffs)

    def is_zero(self) -> bool:
        return self.const == 0 and not any(self.coeffs)


# ---------------------------------------------------------------------------
# polynomials in the number operators: {alpha: QScalar}


def _np_const(c) -> dict:
    c = QScalar.coerce(c)
    return {None: c} if c else {}


def _np_norm(p: dict, nvars: int) -> dict:
    # key None is shorthand for the zero multi-index
    if None in p:
        p = dict(p)
        c = p.pop(None)
        z = (0,) * nvars
        p[z] = p[z] + c if z in p else c
    return {a: c for a, c in p.items() if c}


def _np_add(p: dict, q: dict) -> dict:
    out = dict(p)
    for a, c in q.items():
        if a in out:
            s = out[a] + c
            if s:
                out[a] = s
            else:
                del out[a]
        else:
            out[a] = c
    return out


def _np_scale(p: dict, c: QScalar) -> dict:
    if not c:
        return {}
    return {a: v * c for a, v in p.items()}


def _np_mul(p: dict, q: dict) -> dict:
    if len(q) == 1 and not any(next(iter(q))):
        return _np_scale(p, next(iter(q.values())))
    if len(p) == 1 and not any(next(iter(p))):
        return _np_scale(q, next(iter(p.values())))
    out = {}
    for a, c in p.items():
        for b, d in q.items():
            k = tuple(x + y for x, y in zip(a, b))
            out[k] = out[k] + c * d if k in out else c * d
    return {a: c for a, c in out.items() if c}


def _np_shift(p: dict, s) -> dict:
    """p(N + s) for an integer shift vector."""
    if not any(s) or all(not any(a) for a in p):
        return p
    out = {}
    for a, c in p.items():
        # expand prod_v (N_v + s_v)^a_v
        ranges = [range(k + 1) for k in a]
        for b in product(*ranges):
            w = 1
            for k, j, sv in zip(a, b, s):
                w *= comb(k, j) * sv ** (k - j)
            if w:
                out[b] = out[b] + c * w if b in out else c * w
    return {a: c for a, c in out.items() if c}


def _np_eval(p: dict, e) -> QScalar:
    out = ZERO
    for a, c in p.items():
        w = 1
        for k, x in zip(a, e):
            if k:
                w *= x**k
        if w:
            out = out + c * w
    return out


def _np_is_const(p: dict) -> bool:
    return all(not any(a) for a in p)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OpTerm:
    coeff: dict  # polynomial in N, {alpha: QScalar}
    up: tuple
    form: NumberForm
    down: tuple


class QDiffOp:
    """Sum of normal-ordered terms over a fixed :class:`VarSet`; immutable."""

    __slots__ = ("vs", "_t")

    def __init__(self, vs: VarSet, terms: Iterable[OpTerm] = ()):
        self.vs = vs
        t = {}
        nv = len(vs)
        for term in terms:
            c = _np_norm(term.coeff, nv)
            if c:
                _emit(t, tuple(term.up), term.form, tuple(term.down), c, vs.scale)
        self._t = t

    @classmethod
    def _raw(cls, vs, t):
        op = cls.__new__(cls)
        op.vs, op._t = vs, t
        return op

    def terms(self) -> list:
        """Canonical term list."""
        out = []
        for key in sorted(self._t, key=_term_key):
            up, form, down = key
            out.append(OpTerm(dict(sorted(self._t[key].items())), up, form, down))
        return out

    def __len__(self):
        return len(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def _check(self, other: "QDiffOp"):
        if other.vs != self.vs:
            raise ValueError("variable-set mismatch")

    def __add__(self, other):
        if not isinstance(other, QDiffOp):
            other = scalar_op(self.vs, other)
        self._check(other)
        t = dict(self._t)
        for k, c in other._t.items():
            if k in t:
                s = _np_add(t[k], c)
                if s:
                    t[k] = s
                else:
                    del t[k]
            else:
                t[k] = c
        return QDiffOp._raw(self.vs, t)

    __radd__ = __add__

    def __neg__(self):
        return self.scaled(-ONE)

    def __sub__(self, other):
        if not isinstance(other, QDiffOp):
            other = scalar_op(self.vs, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scaled(self, c) -> "QDiffOp":
        c = QScalar.coerce(c)
        if not c:
            return QDiffOp._raw(self.vs, {})
        return QDiffOp._raw(self.vs, {k: _np_scale(v, c) for k, v in self._t.items()})

    def __mul__(self, c):
        if isinstance(c, QDiffOp):
            return compose(self, c)
        return self.scaled(c)

    def __rmul__(self, c):
        return self.scaled(c)

    def __matmul__(self, other):
        return compose(self, other)

    def __call__(self, p: MPoly) -> MPoly:
        return apply(self, p)

    def __pow__(self, m: int):
        return op_power(self, m)

    def __eq__(self, other):
        if not isinstance(other, QDiffOp):
            return NotImplemented
        return self.vs == other.vs and self._t == other._t

    def __hash__(self):
        return hash((self.vs, frozenset((k, frozenset(v.items())) for k, v in self._t.items())))

    def max_degree_change(self) -> int:
        """Largest change of total degree over all terms."""
        return max((sum(u) - sum(d) for u, _, d in self._t), default=0)

    def __str__(self):
        return format_op(self)

    def __repr__(self):
        return f"QDiffOp({format_op(self)})"


def _term_key(key):
    up, form, down = key
    return (-sum(up), tuple(-x for x in up), sum(down), down, form)


# ---------------------------------------------------------------------------
# primitives


def identity(vs: VarSet) -> QDiffOp:
    return scalar_op(vs, ONE)


def scalar_op(vs: VarSet, c) -> QDiffOp:
    z = vs.zero
    return QDiffOp(vs, [OpTerm({None: QScalar.coerce(c)}, z, NumberForm.zero(len(vs)), z)])


def mul_op(vs: VarSet, up) -> QDiffOp:
    """Multiplication by the monomial ``x^up``."""
    return QDiffOp(vs, [OpTerm({None: ONE}, tuple(up), NumberForm.zero(len(vs)), vs.zero)])


def lower_op(vs: VarSet, down) -> QDiffOp:
    """The product ``prod_v D_v^down[v]``."""
    return QDiffOp(vs, [OpTerm({None: ONE}, vs.zero, NumberForm.zero(len(vs)), tuple(down))])


def var_op(vs: VarSet, v: int, e: int = 1) -> QDiffOp:
    return mul_op(vs, vs.unit(v, e))


def d_op(vs: VarSet, v: int, e: int = 1) -> QDiffOp:
    return lower_op(vs, vs.unit(v, e))


def qexp_op(vs: VarSet, lin: Lin, factor=1) -> QDiffOp:
    """The diagonal operator ``q^(factor * lin)``."""
    form = lin.to_form(factor, vs.scale)
    return QDiffOp(vs, [OpTerm({None: ONE}, vs.zero, form, vs.zero)])


def _bracket_pairs(lin: Lin, scale: int):
    """[lin] = (q^(lin/2) - q^(-lin/2)) / (q^(1/2) - q^(-1/2)) as (coeff, form) pairs."""
    s = 2 * scale
    inv = QScalar(LaurentPoly({0: 1}), LaurentPoly({s: 1, -s: -1}))
    return [(inv, lin.to_form(Fraction(1, 2), scale)), (-inv, lin.to_form(Fraction(-1, 2), scale))]


def qbracket_op(vs: VarSet, lin: Lin) -> QDiffOp:
    """The q-number ``[lin]`` of a linear form in the number operators."""
    z = vs.zero
    return QDiffOp(vs, [OpTerm({None: c}, z, f, z) for c, f in _bracket_pairs(lin, vs.scale)])


def linear_op(vs: VarSet, lin: Lin) -> QDiffOp:
    """The diagonal operator ``lin`` itself (linear in N)."""
    nv = len(vs)
    c = {None: QScalar.coerce(lin.const)} if lin.const else {}
    for v, a in enumerate(lin.coeffs):
        if a:
            c[vs.unit(v)] = QScalar.coerce(a)
    z = vs.zero
    return QDiffOp(vs, [OpTerm(c, z, NumberForm.zero(nv), z)])


# ---------------------------------------------------------------------------
# action and composition


def _falling(e, b, scale):
    out = ONE
    for x, k in zip(e, b):
        if k:
            out = out * qpoch(x, k, scale)
            if not out:
                return ZERO
    return out


def apply(op: QDiffOp, p: MPoly) -> MPoly:
    if op.vs != p.vs:
        raise ValueError("variable-set mismatch")
    scale = op.vs.scale
    out = {}
    for e, c in p._t.items():
        for (up, form, down), np in op._t.items():
            low = tuple(x - k for x, k in zip(e, down))
            if any(x < 0 for x in low):
                continue
            f = _falling(e, down, scale) if any(down) else ONE
            if not f:
                continue
            v = _np_eval(np, low)
            if not v:
                continue
            k = form(low)
            val = c * f * v
            if k:
                val = val * tpow(k)
            ne = tuple(x + u for x, u in zip(low, up))
            if ne in out:
                s = out[ne] + val
                if s:
                    out[ne] = s
                else:
                    del out[ne]
            else:
                out[ne] = val
    return MPoly._raw(p.vs, out)


def _g_pairs(mu, M, scale, nvars):
    """prod_v prod_{m<mu_v} [N_v + M_v - m] expanded into (coeff, form) pairs."""
    pairs = [(ONE, NumberForm.zero(nvars))]
    for v in range(nvars):
        for m in range(mu[v]):
            lin = Lin.number(nvars, v) + (M[v] - m)
            new = {}
            for c1, f1 in pairs:
                for c2, f2 in _bracket_pairs(lin, scale):
                    f = f1 + f2
                    c = c1 * c2
                    new[f] = new[f] + c if f in new else c
            pairs = [(c, f) for f, c in new.items() if c]
    return pairs


def _put(out, key, c):
    if not c:
        return
    if key in out:
        s = _np_add(out[key], c)
        if s:
            out[key] = s
        else:
            del out[key]
    else:
        out[key] = c


def _emit(out, up, form, down, c, scale):
    """Add one term to ``out`` in canonical form.

    Canonical terms never raise and lower the same variable, and carry no
    constant in the exponent form.  ``x^u f(N) D^b`` with ``m = min(u, b)`` is
    rewritten as ``x^(u-m) [N][N-1]...[N-m+1] f(N-m) D^(b-m)``.
    """
    if not c:
        return
    m = tuple(min(u, b) for u, b in zip(up, down))
    if any(m):
        nv = len(up)
        up = tuple(u - k for u, k in zip(up, m))
        down = tuple(b - k for b, k in zip(down, m))
        neg = tuple(-k for k in m)
        form = form.shift(neg)
        c = _np_shift(c, neg)
        for g, fg in _g_pairs(m, (0,) * nv, scale, nv):
            _emit(out, up, form + fg, down, _np_scale(c, g), scale)
        return
    if form.const:
        c = _np_scale(c, tpow(form.const))
        form = NumberForm(0, form.coeffs)
    _put(out, (up, form, down), c)


def compose(a: QDiffOp, b: QDiffOp) -> QDiffOp:
    """Normal-ordered product ``a o b`` (b acts first)."""
    a._check(b)
    vs = a.vs
    nv = len(vs)
    scale = vs.scale
    out = {}
    for (uA, LA, bA), pA in a._t.items():
        for (uB, LB, bB), pB in b._t.items():
            delta = tuple(max(x - y, 0) for x, y in zip(bA, uB))
            rho = tuple(max(y - x, 0) for x, y in zip(bA, uB))
            mu = tuple(min(x, y) for x, y in zip(bA, uB))
            M = tuple(max(x, y) for x, y in zip(bA, uB))
            down = tuple(x + y for x, y in zip(bB, delta))
            up = tuple(x + y for x, y in zip(uA, rho))
            form = LB.shift(delta) + LA.shift(rho)
            base = _np_mul(_np_shift(pB, delta), _np_shift(pA, rho))
            if not base:
                continue
            for g, fg in _g_pairs(mu, M, scale, nv):
                _emit(out, up, form + fg, down, _np_scale(base, g), scale)
    return QDiffOp._raw(vs, out)


def op_power(a: QDiffOp, m: int) -> QDiffOp:
    if m < 0:
        raise ValueError("operator power must be nonnegative")
    out = identity(a.vs)
    for _ in range(m):
        out = compose(a, out)
    return out


def apply_chain(ops: Sequence[QDiffOp], p: MPoly) -> MPoly:
    """``ops[0] o ops[1] o ... o ops[-1]`` applied to p (rightmost first)."""
    for op in reversed(ops):
        p = apply(op, p)
    return p


def op_equal(a, b, mode: str = "sampled", W: int = 5) -> bool:
    """Compare two operators exactly (term lists) or by action up to degree W.

    In sampled mode ``a`` and ``b`` may also be sequences of operators, read
    as products.
    """
    if mode == "exact":
        return a == b
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    return first_difference(a, b, W) is None


def first_difference(a, b, W: int):
    """First monomial (degree <= W) on which the two actions differ, or None."""
    ops_a = list(a) if isinstance(a, (list, tuple)) else [a]
    ops_b = list(b) if isinstance(b, (list, tuple)) else [b]
    vs = ops_a[0].vs
    for e in monomials_upto(len(vs), W):
        m = MPoly._raw(vs, {e: ONE})
        if apply_chain(ops_a, m) != apply_chain(ops_b, m):
            return e
    return None


# ---------------------------------------------------------------------------
# text form


def _fmt_form(form: NumberForm, vs: VarSet) -> str:
    parts = []
    if form.const:
        parts.append(str(form.const))
    for v, a in enumerate(form.coeffs):
        if not a:
            continue
        name = "N" + vs.name(v)
        mag = abs(a)
        body = name if mag == 1 else f"{mag} {name}"
        if not parts:
            parts.append(body if a > 0 else f"-{body}" if mag == 1 else f"-{mag} {name}")
        else:
            parts.append(("+ " if a > 0 else "- ") + body)
    return f"q^{{(1/{4 * vs.scale})({' '.join(parts)})}}"


def _fmt_vars(vs: VarSet, e, prefix="") -> list:
    out = []
    for v, k in enumerate(e):
        if k:
            out.append(f"{prefix}{vs.name(v)}" + (f"^{k}" if k > 1 else ""))
    return out


def format_op(op: QDiffOp) -> str:
    """``coeff * vars * N-monomial * q^{(1/4)(L)} * D-vars`` terms joined by ``+``."""
    if op.is_zero():
        return "0"
    vs = op.vs
    pieces = []
    for term in op.terms():
        for alpha, c in term.coeff.items():
            factors = [c.short()]
            factors += _fmt_vars(vs, term.up)
            factors += _fmt_vars(vs, alpha, prefix="N")
            if not term.form.is_zero():
                factors.append(_fmt_form(term.form, vs))
            factors += _fmt_vars(vs, term.down, prefix="D")
            pieces.append(" * ".join(factors))
    return " + ".join(pieces)

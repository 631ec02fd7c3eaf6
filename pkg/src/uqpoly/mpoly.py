"""Polynomials in the commuting variables z_i^k with Q(t) coefficients."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Iterator

from .qscalar import ONE, ZERO, QScalar, parse_qscalar

__all__ = ["VarSet", "MPoly", "ParseError", "parse_poly", "format_poly", "monomials_upto"]


class ParseError(ValueError):
    def __init__(self, msg: str, text: str = "", pos: int | None = None):
        self.text, self.pos = text, pos
        where = f" at position {pos}" if pos is not None else ""
        super().__init__(f"{msg}{where}")


@dataclass(frozen=True)
class VarSet:
    """Variables z_i^k, 2 <= k <= n, 1 <= i < k, ordered by (k, i).

    ``scale`` is the denominator d of the representation parameters: the
    coefficient variable t stands for q^(1/(4d)).
    """

    n: int
    scale: int = 1
    labels: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.scale < 1:
            raise ValueError("scale must be a positive integer")
        object.__setattr__(
            self, "labels", tuple((k, i) for k in range(2, self.n + 1) for i in range(1, k))
        )

    def __len__(self):
        return len(self.labels)

    def index(self, i: int, k: int) -> int:
        """Position of z_i^k."""
        return self.labels.index((k, i))

    @property
    def names(self) -> tuple:
        if self.n == 2:
            return ("x",)
        if self.n == 3:
            return ("x", "z", "y")
        return tuple(f"z_{i}_{k}" for k, i in self.labels)

    def name(self, v: int) -> str:
        return self.names[v]

    def lookup(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(name) from None

    def unit(self, v: int, e: int = 1) -> tuple:
        out = [0] * len(self)
        out[v] = e
        return tuple(out)

    @property
    def zero(self) -> tuple:
        return (0,) * len(self)


def monomials_upto(nvars: int, W: int) -> list:
    """All exponent vectors of total degree <= W, graded lex (degree, then lex)."""
    out = []
    for d in range(W + 1):
        block = []
        for combo in combinations_with_replacement(range(nvars), d):
            e = [0] * nvars
            for v in combo:
                e[v] += 1
            block.append(tuple(e))
        block.sort(reverse=True)
        out.extend(block)
    return out


def _order_key(e: tuple):
    return (sum(e), e)


class MPoly:
    """Immutable sparse polynomial: exponent tuple -> QScalar."""

    __slots__ = ("vs", "_t")

    def __init__(self, vs: VarSet, terms=None):
        self.vs = vs
        t = {}
        if terms:
            nv = len(vs)
            for e, c in dict(terms).items():
                e = tuple(e)
                if len(e) != nv or any(x < 0 for x in e):
                    raise ValueError(f"bad exponent vector {e}")
                c = QScalar.coerce(c)
                if c:
                    t[e] = t[e] + c if e in t else c
                    if not t[e]:
                        del t[e]
        self._t = t

    @classmethod
    def _raw(cls, vs, t):
        p = cls.__new__(cls)
        p.vs, p._t = vs, t
        return p

    @classmethod
    def constant(cls, vs: VarSet, c=1) -> "MPoly":
        return cls(vs, {vs.zero: c})

    @classmethod
    def monomial(cls, vs: VarSet, e, c=1) -> "MPoly":
        return cls(vs, {tuple(e): c})

    @classmethod
    def var(cls, vs: VarSet, name: str) -> "MPoly":
        return cls(vs, {vs.unit(vs.lookup(name)): ONE})

    @property
    def terms(self) -> dict:
        return dict(self._t)

    def items(self) -> Iterator:
        """Terms in canonical order (graded lex, highest first)."""
        for e in sorted(self._t, key=_order_key, reverse=True):
            yield e, self._t[e]

    def coeff(self, e) -> QScalar:
        return self._t.get(tuple(e), ZERO)

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self):
        return bool(self._t)

    def __len__(self):
        return len(self._t)

    def degree(self) -> int:
        return max((sum(e) for e in self._t), default=-1)

    def _check(self, other):
        if not isinstance(other, MPoly):
            return MPoly.constant(self.vs, other)
        if other.vs != self.vs:
            raise ValueError("variable-set mismatch")
        return other

    def __add__(self, other):
        other = self._check(other)
        t = dict(self._t)
        for e, c in other._t.items():
            if e in t:
                s = t[e] + c
                if s:
                    t[e] = s
                else:
                    del t[e]
            else:
                t[e] = c
        return MPoly._raw(self.vs, t)

    __radd__ = __add__

    def __neg__(self):
        return MPoly._raw(self.vs, {e: -c for e, c in self._t.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale_by(self, c) -> "MPoly":
        c = QScalar.coerce(c)
        if not c:
            return MPoly._raw(self.vs, {})
        return MPoly._raw(self.vs, {e: v * c for e, v in self._t.items()})

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            return self.scale_by(other)
        other = self._check(other)
        t = {}
        for e1, c1 in self._t.items():
            for e2, c2 in other._t.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t[e] + c1 * c2 if e in t else c1 * c2
        return MPoly._raw(self.vs, {e: c for e, c in t.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = MPoly.constant(self.vs, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.vs == other.vs and self._t == other._t
        if isinstance(other, (int, Fraction, QScalar)):
            return self == MPoly.constant(self.vs, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.vs, frozenset(self._t.items())))

    def map_coeffs(self, f) -> "MPoly":
        return MPoly(self.vs, {e: f(c) for e, c in self._t.items()})

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"MPoly({format_poly(self)})"


# ---------------------------------------------------------------------------
# text form


def _format_monomial(vs: VarSet, e) -> str:
    parts = []
    for v, k in enumerate(e):
        if k == 1:
            parts.append(vs.name(v))
        elif k > 1:
            parts.append(f"{vs.name(v)}^{k}")
    return " ".join(parts)


def format_poly(p: MPoly) -> str:
    if p.is_zero():
        return "0"
    out = []
    for i, (e, c) in enumerate(p.items()):
        mono = _format_monomial(p.vs, e)
        neg = c.is_rational() and c.as_rational() < 0
        cs = (-c).short() if neg else c.short()
        body = f"{cs} * {mono}" if mono else cs
        if i == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(out)


_WS = re.compile(r"\s*")
_NUM = re.compile(r"[0-9]+(?:/[0-9]+)?")
_NAME = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_INT = re.compile(r"-?[0-9]+")


class _Parser:
    def __init__(self, text: str, vs: VarSet):
        self.s, self.vs, self.pos = text, vs, 0

    def err(self, msg, pos=None):
        raise ParseError(msg, self.s, self.pos if pos is None else pos)

    def ws(self):
        self.pos = _WS.match(self.s, self.pos).end()

    def peek(self) -> str:
        self.ws()
        return self.s[self.pos] if self.pos < len(self.s) else ""

    def scalar(self) -> QScalar:
        start = self.pos
        if self.peek() == "(":
            depth, i = 0, self.pos
            while i < len(self.s):
                if self.s[i] == "(":
                    depth += 1
                elif self.s[i] == ")":
                    depth -= 1
                    if depth == 0:
                        break
                i += 1
            j = i + 1
            m = re.match(r"\s*/\s*\(", self.s[j:])
            if m:
                k = self.s.find(")", j + m.end())
                if k < 0:
                    self.err("unbalanced parenthesis", start)
                j = k + 1
            try:
                c = parse_qscalar(self.s[self.pos:j])
            except ValueError as exc:
                self.err(str(exc), start)
            self.pos = j
            return c
        m = _NUM.match(self.s, self.pos)
        self.pos = m.end()
        return QScalar.coerce(Fraction(m.group(0)))

    def factor(self, e: list) -> QScalar | None:
        """One factor of a term: scalar literal or var^exp; returns scalar or None."""
        ch = self.peek()
        if ch == "(" or ch.isdigit():
            return self.scalar()
        m = _NAME.match(self.s, self.pos)
        if not m:
            self.err("expected a scalar or a variable")
        try:
            v = self.vs.lookup(m.group(0))
        except KeyError:
            self.err(f"unknown variable {m.group(0)!r}")
        self.pos = m.end()
        k = 1
        if self.peek() == "^":
            self.pos += 1
            self.ws()
            mi = _INT.match(self.s, self.pos)
            if not mi:
                self.err("expected an integer exponent")
            k = int(mi.group(0))
            if k < 0:
                self.err("negative exponent")
            self.pos = mi.end()
        e[v] += k
        return None

    def term(self):
        e = [0] * len(self.vs)
        c = ONE
        self.factor_into(e, c_box := [c])
        while True:
            ch = self.peek()
            if ch == "*":
                self.pos += 1
                self.factor_into(e, c_box)
            elif ch and (ch.isalpha() or ch == "(" or ch.isdigit()):
                self.factor_into(e, c_box)
            else:
                break
        return tuple(e), c_box[0]

    def factor_into(self, e, c_box):
        c = self.factor(e)
        if c is not None:
            c_box[0] = c_box[0] * c

    def poly(self) -> MPoly:
        terms = {}
        sign = 1
        if self.peek() in "+-" and self.peek():
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
        while True:
            if not self.peek():
                self.err("unexpected end of input")
            e, c = self.term()
            c = c if sign > 0 else -c
            terms[e] = terms[e] + c if e in terms else c
            ch = self.peek()
            if not ch:
                break
            if ch not in "+-":
                self.err(f"unexpected character {ch!r}")
            sign = -1 if ch == "-" else 1
            self.pos += 1
        return MPoly(self.vs, terms)


def parse_poly(text: str, vs: VarSet) -> MPoly:
    """Parse the textual form produced by :func:`format_poly` (and looser input)."""
    text = text.strip()
    if not text:
        raise ParseError("empty polynomial", text, 0)
    return _Parser(text, vs).poly()


def poly_from_terms(vs: VarSet, pairs: Iterable) -> MPoly:
    return MPoly(vs, dict(pairs))

"""Exact arithmetic in Q(t), t = q^(1/4), and the q-combinatorial functions.

Every scalar in the package is a reduced fraction of two Laurent polynomials
in ``t``.  The q-number is ``[a] = (q^(a/2) - q^(-a/2)) / (q^(1/2) - q^(-1/2))``,
so in terms of ``t`` it reads ``(t^(2a) - t^(-2a)) / (t^2 - t^-2)``.

Rational representation parameters with denominator ``d`` are handled by
reading ``t`` as ``q^(1/(4d))``; functions that depend on this take a
``scale`` argument (``d``), default 1.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

__all__ = [
    "LaurentPoly",
    "QScalar",
    "PoleError",
    "qnum",
    "qfact",
    "qbinom",
    "qpoch",
    "qpoch_rising",
    "gamma_ratio",
    "tpow",
    "qpow",
    "eval_at",
    "limit_t_to_1",
    "parse_qscalar",
    "ZERO",
    "ONE",
]


class PoleError(ZeroDivisionError):
    """Raised when a scalar is evaluated at (or limited towards) a pole."""


# ---------------------------------------------------------------------------
# dense univariate helpers, coefficient lists low -> high over Q


def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pdivmod(a, b):
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    if len(a) - 1 < db:
        return [], _trim(a)
    q = [Fraction(0)] * (len(a) - db)
    for i in range(len(a) - 1 - db, -1, -1):
        c = a[i + db]
        if c:
            c = c / lead
            q[i] = c
            for k in range(db + 1):
                a[i + k] -= c * b[k]
    return _trim(q), _trim(a[:db])


def _pgcd(a, b):
    """Monic gcd of two nonzero dense polynomials."""
    a, b = list(a), list(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        _, r = _pdivmod(a, b)
        a, b = b, r
        if b:
            lead = b[-1]
            b = [c / lead for c in b]
    lead = a[-1]
    return [c / lead for c in a]


# ---------------------------------------------------------------------------


class LaurentPoly:
    """Finite sum of ``c * t^e`` with rational ``c``; immutable."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs=None):
        c = {}
        if coeffs:
            for e, v in coeffs.items():
                if v:
                    c[int(e)] = v if isinstance(v, Fraction) else Fraction(v)
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, c):
        p = cls.__new__(cls)
        p._c = c
        p._hash = None
        return p

    @classmethod
    def monomial(cls, e: int, c=1) -> "LaurentPoly":
        return cls({e: c})

    @property
    def coeffs(self) -> dict:
        return dict(self._c)

    def terms(self):
        """(exponent, coefficient) pairs, exponent decreasing."""
        return sorted(self._c.items(), reverse=True)

    def is_zero(self) -> bool:
        return not self._c

    def is_one(self) -> bool:
        return len(self._c) == 1 and self._c.get(0) == 1

    def is_constant(self) -> bool:
        return not self._c or (len(self._c) == 1 and 0 in self._c)

    def lo(self) -> int:
        return min(self._c)

    def hi(self) -> int:
        return max(self._c)

    def constant(self) -> Fraction:
        return self._c.get(0, Fraction(0))

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly({0: other})
        c = dict(self._c)
        for e, v in other._c.items():
            s = c.get(e, 0) + v
            if s:
                c[e] = s
            else:
                c.pop(e, None)
        return LaurentPoly._raw(c)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({e: -v for e, v in self._c.items()})

    def __sub__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly({0: other})
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            other = Fraction(other)
            if not other:
                return LaurentPoly._raw({})
            return LaurentPoly._raw({e: v * other for e, v in self._c.items()})
        a, b = self._c, other._c
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            ((eb, vb),) = b.items()
            return LaurentPoly._raw({e + eb: v * vb for e, v in a.items()})
        c = {}
        for e1, v1 in a.items():
            for e2, v2 in b.items():
                e = e1 + e2
                c[e] = c.get(e, 0) + v1 * v2
        return LaurentPoly._raw({e: v for e, v in c.items() if v})

    __rmul__ = __mul__

    def shift(self, k: int) -> "LaurentPoly":
        return LaurentPoly._raw({e + k: v for e, v in self._c.items()})

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self._c == other._c
        if isinstance(other, (int, Rational)):
            return self._c == ({0: Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __call__(self, t0):
        return self.evaluate(t0)

    def evaluate(self, t0) -> Fraction:
        t0 = Fraction(t0)
        if not self._c:
            return Fraction(0)
        if t0 == 0 and self.lo() < 0:
            raise PoleError("negative power of t at t = 0")
        return sum((v * t0**e for e, v in self._c.items()), Fraction(0))

    def dense(self):
        """(lo, [coefficients of t^lo .. t^hi])."""
        lo, hi = self.lo(), self.hi()
        return lo, [self._c.get(e, Fraction(0)) for e in range(lo, hi + 1)]

    @classmethod
    def from_dense(cls, lo, coeffs):
        return cls._raw({lo + i: v for i, v in enumerate(coeffs) if v})

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for i, (e, v) in enumerate(self.terms()):
            if i == 0:
                parts.append(f"{v}*t^{e}")
            elif v < 0:
                parts.append(f"- {-v}*t^{e}")
            else:
                parts.append(f"+ {v}*t^{e}")
        return " ".join(parts)

    def __repr__(self):
        return f"LaurentPoly({self})"


_LP_ONE = LaurentPoly({0: 1})
_LP_ZERO = LaurentPoly()


def _canon(num: LaurentPoly, den: LaurentPoly):
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if num.is_zero():
        return _LP_ZERO, _LP_ONE
    dlo, dco = den.dense()
    if len(dco) == 1:
        # monomial denominator
        return num.shift(-dlo) * (1 / dco[0]), _LP_ONE
    nlo, nco = num.dense()
    g = _pgcd(nco, dco)
    if len(g) > 1:
        nco, _ = _pdivmod(nco, g)
        dco, _ = _pdivmod(dco, g)
    c0 = dco[0]
    if c0 != 1:
        nco = [v / c0 for v in nco]
        dco = [v / c0 for v in dco]
    if len(dco) == 1:
        return LaurentPoly.from_dense(nlo - dlo, nco), _LP_ONE
    return LaurentPoly.from_dense(nlo - dlo, nco), LaurentPoly.from_dense(0, dco)


class QScalar:
    """Element of Q(t) kept as a reduced fraction of Laurent polynomials.

    The denominator is a polynomial in ``t`` with constant term 1, so equal
    scalars have identical representations.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=1):
        if not isinstance(num, LaurentPoly):
            num = LaurentPoly({0: num})
        if not isinstance(den, LaurentPoly):
            den = LaurentPoly({0: den})
        if den.is_one():
            self.num, self.den = num, _LP_ONE
        else:
            self.num, self.den = _canon(num, den)
        self._hash = None

    @classmethod
    def _raw(cls, num, den):
        s = cls.__new__(cls)
        s.num, s.den, s._hash = num, den, None
        return s

    @classmethod
    def coerce(cls, x) -> "QScalar":
        if isinstance(x, QScalar):
            return x
        if isinstance(x, LaurentPoly):
            return cls._raw(x, _LP_ONE)
        if isinstance(x, (int, Rational)):
            return cls._raw(LaurentPoly({0: x}) if x else _LP_ZERO, _LP_ONE)
        raise TypeError(f"cannot coerce {type(x).__name__} to QScalar")

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_laurent(self) -> bool:
        return self.den.is_one()

    def is_rational(self) -> bool:
        return self.den.is_one() and self.num.is_constant()

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not a rational constant")
        return self.num.constant()

    def __add__(self, other):
        try:
            other = QScalar.coerce(other)
        except TypeError:
            return NotImplemented
        if self.num.is_zero():
            return other
        if other.num.is_zero():
            return self
        if self.den.is_one() and other.den.is_one():
            return QScalar._raw(self.num + other.num, _LP_ONE)
        if self.den == other.den:
            return QScalar(self.num + other.num, self.den)
        return QScalar(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return QScalar._raw(-self.num, self.den)

    def __sub__(self, other):
        try:
            other = QScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            if not other:
                return ZERO
            return QScalar._raw(self.num * other, self.den)
        try:
            other = QScalar.coerce(other)
        except TypeError:
            return NotImplemented
        if self.den.is_one() and other.den.is_one():
            return QScalar._raw(self.num * other.num, _LP_ONE)
        if self.num.is_zero() or other.num.is_zero():
            return ZERO
        return QScalar(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "QScalar":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero scalar")
        return QScalar(self.den, self.num)

    def __truediv__(self, other):
        try:
            other = QScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return QScalar.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, QScalar):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Rational, LaurentPoly)):
            return self == QScalar.coerce(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __str__(self):
        if self.den.is_one():
            return f"({self.num})"
        return f"({self.num})/({self.den})"

    def short(self) -> str:
        """Bare rational for constants, canonical text otherwise."""
        if self.is_rational():
            return str(self.as_rational())
        return str(self)

    def __repr__(self):
        return f"QScalar{self}"


ZERO = QScalar._raw(_LP_ZERO, _LP_ONE)
ONE = QScalar._raw(_LP_ONE, _LP_ONE)


# ---------------------------------------------------------------------------
# q-combinatorics


def _t_units(value, scale: int) -> int:
    v = Fraction(value) * scale
    if v.denominator != 1:
        raise ValueError(f"q-exponent {value} is not a multiple of 1/{4 * scale} q-units")
    return int(v)


def tpow(e: int) -> QScalar:
    """``t^e``."""
    return QScalar._raw(LaurentPoly._raw({int(e): Fraction(1)}), _LP_ONE)


def qpow(exponent, scale: int = 1) -> QScalar:
    """``q^exponent`` for a rational exponent, as a power of ``t = q^(1/(4 scale))``."""
    return tpow(_t_units(Fraction(exponent) * 4, scale))


@lru_cache(maxsize=None)
def qnum(a, scale: int = 1) -> QScalar:
    """The q-number ``[a]``; ``a`` may be any rational with ``2*scale*a`` integral."""
    a = Fraction(a)
    e = _t_units(2 * a, scale)
    s = 2 * scale
    if a.denominator == 1:
        n = int(a)
        sign = 1
        if n < 0:
            n, sign = -n, -1
        c = {s * (n - 1 - 2 * i): Fraction(sign) for i in range(n)}
        return QScalar._raw(LaurentPoly._raw(c), _LP_ONE)
    num = LaurentPoly({e: 1, -e: -1})
    den = LaurentPoly({s: 1, -s: -1})
    return QScalar(num, den)


@lru_cache(maxsize=None)
def qfact(a: int, scale: int = 1) -> QScalar:
    if a < 0:
        raise ValueError("qfact needs a nonnegative integer")
    out = ONE
    for m in range(1, a + 1):
        out = out * qnum(m, scale)
    return out


@lru_cache(maxsize=None)
def qbinom(k: int, s: int, scale: int = 1) -> QScalar:
    if s < 0 or s > k:
        return ZERO
    out = qfact(k, scale) / (qfact(s, scale) * qfact(k - s, scale))
    return out


@lru_cache(maxsize=None)
def qpoch(a, s: int, scale: int = 1) -> QScalar:
    """Falling product ``[a][a-1]...[a-s+1]``; 1 for ``s = 0``."""
    if s < 0:
        raise ValueError("qpoch length must be nonnegative")
    a = Fraction(a)
    out = ONE
    for i in range(s):
        out = out * qnum(a - i, scale)
        if out.is_zero():
            return ZERO
    return out


@lru_cache(maxsize=None)
def qpoch_rising(a, s: int, scale: int = 1) -> QScalar:
    """Rising product ``[a][a+1]...[a+s-1]``."""
    return qpoch(Fraction(a) + s - 1, s, scale)


def _at_pole(x: Fraction) -> bool:
    return x.denominator == 1 and x <= 0


@lru_cache(maxsize=None)
def gamma_ratio(alpha, beta, scale: int = 1) -> QScalar:
    """``Gamma_q(alpha) / Gamma_q(beta)`` for ``alpha - beta`` an integer.

    Evaluated as a product of q-numbers; where both arguments sit on poles the
    value is the finite limit, where only ``beta`` does it is zero, and where
    only ``alpha`` does a :class:`PoleError` is raised.
    """
    alpha, beta = Fraction(alpha), Fraction(beta)
    m = alpha - beta
    if m.denominator != 1:
        raise ValueError("gamma_ratio needs an integer argument difference")
    m = int(m)
    if m >= 0:
        # Gamma(alpha)/Gamma(alpha - m) = [alpha-1]...[alpha-m]
        return qpoch(alpha - 1, m, scale)
    if _at_pole(alpha) and not _at_pole(beta):
        raise PoleError(f"Gamma_q({alpha}) is a pole while Gamma_q({beta}) is finite")
    return qpoch(beta - 1, -m, scale).inverse()


def eval_at(s: QScalar, t0) -> Fraction:
    """Exact rational value of ``s`` at ``t = t0``."""
    t0 = Fraction(t0)
    if t0 == 0:
        raise PoleError("t0 must be nonzero")
    s = QScalar.coerce(s)
    d = s.den.evaluate(t0)
    if d == 0:
        raise PoleError(f"denominator vanishes at t = {t0}")
    return s.num.evaluate(t0) / d


def _strip_t_minus_1(co):
    """Divide a dense polynomial by (t-1) as long as it vanishes at 1."""
    k = 0
    while co and sum(co) == 0:
        co, _ = _pdivmod(co, [Fraction(-1), Fraction(1)])
        k += 1
    return k, co


def limit_t_to_1(s: QScalar) -> Fraction:
    """The classical (q -> 1) value of ``s``."""
    s = QScalar.coerce(s)
    if s.num.is_zero():
        return Fraction(0)
    nlo, nco = s.num.dense()
    dlo, dco = s.den.dense()
    kn, nco = _strip_t_minus_1(nco)
    kd, dco = _strip_t_minus_1(dco)
    if kd > kn:
        raise PoleError("limit t -> 1 is infinite")
    if kn > kd:
        return Fraction(0)
    return sum(nco, Fraction(0)) / sum(dco, Fraction(0))


# ---------------------------------------------------------------------------
# text form

_TERM = re.compile(r"([+-]?)(\d+(?:/\d+)?)(\*t(?:\^(-?\d+))?)?")


def _parse_laurent(text: str) -> LaurentPoly:
    if re.search(r"[\d^]\s+\d", text):
        raise ValueError(f"bad Laurent polynomial: stray space inside a number in {text!r}")
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty Laurent polynomial")
    pos, c = 0, {}
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or (pos > 0 and not m.group(1)):
            raise ValueError(f"bad Laurent polynomial at position {pos}: {text!r}")
        coef = Fraction(m.group(2))
        if m.group(1) == "-":
            coef = -coef
        if m.group(3) is None:
            e = 0
        else:
            e = int(m.group(4)) if m.group(4) is not None else 1
        c[e] = c.get(e, 0) + coef
        pos = m.end()
    return LaurentPoly(c)


def parse_qscalar(text: str) -> QScalar:
    """Inverse of ``str(QScalar)``; also accepts a bare rational like ``-3/2``."""
    text = text.strip()
    m = re.fullmatch(r"\((.*?)\)(?:\s*/\s*\((.*)\))?", text)
    if m is None:
        try:
            return QScalar.coerce(Fraction(text))
        except ValueError:
            raise ValueError(f"bad scalar literal {text!r}") from None
    num = _parse_laurent(m.group(1))
    den = _parse_laurent(m.group(2)) if m.group(2) is not None else _LP_ONE
    return QScalar(num, den)

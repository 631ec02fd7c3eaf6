from fractions import Fraction
from math import comb

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import qscalars
from uqpoly.qscalar import (
    ONE,
    ZERO,
    LaurentPoly,
    PoleError,
    QScalar,
    eval_at,
    gamma_ratio,
    limit_t_to_1,
    parse_qscalar,
    qbinom,
    qfact,
    qnum,
    qpoch,
    qpoch_rising,
    qpow,
    tpow,
)

T0S = (Fraction(2), Fraction(3, 2), Fraction(-5, 3))


def oracle_qnum(a: Fraction, t0: Fraction, scale: int = 1) -> Fraction:
    # [a] = (q^(a/2) - q^(-a/2)) / (q^(1/2) - q^(-1/2)) with q = t^(4 scale); a*2*scale integral
    e = int(2 * scale * a)
    s = 2 * scale
    return (t0**e - t0**-e) / (t0**s - t0**-s)


# ---------------------------------------------------------------------------
# field axioms and canonical form


@given(qscalars(), qscalars(), qscalars())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == ZERO
    assert a * ONE == a


@given(qscalars(), qscalars())
def test_division_roundtrip(a, b):
    assume(b)
    assert (a / b) * b == a
    assert hash((a / b) * b) == hash(a)


@given(qscalars(), qscalars())
def test_equal_values_have_equal_form(a, b):
    assume(b)
    x = (a * b) / b
    assert x.num == a.num and x.den == a.den


@given(qscalars())
def test_denominator_normalized(a):
    lo, co = a.den.dense()
    assert lo == 0 and co[0] == 1


@given(qscalars(), qscalars(), st.sampled_from(T0S))
def test_evaluation_is_a_homomorphism(a, b, t0):
    try:
        ea, eb = eval_at(a, t0), eval_at(b, t0)
    except PoleError:
        assume(False)
    assert eval_at(a + b, t0) == ea + eb
    assert eval_at(a * b, t0) == ea * eb


@given(qscalars())
def test_text_roundtrip(a):
    assert parse_qscalar(str(a)) == a


def test_parse_rejects_garbage():
    for bad in ("", "(1*t^)", "(1 2)", "abc"):
        with pytest.raises(ValueError):
            parse_qscalar(bad)
    assert parse_qscalar("-3/2") == QScalar(Fraction(-3, 2))


def test_pow_and_inverse():
    x = tpow(1) + 1
    assert x**3 == x * x * x
    assert x**-2 * x**2 == ONE
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()


# ---------------------------------------------------------------------------
# q-numbers against an independent evaluation


@pytest.mark.parametrize("a", [Fraction(x, 2) for x in range(-8, 9)])
@pytest.mark.parametrize("t0", T0S)
def test_qnum_matches_oracle(a, t0):
    if a.denominator == 1:
        assert eval_at(qnum(a), t0) == oracle_qnum(a, t0)
    assert eval_at(qnum(a, 2), t0) == oracle_qnum(a, t0, 2)


def test_qnum_small_values():
    # t = q^(1/4): [2] = t^2 + t^-2, [3] = t^4 + 1 + t^-4
    assert qnum(2) == QScalar(LaurentPoly({2: 1, -2: 1}))
    assert qnum(3) == QScalar(LaurentPoly({4: 1, 0: 1, -4: 1}))
    assert qnum(0) == ZERO and qnum(1) == ONE and qnum(-2) == -qnum(2)


@given(st.fractions(min_value=-6, max_value=6, max_denominator=2), st.integers(-4, 4))
def test_qnum_addition_rule(a, b):
    # [a + b] = q^(b/2) [a] + q^(-a/2) [b]
    assert qnum(a + b, 2) == qpow(Fraction(b, 2), 2) * qnum(a, 2) + qpow(-a / 2, 2) * qnum(b, 2)


@given(st.fractions(min_value=-6, max_value=6, max_denominator=2))
def test_classical_limit_of_qnum(a):
    assert limit_t_to_1(qnum(a, 2)) == a


@given(st.integers(0, 7), st.integers(0, 7))
def test_qbinom_pascal(k, s):
    lhs = qbinom(k + 1, s + 1)
    assert lhs == qpow(Fraction(s + 1, 2)) * qbinom(k, s + 1) + qpow(-Fraction(k - s, 2)) * qbinom(k, s)
    assert limit_t_to_1(qbinom(k, s)) == comb(k, s)


def test_qfact_and_pochhammers():
    assert qfact(4) == qnum(1) * qnum(2) * qnum(3) * qnum(4)
    assert qpoch(5, 3) == qnum(5) * qnum(4) * qnum(3)
    assert qpoch(2, 3) == ZERO
    assert qpoch_rising(2, 3) == qnum(2) * qnum(3) * qnum(4)
    assert qpoch(Fraction(7), 0) == ONE
    with pytest.raises(ValueError):
        qfact(-1)


def test_gamma_ratio_limits():
    assert gamma_ratio(5, 2) == qnum(4) * qnum(3) * qnum(2)
    assert gamma_ratio(2, 5) == (qnum(4) * qnum(3) * qnum(2)).inverse()
    # both on poles: finite limit; only beta on a pole: zero; only alpha: pole
    assert gamma_ratio(-3, -1) == (qnum(-2) * qnum(-3)).inverse()
    assert gamma_ratio(2, -1) == ZERO
    with pytest.raises(PoleError):
        gamma_ratio(-1, 2)


def test_qpow_scale_checks():
    assert qpow(Fraction(1, 4)) == tpow(1)
    assert qpow(Fraction(1, 8), 2) == tpow(1)
    with pytest.raises(ValueError):
        qpow(Fraction(1, 8))


def test_limit_pole():
    with pytest.raises(PoleError):
        limit_t_to_1(ONE / (tpow(1) - 1))
    assert limit_t_to_1((tpow(2) - 1) / (tpow(1) - 1)) == 2

import os
from fractions import Fraction

import hypothesis
import hypothesis.strategies as st
import pytest

from uqpoly.mpoly import MPoly, VarSet
from uqpoly.qscalar import LaurentPoly, QScalar

hypothesis.settings.register_profile("default", max_examples=40, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=8, deadline=None)
hypothesis.settings.register_profile("thorough", max_examples=300, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


small_ints = st.integers(min_value=-3, max_value=3)
fracs = st.fractions(min_value=-3, max_value=3, max_denominator=3)


@st.composite
def laurent(draw, span=4, max_terms=3):
    n = draw(st.integers(min_value=0, max_value=max_terms))
    co = {}
    for _ in range(n):
        co[draw(st.integers(-span, span))] = Fraction(draw(st.integers(-3, 3)))
    return LaurentPoly(co)


@st.composite
def qscalars(draw, allow_den=True):
    num = draw(laurent())
    if not allow_den or draw(st.booleans()):
        return QScalar(num)
    den = draw(laurent())
    if den.is_zero():
        return QScalar(num)
    return QScalar(num, den) if not draw(st.booleans()) else QScalar(num) / QScalar(den)


@st.composite
def mpolys(draw, vs, max_terms=3, max_deg=3):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        e = tuple(draw(st.integers(0, max_deg)) for _ in range(len(vs)))
        terms[e] = draw(qscalars(allow_den=False))
    return MPoly(vs, terms)


@pytest.fixture
def vs3():
    return VarSet(3)

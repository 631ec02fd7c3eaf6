from fractions import Fraction
import xml.etree.ElementTree as ET

import pytest
from hypothesis import given
from hypothesis import strategies as st

from uqpoly.basis import enumerate_indices
from uqpoly.newton import build_diagram, closed_form_count, count_points, is_planar, parse_diagram, render
from uqpoly.uqsl import RepParams

half = Fraction(1, 2)
P = lambda *r: RepParams(3, tuple(Fraction(x) for x in r))


def brute_count(r1, r2):
    r = r1 + r2
    return sum(
        1
        for l in range(r2 + 1)
        for j in range(r1 + 1)
        for k in range(r + 1)
        if l + k + j <= r
    )


@given(st.integers(0, 6), st.integers(0, 6))
def test_closed_form_count(r1, r2):
    assert closed_form_count(r1, r2) == brute_count(r1, r2)


def test_adjoint_diagram():
    d = build_diagram(P(1, 1))
    assert count_points(d) == 8 and not d.truncated
    assert d.case_tag == "BOTH_FINITE"
    assert not is_planar(d)


def test_planar_degenerations():
    assert is_planar(build_diagram(P(3, 0)))
    assert is_planar(build_diagram(P(0, 3)))


@pytest.mark.parametrize("r", [(1, 2), (half, half), (2, -2), (-2, 2), (2, -1), (-1, 2)])
@pytest.mark.parametrize("fmt", ["json", "ascii", "svg"])
def test_render_formats(r, fmt):
    d = build_diagram(P(*r), window=4)
    body = render(d, fmt)
    assert isinstance(body, bytes)
    if fmt == "json":
        assert parse_diagram(body.decode()) == d
    elif fmt == "svg":
        root = ET.fromstring(body)
        circles = [e for e in root.iter() if e.tag.endswith("circle")]
        assert len(circles) == count_points(d)
    else:
        rows = [ln.split("|", 1)[1] for ln in body.decode().splitlines() if "|" in ln]
        assert sum(row.count("o") for row in rows) == count_points(d)


def test_mixed_tags():
    assert build_diagram(P(2, -1), 3).case_tag == "MIXED_R1:edge"
    assert build_diagram(P(2, -2), 3).case_tag == "MIXED_R1:two-sets"
    assert build_diagram(P(-2, 3), 3).case_tag == "MIXED_R2:two-sets"


def test_point_sets_follow_indices():
    for r in [(1, 1), (half, 1), (1, half), (half, half), (3, -2), (-2, 3)]:
        p = P(*r)
        d = build_diagram(p, 5)
        assert d.point_set() == {(i.j, i.l, i.k) for i in enumerate_indices(p, 5)}


def test_rejections():
    with pytest.raises(ValueError):
        build_diagram(P(half, Fraction(1, 3)))
    with pytest.raises(ValueError):
        build_diagram(RepParams(2, (1,)))
    with pytest.raises(ValueError):
        render(build_diagram(P(1, 1)), "png")

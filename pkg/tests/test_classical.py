from fractions import Fraction

import pytest

from uqpoly.classical import apply_classical, classical_limit, format_classical
from uqpoly.mpoly import MPoly, VarSet
from uqpoly.qdiff import Lin, d_op, qbracket_op, qexp_op, var_op
from uqpoly.uqsl import RepParams, gamma

VS = VarSet(3)


def test_q_derivative_limit():
    assert classical_limit(d_op(VS, 0)) == {((0, 0, 0), (1, 0, 0)): {(0, 0, 0): Fraction(1)}}


def test_diagonal_limits():
    # [N_x + 2] -> N_x + 2 and q^(anything) -> 1
    lin = Lin(Fraction(2), (Fraction(1), Fraction(0), Fraction(0)))
    assert classical_limit(qbracket_op(VS, lin)) == {
        ((0, 0, 0), (0, 0, 0)): {(0, 0, 0): Fraction(2), (1, 0, 0): Fraction(1)}
    }
    assert classical_limit(qexp_op(VS, lin, Fraction(1, 4))) == {((0, 0, 0), (0, 0, 0)): {(0, 0, 0): Fraction(1)}}


def test_apply_classical_matches_limit_of_action():
    from uqpoly.qdiff import apply
    from uqpoly.qscalar import limit_t_to_1

    p = RepParams(3, (2, 1))
    op = gamma(p, "E13")
    cop = classical_limit(op)
    for e in [(0, 0, 0), (1, 2, 0), (2, 1, 1)]:
        m = MPoly.monomial(p.varset, e)
        want = {f: limit_t_to_1(c) for f, c in apply(op, m)._t.items() if limit_t_to_1(c)}
        assert apply_classical(cop, m) == want


def test_degree_too_small():
    X = var_op(VS, 0)
    lin = Lin(Fraction(0), (Fraction(1), Fraction(0), Fraction(0)))
    op = X @ qbracket_op(VS, lin) @ qbracket_op(VS, lin)
    with pytest.raises(ArithmeticError):
        classical_limit(op, max_degree=1)
    assert classical_limit(op, max_degree=2)


def test_format():
    assert format_classical(classical_limit(d_op(VS, 2)), VS) == "1 * dy"
    assert format_classical({}, VS) == "0"

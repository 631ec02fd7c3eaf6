"""q -> 1 limits of q-difference operators, as polynomial differential operators.

A classical operator is a dict {(up, down): {alpha: Fraction}} meaning
sum x^up N^alpha d^down, with N_v = v d/dv.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import prod

from . import linalg
from .mpoly import MPoly, VarSet, monomials_upto
from .qdiff import QDiffOp, apply
from .qscalar import ONE, limit_t_to_1

__all__ = ["classical_limit", "apply_classical", "format_classical"]


def _falling(e, b) -> int:
    out = 1
    for x, k in zip(e, b):
        for i in range(k):
            out *= x - i
    return out


def classical_limit(op: QDiffOp, max_degree: int = 3) -> dict:
    """Reconstruct the t -> 1 limit from its action on a grid of monomials.

    Each (up, down) block is interpolated by a polynomial in N of total
    degree <= max_degree; ArithmeticError if that does not fit exactly.
    """
    vs = op.vs
    nv = len(vs)
    blocks = {}
    for key, c in op._t.items():
        up, form, down = key
        blocks.setdefault((up, down), {})[key] = c
    alphas = monomials_upto(nv, max_degree)
    grid = list(product(range(max_degree + 2), repeat=nv))
    out = {}
    for (up, down), t in sorted(blocks.items()):
        sub = QDiffOp._raw(vs, t)
        rows = []
        for g in grid:
            e = tuple(a + b for a, b in zip(g, down))
            img = apply(sub, MPoly._raw(vs, {e: ONE}))
            tgt = tuple(a + u - b for a, u, b in zip(e, up, down))
            val = limit_t_to_1(img.coeff(tgt)) / _falling(e, down)
            rows.append([Fraction(prod(x**k for x, k in zip(g, a))) for a in alphas] + [val])
        red, piv = linalg.rref(rows, len(alphas) + 1, field=Fraction)
        if len(alphas) in piv:
            raise ArithmeticError(f"block {up}/{down} is not a polynomial of degree <= {max_degree} in N")
        sol = {}
        for r, p in zip(red, piv):
            if r[-1]:
                sol[alphas[p]] = r[-1]
        if sol:
            out[(up, down)] = sol
    return out


def apply_classical(cop: dict, p: MPoly, vs: VarSet | None = None) -> dict:
    """Action on a polynomial given as {exponent: Fraction}; returns the same shape."""
    res = {}
    for e, c in p.items() if isinstance(p, MPoly) else dict(p).items():
        c = limit_t_to_1(c) if not isinstance(c, (int, Fraction)) else Fraction(c)
        for (up, down), poly in cop.items():
            f = _falling(e, down)
            if not f:
                continue
            e2 = tuple(a - b for a, b in zip(e, down))
            val = sum((v * prod(x**k for x, k in zip(e2, a)) for a, v in poly.items()), Fraction(0))
            if val:
                tgt = tuple(a + u for a, u in zip(e2, up))
                res[tgt] = res.get(tgt, Fraction(0)) + c * f * val
    return {e: v for e, v in res.items() if v}


def format_classical(cop: dict, vs: VarSet) -> str:
    if not cop:
        return "0"
    names = vs.names
    pieces = []
    for (up, down), poly in sorted(cop.items(), key=lambda kv: (-sum(kv[0][0]), kv[0])):
        for a, v in sorted(poly.items(), key=lambda kv: (sum(kv[0]), kv[0])):
            f = [str(v)]
            f += [names[i] + (f"^{k}" if k > 1 else "") for i, k in enumerate(up) if k]
            f += ["N" + names[i] + (f"^{k}" if k > 1 else "") for i, k in enumerate(a) if k]
            f += ["d" + names[i] + (f"^{k}" if k > 1 else "") for i, k in enumerate(down) if k]
            pieces.append(" * ".join(f))
    return " + ".join(pieces)

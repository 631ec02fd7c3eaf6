"""Exact elimination over Q(t) and over Q, for kernels of operator stacks."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .qscalar import ONE, ZERO, QScalar, eval_at

__all__ = ["rref", "nullspace", "rank", "rank_at", "components"]


def _cost(c: QScalar) -> tuple:
    # pivot preference: smallest numerator t-degree span, then fewest terms
    num = c.num
    if num.is_zero():
        return (10**9, 10**9)
    return (num.hi() - num.lo(), len(num.coeffs))


def rref(rows: Sequence[Sequence], ncols: int, field=QScalar):
    """Reduced row echelon form; returns (rows, pivot columns).

    Works for QScalar entries (pivot: lowest numerator degree, ties to the
    first row) and for Fraction entries.
    """
    m = [list(r) for r in rows if any(r)]
    pivots = []
    zero = ZERO if field is QScalar else Fraction(0)
    row = 0
    for col in range(ncols):
        cand = [i for i in range(row, len(m)) if m[i][col]]
        if not cand:
            continue
        if field is QScalar:
            best = min(cand, key=lambda i: (_cost(m[i][col]), i))
        else:
            best = cand[0]
        m[row], m[best] = m[best], m[row]
        inv = ONE / m[row][col] if field is QScalar else 1 / m[row][col]
        m[row] = [x * inv if x else zero for x in m[row]]
        for i in range(len(m)):
            if i != row and m[i][col]:
                f = m[i][col]
                m[i] = [a - f * b if b else a for a, b in zip(m[i], m[row])]
        pivots.append(col)
        row += 1
        if row == len(m):
            break
    return m[:row], pivots


def nullspace(rows, ncols: int) -> list:
    """Basis of {v : rows . v = 0}; each vector has a 1 at its free column."""
    red, piv = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for r, p in zip(red, piv):
            if r[f]:
                v[p] = -r[f]
        basis.append(v)
    return basis


def rank(rows, ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def rank_at(rows, ncols: int, t0) -> int:
    """Rank of the matrix specialised at t = t0 (PoleError if an entry blows up)."""
    ev = [[eval_at(x, t0) if x else Fraction(0) for x in r] for r in rows]
    return len(rref(ev, ncols, field=Fraction)[1])


def components(col_rows: dict) -> list:
    """Group columns that share a row (union-find); ``col_rows`` maps col -> set of rows."""
    parent = {c: c for c in col_rows}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    owner = {}
    for c, rs in col_rows.items():
        for r in rs:
            if r in owner:
                ra, rb = find(owner[r]), find(c)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
            else:
                owner[r] = c
    groups = {}
    for c in col_rows:
        groups.setdefault(find(c), []).append(c)
    return sorted((sorted(g) for g in groups.values()), key=lambda g: g[0])

"""Newton diagrams: the lattice points (j, l, k) of the states v_{l k j}, plus renderers."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .basis import enumerate_indices
from .uqsl import Reducibility, RepParams, classify, mixed_edge

__all__ = ["Diagram", "build_diagram", "render", "parse_diagram", "count_points", "is_planar", "closed_form_count"]


@dataclass
class Diagram:
    """Axis order (j, l, k) = (x-power, y-power, z-power) of the leading monomial."""

    points: list
    case_tag: str
    constraints: list = field(default_factory=list)
    truncated: bool = False
    window: int | None = None
    params: tuple = ()

    def point_set(self) -> set:
        return {tuple(p) for p in self.points}

    def __eq__(self, other):
        if not isinstance(other, Diagram):
            return NotImplemented
        return (
            sorted(map(tuple, self.points)) == sorted(map(tuple, other.points))
            and self.case_tag == other.case_tag
            and list(self.constraints) == list(other.constraints)
            and self.truncated == other.truncated
            and self.window == other.window
            and tuple(self.params) == tuple(other.params)
        )


def _tag(params: RepParams) -> str:
    cls = classify(params)
    if cls in (Reducibility.MIXED_R1, Reducibility.MIXED_R2):
        return f"{cls}:{'edge' if mixed_edge(params) else 'two-sets'}"
    return str(cls)


def build_diagram(params: RepParams, window: int | None = None) -> Diagram:
    if params.n != 3:
        raise ValueError("Newton diagrams are built for n = 3")
    if classify(params) is Reducibility.GENERIC_IRREDUCIBLE:
        raise ValueError(f"{params.r} is generic: the diagram is the whole lattice")
    ix = enumerate_indices(params, window)
    pts = sorted((i.j, i.l, i.k) for i in ix)
    return Diagram(
        [list(p) for p in pts],
        _tag(params),
        list(ix.constraints),
        ix.truncated,
        ix.window,
        tuple(str(x) for x in params.r),
    )


def count_points(d: Diagram) -> int:
    return len(d.point_set())


def closed_form_count(r1: int, r2: int) -> int:
    """Two-sum count for the finite case."""
    return (r1 + 1) * (r1 + 2) * (r2 + 1) // 2 + (r1 + 1) * r2 * (r2 + 1) // 2


def is_planar(d: Diagram) -> bool:
    """True when all points lie in one affine plane."""
    pts = [tuple(Fraction(x) for x in p) for p in d.points]
    if len(pts) < 4:
        return True
    o = pts[0]
    vecs = [tuple(a - b for a, b in zip(p, o)) for p in pts[1:]]
    basis = []
    for v in vecs:
        w = list(v)
        for b, piv in basis:
            if w[piv]:
                f = w[piv] / b[piv]
                w = [x - f * y for x, y in zip(w, b)]
        nz = [i for i, x in enumerate(w) if x]
        if nz:
            basis.append((w, nz[0]))
    return len(basis) <= 2


# ---------------------------------------------------------------------------
# rendering


def _summary(d: Diagram) -> str:
    n = count_points(d)
    s = f"{n} point" + ("" if n == 1 else "s")
    return s + (f" (truncated at window {d.window})" if d.truncated else "")


def _json(d: Diagram) -> str:
    return json.dumps(
        {
            "case": d.case_tag,
            "params": list(d.params),
            "truncated": d.truncated,
            "window": d.window,
            "constraints": list(d.constraints),
            "points": sorted(list(map(list, d.points))),
            "summary": _summary(d),
        },
        indent=2,
    )


def parse_diagram(text: str) -> Diagram:
    o = json.loads(text)
    return Diagram(
        [list(p) for p in o["points"]],
        o["case"],
        list(o["constraints"]),
        bool(o["truncated"]),
        o["window"],
        tuple(o["params"]),
    )


def _ascii(d: Diagram) -> str:
    lines = [f"Newton diagram {d.case_tag} r=({','.join(d.params)}): {_summary(d)}"]
    for c in d.constraints:
        lines.append(f"  {c}")
    pts = d.point_set()
    if not pts:
        return "\n".join(lines) + "\n"
    J = max(p[0] for p in pts)
    L = max(p[1] for p in pts)
    for k in sorted({p[2] for p in pts}):
        lines.append(f"k = {k}  (rows l = {L}..0, columns j = 0..{J})")
        for l in range(L, -1, -1):
            row = "".join(" o" if (j, l, k) in pts else " ." for j in range(J + 1))
            lines.append(f"  {l:>3} |{row}")
    return "\n".join(lines) + "\n"


def _iso(j, l, k, unit=24.0):
    # isometric projection: j to the lower right, l to the lower left, k up
    x = (j - l) * unit * 0.866
    y = (j + l) * unit * 0.5 - k * unit
    return x, y


def _line(p, q, style: str) -> str:
    (a, b), (c, e) = p, q
    return f'<line x1="{a:.1f}" y1="{b:.1f}" x2="{c:.1f}" y2="{e:.1f}" stroke="#888" stroke-width="1"{style}/>'


def _svg(d: Diagram) -> str:
    pts = sorted(d.point_set())
    head = '<svg xmlns="http://www.w3.org/2000/svg"'
    title = f"<title>Newton diagram {d.case_tag}: {_summary(d)}</title>"
    if not pts:
        return (
            f'{head} width="200" height="60" viewBox="0 0 200 60">{title}'
            '<text x="10" y="35" font-family="monospace" font-size="14">0 points</text></svg>\n'
        )
    xy = {p: _iso(*p) for p in pts}
    xs = [v[0] for v in xy.values()]
    ys = [v[1] for v in xy.values()]
    pad = 40
    x0, y0 = min(xs) - pad, min(ys) - pad
    w, h = max(xs) - x0 + pad, max(ys) - y0 + pad + 20
    out = [f'{head} width="{w:.0f}" height="{h:.0f}" viewBox="{x0:.1f} {y0:.1f} {w:.1f} {h:.1f}">', title]
    # solid lattice edges between neighbouring points
    for p in pts:
        for axis in range(3):
            q = list(p)
            q[axis] += 1
            q = tuple(q)
            if q in xy:
                out.append(_line(xy[p], xy[q], ""))
    # the window cut j + l + k = W: dashed edges between neighbours inside that plane
    if d.truncated:
        cut = [p for p in pts if sum(p) == d.window]
        for p in cut:
            for a, b in ((0, 1), (0, 2), (1, 2)):
                q = list(p)
                q[a] += 1
                q[b] -= 1
                q = tuple(q)
                if q in xy and sum(q) == d.window:
                    out.append(_line(xy[p], xy[q], ' stroke-dasharray="4,3"'))
    for p in pts:
        a, b = xy[p]
        out.append(f'<circle cx="{a:.1f}" cy="{b:.1f}" r="3" fill="#1f4e8c"><title>j={p[0]} l={p[1]} k={p[2]}</title></circle>')
    out.append(
        f'<text x="{x0 + 8:.1f}" y="{y0 + h - 8:.1f}" font-family="monospace" font-size="12">{_summary(d)}</text>'
    )
    out.append("</svg>\n")
    return "\n".join(out)


def render(d: Diagram, fmt: str = "json") -> bytes:
    if fmt == "json":
        return _json(d).encode()
    if fmt == "ascii":
        return _ascii(d).encode()
    if fmt == "svg":
        return _svg(d).encode()
    raise ValueError(f"unknown format {fmt!r}")

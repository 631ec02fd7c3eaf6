"""Command line: realize, act, verify, kernel, basis, diagram.

Exit codes: 0 success, 1 a verification failed, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .mpoly import MPoly, ParseError, format_poly, parse_poly
from .qdiff import apply, format_op
from .qscalar import PoleError, eval_at, limit_t_to_1

__all__ = ["main", "RunConfig", "build_parser"]


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    n: int
    r: tuple
    window: int = 4
    t0: Fraction | None = None
    fmt: str = "text"
    out: str | None = None
    limit_q1: bool = False

    def __post_init__(self):
        if self.window < 0:
            raise UsageError("--window must be nonnegative")
        if self.t0 is not None and self.t0 == 0:
            raise UsageError("--t0 must be nonzero")

    @property
    def params(self):
        from .uqsl import RepParams

        return RepParams(self.n, self.r)


def _config(ns) -> RunConfig:
    from .uqsl import parse_r

    try:
        r = parse_r(ns.r) if ns.r is not None else None
        t0 = Fraction(ns.t0) if ns.t0 is not None else None
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad number: {exc}") from None
    n = ns.n
    if n is None:
        n = len(r) + 1 if r is not None else 3
    if r is None:
        r = (Fraction(0),) * (n - 1)
    if len(r) != n - 1:
        raise UsageError(f"--r needs {n - 1} entries for n = {n}")
    return RunConfig(n, r, ns.window, t0, ns.format, ns.out, ns.limit_q1)


# ---------------------------------------------------------------------------
# output helpers


def _emit(text: str, cfg: RunConfig, suffix: str | None = None):
    if cfg.out:
        path = Path(cfg.out)
        if suffix and not path.suffix:
            path = path.with_suffix(suffix)
        path.write_text(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _scalar_text(c, cfg: RunConfig) -> str:
    if cfg.limit_q1:
        return str(limit_t_to_1(c))
    if cfg.t0 is not None:
        return str(eval_at(c, cfg.t0))
    return c.short()


def _poly_text(p: MPoly, cfg: RunConfig) -> str:
    if not cfg.limit_q1 and cfg.t0 is None:
        return format_poly(p)
    if p.is_zero():
        return "0"
    parts = []
    for e, c in p.items():
        v = limit_t_to_1(c) if cfg.limit_q1 else eval_at(c, cfg.t0)
        if not v:
            continue
        mono = " ".join(
            p.vs.name(i) + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k
        )
        parts.append(f"({v})" + (f" * {mono}" if mono else ""))
    return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# commands


def cmd_realize(cfg: RunConfig, gen: str) -> int:
    from .classical import classical_limit, format_classical
    from .uqsl import gamma, parse_label

    try:
        g = parse_label(gen, cfg.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    P = cfg.params
    op = gamma(P, g)
    if cfg.limit_q1:
        text = format_classical(classical_limit(op), P.varset)
    elif cfg.t0 is not None:
        pieces = []
        for term in op.terms():
            for alpha, c in term.coeff.items():
                one = type(op)(op.vs, [type(term)({alpha: c}, term.up, term.form, term.down)])
                body = format_op(one)
                head, _, rest = body.partition(" * ")
                pieces.append(f"({eval_at(c, cfg.t0)})" + (f" * {rest}" if rest else ""))
        text = " + ".join(pieces) if pieces else "0"
    else:
        text = format_op(op)
    if cfg.fmt == "json":
        text = json.dumps({"generator": str(g), "params": [str(x) for x in cfg.r], "operator": text})
    _emit(text, cfg)
    return 0


def cmd_act(cfg: RunConfig, gen: str, poly: str) -> int:
    from .uqsl import gamma, parse_label

    try:
        g = parse_label(gen, cfg.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    P = cfg.params
    try:
        p = parse_poly(poly, P.varset)
    except ParseError as exc:
        raise UsageError(f"cannot parse polynomial: {exc}") from None
    res = apply(gamma(P, g), p)
    text = _poly_text(res, cfg)
    if cfg.fmt == "json":
        text = json.dumps({"generator": str(g), "input": poly, "result": text})
    _emit(text, cfg)
    return 0


_REFS = {
    "relations": "defining relations of the quantum algebra, realized by q-difference operators",
    "intertwining": "intertwining property of the invariant q-difference operator",
    "reorder": "commutation of powers of E23, E13, E12 in the realization",
    "transform": "E23 maps the states v_kj to multiples of each other",
    "kernel": "kernel of the defining operators versus explicit states, weight by weight",
}


def _verify_checks(cfg: RunConfig) -> list:
    from .basis import kernel_vs_states, reorder_identities, transform_relations
    from .intertwiners import check_intertwining, defining_operators
    from .uqsl import Reducibility, classify, verify_relations

    P = cfg.params
    W = cfg.window
    checks = []
    if cfg.n > 4:
        warnings.warn(f"unsupported n = {cfg.n} for full suite; running the relation subset only")
        W = min(W, 2)
    for c in verify_relations(P, W):
        checks.append({"name": c.name, "paper_ref": _REFS["relations"], **_status(c.ok, c.witness)})
    if cfg.n > 3:
        return checks
    cls = classify(P)
    if cls is not Reducibility.GENERIC_IRREDUCIBLE:
        for iw in defining_operators(P):
            rep = check_intertwining(iw, W)
            checks.append({"name": f"intertwining[{iw.label}]", "paper_ref": _REFS["intertwining"], **_status(rep.ok, rep.witness)})
    if cfg.n == 3:
        r1, r2 = P.r
        for c in reorder_identities(P, bound=min(W, 2), W=min(W, 3)):
            checks.append({"name": c.name, "paper_ref": _REFS["reorder"], **_status(c.ok, c.witness)})
        if all(x.denominator == 1 and x >= 0 for x in P.r):
            for c in transform_relations(P):
                checks.append({"name": c.name, "paper_ref": _REFS["transform"], **_status(c.ok, c.witness)})
        if cls is not Reducibility.GENERIC_IRREDUCIBLE:
            rep = kernel_vs_states(P, W)
            bad = rep.disagreements()
            checks.append({"name": "kernel=states", "paper_ref": _REFS["kernel"], **_status(not bad, bad[0].weight if bad else None)})
    return checks


def _status(ok: bool, witness) -> dict:
    d = {"status": "pass" if ok else "fail"}
    if witness is not None and not ok:
        d["witness"] = [str(x) if not isinstance(x, (int, str)) else x for x in (witness if isinstance(witness, (tuple, list)) else [witness])]
    return d


def cmd_verify(cfg: RunConfig) -> int:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        checks = _verify_checks(cfg)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    report = {"suite": "verify", "params": {"n": cfg.n, "r": [str(x) for x in cfg.r], "window": cfg.window}, "checks": checks}
    ok = all(c["status"] == "pass" for c in checks)
    if cfg.fmt == "text":
        lines = [f"{c['status'].upper():4}  {c['name']}" for c in checks]
        lines.append(f"{sum(c['status'] == 'pass' for c in checks)}/{len(checks)} checks passed")
        text = "\n".join(lines)
        if cfg.out:
            Path(cfg.out).write_text(json.dumps(report, indent=2) + "\n")
            sys.stdout.write(text + "\n")
        else:
            sys.stdout.write(text + "\n")
    else:
        _emit(json.dumps(report, indent=2), cfg)
    return 0 if ok else 1


def _need_n3(cfg: RunConfig):
    if cfg.n != 3 and cfg.n != 2:
        raise UsageError("kernels, bases and diagrams are available for n = 2 and n = 3")


def cmd_kernel(cfg: RunConfig) -> int:
    from .intertwiners import invariant_subspace

    _need_n3(cfg)
    try:
        kb = invariant_subspace(cfg.params, cfg.window)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if cfg.fmt == "json" or cfg.out:
        _emit(kb.to_json(), cfg, ".json")
    if cfg.fmt != "json":
        lines = [
            f"class {kb.cls}, operators {', '.join(kb.operators)}, window {kb.window}",
            f"dimension {kb.dimension}",
        ]
        lines += [f"  {format_poly(p)}" for p in kb.basis]
        sys.stdout.write("\n".join(lines) + "\n")
    return 0


def cmd_basis(cfg: RunConfig) -> int:
    from .basis import basis_to_json, enumerate_indices, state_v

    if cfg.n != 3:
        raise UsageError("the state basis is available for n = 3")
    P = cfg.params
    try:
        ix = enumerate_indices(P, cfg.window)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    pairs = [(i, state_v(i, P)) for i in ix]
    if cfg.fmt == "json" or cfg.out:
        _emit(basis_to_json(pairs), cfg, ".json")
    if cfg.fmt != "json":
        lines = [f"{len(pairs)} states" + (f" (truncated at window {cfg.window})" if ix.truncated else "")]
        lines += [f"v[{i.l},{i.k},{i.j}] = {_poly_text(p, cfg)}" for i, p in pairs]
        sys.stdout.write("\n".join(lines) + "\n")
    return 0


def cmd_diagram(cfg: RunConfig) -> int:
    from .newton import build_diagram, render

    if cfg.n != 3:
        raise UsageError("Newton diagrams are available for n = 3")
    try:
        d = build_diagram(cfg.params, cfg.window)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    fmt = cfg.fmt if cfg.fmt in ("json", "ascii", "svg") else "ascii"
    body = render(d, fmt).decode()
    if cfg.out:
        path = Path(cfg.out)
        path.write_text(body)
        if fmt == "json":
            path.with_suffix(".svg").write_text(render(d, "svg").decode())
    else:
        sys.stdout.write(body)
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=None, help="rank (default: len(r) + 1, else 3)")
    common.add_argument("--r", default=None, help="parameters as p/q strings, comma separated")
    common.add_argument("--window", type=int, default=4, help="total-degree window W")
    common.add_argument("--t0", default=None, help="evaluate scalars at t = t0 (t = q^(1/4d))")
    common.add_argument("--format", default="text", choices=("text", "json", "ascii", "svg"))
    common.add_argument("--out", default=None, help="output file")
    common.add_argument("--limit-q1", action="store_true", help="print the q -> 1 limit")
    p = argparse.ArgumentParser(prog="qcli", description="q-difference realizations of Uq(sl(n))")
    sub = p.add_subparsers(dest="cmd", required=True)
    s = sub.add_parser("realize", parents=[common], help="print a realized generator")
    s.add_argument("--gen", required=True)
    s = sub.add_parser("act", parents=[common], help="apply a generator to a polynomial")
    s.add_argument("--gen", required=True)
    s.add_argument("--poly", required=True)
    sub.add_parser("verify", parents=[common], help="run the property suite")
    sub.add_parser("kernel", parents=[common], help="exact invariant subspace")
    sub.add_parser("basis", parents=[common], help="explicit states of the subrepresentation")
    sub.add_parser("diagram", parents=[common], help="Newton diagram")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        cfg = _config(ns)
        if ns.cmd == "realize":
            return cmd_realize(cfg, ns.gen)
        if ns.cmd == "act":
            return cmd_act(cfg, ns.gen, ns.poly)
        if ns.cmd == "verify":
            return cmd_verify(cfg)
        if ns.cmd == "kernel":
            return cmd_kernel(cfg)
        if ns.cmd == "basis":
            return cmd_basis(cfg)
        if ns.cmd == "diagram":
            return cmd_diagram(cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PoleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())

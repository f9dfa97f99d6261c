"""Command line front end.

Every command builds one report dict, then renders it as text or as a single
JSON document (``--format machine``).  Exit status: 0 clean, 1 on any violated
verdict or failed cross-check, 2 on bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

from . import __version__
from .basechange import semistable_reduction
from .corpus import describe, load_entries, run_corpus
from .errors import EngineError, InputError
from .fiber import FiberGraph, classify
from .heights import (
    Verdict,
    bound_6,
    check_bound_7,
    check_canonical_class,
    check_theorem_A,
    miyaoka_m,
    point_invariants,
    validate_fibration,
)
from .invariants import from_reduction, check_lemma_1_6, global_invariants
from .io import (
    FiberDocument,
    FibrationDocument,
    PointCheckDocument,
    load,
    rational_out,
    serialize_fiber,
)
from .resolution import alpha, check_resolution_bounds

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2


class Report:
    def __init__(self, command: str, subject: str = ""):
        self.command = command
        self.subject = subject
        self.sections: list[tuple[str, Any]] = []
        self.verdicts: list[dict[str, Any]] = []
        self.warnings: list[str] = []
        self.violations = 0

    def add(self, title: str, body: Any) -> None:
        self.sections.append((title, body))

    def verdict(self, v: Verdict) -> None:
        d = {
            "name": v.name,
            "lhs": rational_out(v.lhs),
            "rhs": rational_out(v.rhs),
            "margin": rational_out(v.margin),
            "status": v.status,
        }
        if v.inconsistency:
            d["inconsistency"] = v.inconsistency
        self.verdicts.append(d)
        self.violations += not v.ok

    def bound(self, name: str, lhs, rhs, ok: bool, applicable: bool = True) -> None:
        margin = Fraction(rhs) - Fraction(lhs)
        status = "not-applicable" if not applicable else ("violated" if not ok else
                                                          "satisfied-equality" if margin == 0 else "satisfied-strict")
        self.verdicts.append(
            {"name": name, "lhs": rational_out(lhs), "rhs": rational_out(rhs), "margin": rational_out(margin),
             "status": status}
        )
        self.violations += applicable and not ok

    def fail(self, name: str, detail: str = "") -> None:
        self.verdicts.append({"name": name, "status": "failed", "detail": detail})
        self.violations += 1

    @property
    def exit_code(self) -> int:
        return EXIT_VIOLATION if self.violations else EXIT_OK

    def as_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"command": self.command, "subject": self.subject}
        out.update(self.sections)
        out["verdicts"] = self.verdicts
        out["warnings"] = sorted(set(self.warnings))
        out["exit"] = self.exit_code
        return out


# ---------------------------------------------------------------- rendering


def _fmt(v: Any) -> str:
    if isinstance(v, Fraction):
        return str(rational_out(v))
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)


def render_text(d: dict[str, Any]) -> str:
    lines = [f"{d['command']}: {d['subject']}" if d["subject"] else d["command"]]
    for key, body in d.items():
        if key in ("command", "subject", "verdicts", "warnings", "exit"):
            continue
        lines.append(f"{key}:")
        lines.extend(_render_body(body, "  "))
    if d["verdicts"]:
        lines.append("verdicts:")
        for v in d["verdicts"]:
            if "lhs" in v:
                s = f"  [{v['status']}] {v['name']}: lhs {v['lhs']}, rhs {v['rhs']}, margin {v['margin']}"
                if v["status"] != "not-applicable":
                    s += f" (~{float(Fraction(str(v['margin']))):.6g})"
            else:
                s = f"  [{v['status']}] {v['name']}"
            if v.get("detail"):
                s += f"  {v['detail']}"
            if v.get("inconsistency"):
                s += f"  INCONSISTENT: {v['inconsistency']}"
            lines.append(s)
    for w in d["warnings"]:
        lines.append(f"warning: {w}")
    lines.append(f"exit {d['exit']}")
    return "\n".join(lines) + "\n"


def _render_body(body: Any, ind: str) -> list[str]:
    if body in ({}, []):
        return [f"{ind}(none)"]
    if isinstance(body, dict):
        width = max((len(str(k)) for k in body), default=0)
        out = []
        for k, v in body.items():
            if isinstance(v, (dict, list)) and v and isinstance(next(iter(v)) if isinstance(v, dict) else v[0], (dict, list)):
                out.append(f"{ind}{k}:")
                out.extend(_render_body(v, ind + "  "))
            else:
                out.append(f"{ind}{str(k).ljust(width)}  {_fmt(v) if not isinstance(v, dict) else json.dumps(v, sort_keys=True)}")
        return out
    if isinstance(body, list):
        out = []
        for item in body:
            if isinstance(item, dict):
                out.append(ind + "- " + ", ".join(f"{k}={_fmt(v)}" for k, v in item.items()))
            else:
                out.append(f"{ind}- {_fmt(item)}")
        return out
    return [f"{ind}{_fmt(body)}"]


def render_machine(d: dict[str, Any]) -> str:
    return json.dumps(d, sort_keys=True, indent=2, default=_json_default) + "\n"


def _json_default(v):
    if isinstance(v, Fraction):
        return rational_out(v)
    raise TypeError(f"cannot serialize {type(v).__name__}")


# ---------------------------------------------------------------- commands


def _load_fiber(path: str) -> FiberGraph:
    doc = load(path)
    if not isinstance(doc, FiberDocument):
        raise InputError(f"{path}: expected a document of kind 'fiber', got {doc.kind!r}")
    return doc.fiber


def _q(x) -> int | str:
    return rational_out(x)


def cmd_invariants(args) -> Report:
    f = _load_fiber(args.file)
    rep = Report("invariants", f.name or args.file)
    red = semistable_reduction(f)
    inv = from_reduction(f, red, _defaulted(red))
    log = red.log
    rep.add("invariants", {
        "e_used": inv.e_used,
        "c1_sq": _q(inv.c1_sq),
        "c2": _q(inv.c2),
        "chi": _q(inv.chi),
        "c_minus_1": _q(inv.c_minus_1),
        "alpha_total": inv.alpha_total,
    })
    rep.add("alpha", {p.id: alpha(log, p.id) for p in f.point_singularities})
    rep.add("provenance", {
        "c1_sq.closed_formula": _q(inv.c1_closed),
        "c1_sq.simulation": _q(inv.c1_simulated),
        "c1_sq.closed_inputs": {"g": inv.genus, "pa_red": inv.pa_red, "fred_sq": inv.fred_sq,
                                "alpha_total": inv.alpha_total, "c_minus_1": _q(inv.c_minus_1)},
        "c2.euler_before": inv.euler_before,
        "c2.euler_after": inv.euler_after,
        "c_minus_1.contracted": inv.contracted,
        "blowups": inv.blowups,
    })
    l16 = check_lemma_1_6(f, inv)
    for c in l16.checks:
        rep.bound(c.name, c.lhs, c.rhs, c.ok or not c.applicable, c.applicable)
    if not l16.in_scope:
        rep.warnings.append(f"c1^2 + c_-1 bounds are stated for g >= 2; margins for g = {inv.genus} are informational")
    bounds = check_resolution_bounds(log, f)
    for e in bounds.entries:
        rep.bound(e.name, e.lhs, e.rhs, e.ok)
    if not bounds.equality_iff_ok:
        rep.fail("sum alpha == 2 p_a(F_red) iff p_a(F_red) == 0")
    if min(inv.c1_sq, inv.c2, inv.chi, inv.c_minus_1) < 0:
        rep.fail("c1^2, c2, chi_F, c_-1 >= 0")
    if args.trace:
        rep.add("trace", _resolution_trace(log) + list(red.pullback.trace))
    return rep


def _defaulted(red) -> bool:
    return any(c.defaulted for c in red.pullback.component_covers)


def _resolution_trace(log) -> list[str]:
    return [
        f"blow up {s.label} at {s.point}/{s.cluster_point}: m = {s.m}, m_bar = {s.m_bar}, "
        f"exceptional multiplicity {s.exc_mult_in_total_B}"
        for s in log.steps
    ]


def cmd_basechange(args) -> Report:
    f = _load_fiber(args.file)
    rep = Report("basechange", f.name or args.file)
    red = semistable_reduction(f, args.order)
    pb = red.pullback
    rep.add("order", {"e": pb.e_used, "chosen": args.order is None})
    rep.add("normalization", [
        {"node": idx, "mults": [n.a, n.b], "points_above": n.points_above, "chain": f"A_{n.chain_length_per_point}"}
        for idx, n in pb.node_covers
    ])
    rep.add("covers", [
        {"component": c.component, "pieces": c.count, "genus": c.genus, "degree": c.degree}
        for c in pb.component_covers
    ])
    rep.add("contracted", list(pb.contracted))
    rep.add("result", {"kind": classify(pb.fiber).kind, "c_minus_1": _q(pb.c_minus_1)})
    rep.add("fiber", serialize_fiber(pb.fiber))
    if args.trace:
        rep.add("trace", _resolution_trace(red.log) + list(pb.trace))
    return rep


def cmd_resolve(args) -> Report:
    from .resolution import resolve

    f = _load_fiber(args.file)
    rep = Report("resolve", f.name or args.file)
    log = resolve(f)
    rep.add("steps", [
        {"label": s.label, "point": s.point, "m": s.m, "m_bar": s.m_bar, "exc_mult": s.exc_mult_in_total_B}
        for s in log.steps
    ])
    rep.add("alpha", {p.id: alpha(log, p.id) for p in f.point_singularities})
    rep.add("fiber", serialize_fiber(log.final_graph))
    bounds = check_resolution_bounds(log, f)
    for e in bounds.entries:
        rep.bound(e.name, e.lhs, e.rhs, e.ok)
    if not bounds.equality_iff_ok:
        rep.fail("sum alpha == 2 p_a(F_red) iff p_a(F_red) == 0")
    return rep


def cmd_check(args) -> Report:
    doc = load(args.file)
    if isinstance(doc, FibrationDocument):
        fs, points, sd, name = doc.summary, doc.points, doc.section_data, doc.name
    elif isinstance(doc, PointCheckDocument):
        fs, points, sd, name = doc.summary, (doc.point,), doc.section_data, doc.name
    else:
        raise InputError(f"{args.file}: check needs a fibration or point-check document, got {doc.kind!r}")
    rep = Report("check", name or args.file)
    if fs.g < 2:
        raise InputError(f"the height and canonical-class inequalities assume g >= 2; this summary has g = {fs.g}")
    rep.warnings.extend(validate_fibration(fs))
    rep.add("summary", {"g": fs.g, "b": fs.b, "s": fs.s, "ksq": _q(fs.ksq), "chi": _q(fs.chi), "e_f": _q(fs.e_f),
                        "semistable": fs.semistable, "nontrivial": fs.nontrivial})
    if fs.noether_defect == 0 and (fs.fibers or fs.semistable):
        gi = global_invariants(fs)
        rep.add("global", {"I_K": _q(gi.I_K), "I_chi": _q(gi.I_chi), "I_e": _q(gi.I_e)})
        if not gi.nonnegative:
            rep.fail("I_K, I_chi, I_e >= 0")
    rep.verdict(check_canonical_class(fs))
    pts = {}
    for i, p in enumerate(points):
        key = p.name or f"point{i}"
        h, d = point_invariants(p)
        pts[key] = {"degree": p.degree, "h_K": _q(h), "d": _q(d)}
        if p.e_self is not None:
            pts[key]["minus_e_self"] = _q(-p.e_self)
        if fs.nontrivial:
            rep.verdict(_named(check_theorem_A(fs, p), key))
        if sd is not None and fs.semistable and fs.b >= 1 and p.is_section:
            rep.verdict(_named(check_bound_7(fs, p, sd), key))
            rep.verdict(_named(bound_6(fs, p, sd), key))
    if pts:
        rep.add("points", pts)
    return rep


def _named(v: Verdict, key: str) -> Verdict:
    return Verdict(f"{key}: {v.name}", v.lhs, v.rhs, v.strict, v.inconsistency)


def cmd_miyaoka(args) -> Report:
    rep = Report("miyaoka", f"{args.kind}_{args.r}")
    rep.add("m", {"kind": args.kind, "r": args.r, "value": _q(miyaoka_m(args.kind, args.r))})
    return rep


def cmd_corpus(args) -> Report:
    if args.action == "list":
        rep = Report("corpus list")
        rep.add("entries", [{"name": n, **describe(doc)} for n, doc in load_entries()])
        return rep
    rep = Report("corpus run")
    results = run_corpus(Path(args.golden) if args.golden else None)
    entries = {}
    for r in results:
        entries[r.name] = {
            "kind": r.kind,
            "ok": r.ok,
            "checks": len(r.checks),
            "values": r.values,
        }
        failed = [c for c in r.checks if not c.ok]
        if failed:
            entries[r.name]["failed"] = [f"{c.name}: {c.detail}" if c.detail else c.name for c in failed]
        for c in failed:
            rep.fail(f"{r.name}: {c.name}", c.detail)
        rep.warnings.extend(f"{r.name}: {w}" for w in r.warnings)
    rep.add("entries", entries)
    rep.add("totals", {"entries": len(results), "failed": sum(not r.ok for r in results)})
    return rep


# ---------------------------------------------------------------- driver


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "machine"), default=argparse.SUPPRESS)
    common.add_argument("--trace", action="store_true", default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="fiberlab", parents=[common],
                                description="Exact invariants of degenerate fibers and height inequality checks.")
    p.add_argument("--version", action="version", version=f"fiberlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("invariants", parents=[common], help="per-fiber defects and their provenance")
    s.add_argument("file")
    s.set_defaults(func=cmd_invariants)

    s = sub.add_parser("basechange", parents=[common], help="simulate semistable reduction")
    s.add_argument("file")
    s.add_argument("--order", type=int, default=None, help="base change order (default: lcm of multiplicities)")
    s.set_defaults(func=cmd_basechange)

    s = sub.add_parser("resolve", parents=[common], help="embedded resolution log")
    s.add_argument("file")
    s.set_defaults(func=cmd_resolve)

    s = sub.add_parser("check", parents=[common], help="height and canonical-class verdicts")
    s.add_argument("file")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("miyaoka", parents=[common], help="m-value of an ADE configuration")
    s.add_argument("--kind", choices=("A", "D", "E"), required=True)
    s.add_argument("--r", type=int, required=True)
    s.set_defaults(func=cmd_miyaoka)

    s = sub.add_parser("corpus", parents=[common], help="run or list the built-in corpus")
    s.add_argument("action", choices=("run", "list"))
    s.add_argument("--golden", default=None, help="golden file (default: the corpus golden.json)")
    s.set_defaults(func=cmd_corpus)
    return p


def main(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    fmt = getattr(args, "format", "text")
    args.trace = getattr(args, "trace", False)
    render: Callable[[dict], str] = render_machine if fmt == "machine" else render_text
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            rep = args.func(args)
        except InputError as exc:
            return _error(out, err, fmt, args.command, exc, EXIT_INPUT)
        except EngineError as exc:
            return _error(out, err, fmt, args.command, exc, EXIT_VIOLATION)
    rep.warnings.extend(str(w.message) for w in caught)
    d = rep.as_dict()
    out.write(render(d))
    return d["exit"]


def _error(out, err, fmt: str, command: str, exc: Exception, code: int) -> int:
    kind = type(exc).__name__
    err.write(f"fiberlab {command}: {kind}: {exc}\n")
    if fmt == "machine":
        out.write(render_machine({"command": command, "error": {"type": kind, "message": str(exc)}, "exit": code}))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

"""Built-in corpus: data files, golden values, and the full per-entry audit."""
from __future__ import annotations

import json
import os
import random
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any

from .basechange import pullback_fiber, semistable_reduction
from .errors import EngineError, FiberlabError, InputError
from .fiber import FiberGraph, chi_top, classify, fiber_genus, fred_square, pa_red
from .heights import (
    bound_6,
    bound_7,
    check_bound_7,
    check_canonical_class,
    check_theorem_A,
    miyaoka_check,
    point_invariants,
    validate_fibration,
)
from .invariants import check_lemma_1_5, check_lemma_1_6, fiber_invariants, global_invariants
from .io import (
    Document,
    FiberDocument,
    FibrationDocument,
    MiyaokaDocument,
    PointCheckDocument,
    load,
    loads,
    dumps,
    rational_out,
)
from .resolution import alpha_total, check_resolution_bounds, resolve

ENV_VAR = "FIBERLAB_CORPUS"


def corpus_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path(str(resources.files("fiberlab").joinpath("data/corpus")))


def golden_path() -> Path:
    return corpus_dir() / "golden.json"


def entry_paths(root: Path | None = None) -> list[Path]:
    root = root or corpus_dir()
    if not root.is_dir():
        raise InputError(f"corpus directory {root} does not exist")
    return sorted(p for p in root.glob("*.json") if p.name != "golden.json")


@lru_cache(maxsize=None)
def _fiber_index(root: str) -> dict[str, Path]:
    out = {}
    for p in entry_paths(Path(root)):
        obj = json.loads(p.read_text())
        if obj.get("kind") == "fiber":
            out[obj.get("name", p.stem)] = p
    return out


def resolve_fiber(name: str) -> FiberGraph:
    idx = _fiber_index(str(corpus_dir()))
    if name not in idx:
        raise InputError(f"no corpus fiber named {name!r}")
    doc = load(idx[name], resolver=_no_refs)
    assert isinstance(doc, FiberDocument)
    return doc.fiber


def _no_refs(name: str) -> FiberGraph:
    raise InputError("corpus fibers cannot reference other fibers")


def load_entries() -> list[tuple[str, Document]]:
    out = []
    for p in entry_paths():
        doc = load(p)
        out.append((getattr(doc, "name", "") or p.stem, doc))
    names = [n for n, _ in out]
    if len(set(names)) != len(names):
        raise InputError("corpus entry names are not unique")
    return sorted(out, key=lambda x: x[0])


def describe(doc: Document) -> dict[str, Any]:
    if isinstance(doc, FiberDocument):
        meta = dict(doc.fiber.meta)
        return {"kind": "fiber", "g": fiber_genus(doc.fiber), "type": meta.get("type", "")}
    if isinstance(doc, FibrationDocument):
        return {"kind": "fibration", "g": doc.summary.g, "type": dict(doc.meta).get("type", "")}
    if isinstance(doc, PointCheckDocument):
        return {"kind": "point-check", "g": doc.summary.g, "type": dict(doc.meta).get("type", "")}
    return {"kind": "miyaoka-check", "g": None, "type": dict(doc.meta).get("type", "")}


# ----------------------------------------------------------------- audit


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class EntryResult:
    name: str
    kind: str
    values: dict[str, Any] = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def check(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(ok), detail))


def _q(x) -> int | str:
    return rational_out(x)


def graph_signature(f: FiberGraph) -> dict[str, Any]:
    return {
        "components": len(f.components),
        "edges": len(f.edges),
        "genera": sorted(c.genus for c in f.components),
        "self_intersections": sorted(f.self_intersections.values()),
        "kind": classify(f).kind,
    }


def audit_fiber(name: str, f: FiberGraph) -> EntryResult:
    r = EntryResult(name, "fiber")
    log = resolve(f)
    bounds = check_resolution_bounds(log, f)
    inv = fiber_invariants(f)
    pb = semistable_reduction(f).pullback
    l16 = check_lemma_1_6(f, inv)
    r.values.update(
        g=fiber_genus(f),
        pa_red=pa_red(f),
        fred_sq=fred_square(f),
        chi_top=chi_top(f),
        classification=classify(f).kind,
        m_sequence=list(log.m_sequence),
        exc_mults=[s.exc_mult_in_total_B for s in log.steps],
        alpha_total=alpha_total(log),
        e=inv.e_used,
        c1_sq=_q(inv.c1_sq),
        c2=_q(inv.c2),
        chi=_q(inv.chi),
        c_minus_1=_q(inv.c_minus_1),
        contracted=inv.contracted,
        pullback=graph_signature(pb.fiber),
        lemma_1_6_margins=[_q(c.margin) for c in l16.checks],
    )
    r.check("eq1: m_bar >= m - 2 at every blow-up", all(e.ok for e in bounds.entries[:-1]))
    r.check("sum alpha <= 2 p_a(F_red), equality iff p_a = 0", bounds.entries[-1].ok and bounds.equality_iff_ok)
    r.check("closed formula c1^2 == simulated c1^2", inv.c1_closed == inv.c1_simulated)
    same = True
    for k in (2, 3):
        other = fiber_invariants(f, k * inv.e_used)
        same &= (other.c1_sq, other.c2, other.chi, other.c_minus_1) == (inv.c1_sq, inv.c2, inv.chi, inv.c_minus_1)
        same &= other.c1_closed == other.c1_simulated
    r.check("invariants agree for e, 2e, 3e", same)
    r.check("12 chi_F == c1^2 + c2", 12 * inv.chi == inv.c1_sq + inv.c2)
    r.check("c1^2, c2, chi_F, c_-1 >= 0", min(inv.c1_sq, inv.c2, inv.chi, inv.c_minus_1) >= 0)
    if classify(f).semistable:
        r.check("semistable fiber has zero defects", (inv.c1_sq, inv.c2, inv.chi, inv.c_minus_1) == (0, 0, 0, 0))
    if inv.genus == 1:
        r.check("elliptic fiber has c1^2 == 0", inv.c1_sq == 0)
    if l16.in_scope:
        r.check("c1^2 + c_-1 bounds", l16.ok, "; ".join(f"{c.name}: margin {c.margin}" for c in l16.checks if c.applicable))
    counts = set()
    for seed in range(3):
        counts.add(pullback_fiber(log.final_graph, inv.e_used, random.Random(seed)).contracted_per_point)
    r.check("contraction count independent of order", counts == {inv.contracted}, str(sorted(counts)))
    again = loads(dumps(FiberDocument(f)))
    r.check("serialization round trip", isinstance(again, FiberDocument) and again.fiber == f)
    return r


def audit_fibration(name: str, doc: FibrationDocument) -> EntryResult:
    r = EntryResult(name, "fibration")
    fs = doc.summary
    r.warnings.extend(validate_fibration(fs))
    gi = global_invariants(fs)
    r.values.update(I_K=_q(gi.I_K), I_chi=_q(gi.I_chi), I_e=_q(gi.I_e), isotrivial_indicated=gi.isotrivial_indicated)
    r.check("I_K, I_chi, I_e >= 0", gi.nonnegative, str(tuple(map(str, gi.values))))
    for sc in doc.scalings:
        rep = check_lemma_1_5(fs, sc.d, dict(sc.profile))
        r.values[f"scaled_d{sc.d}"] = [_q(x) for x in rep.after]
        r.check(f"I(f~) == {sc.d} I(f)", rep.ok, f"skipped {list(rep.skipped)}" if rep.skipped else "")
    if fs.g >= 2:
        cc = check_canonical_class(fs)
        r.values["canonical_class_margin"] = _q(cc.margin)
        r.check("canonical class inequality", cc.ok, cc.describe())
        for i, p in enumerate(doc.points):
            _audit_point(r, fs, p, doc.section_data, p.name or f"point{i}")
    again = loads(dumps(doc))
    r.check("serialization round trip", again == doc)
    return r


def _audit_point(r: EntryResult, fs, p, sd, key: str) -> None:
    h, d = point_invariants(p)
    r.values[f"{key}.h_K"] = _q(h)
    r.values[f"{key}.d"] = _q(d)
    if p.e_self is not None:
        r.check(f"{key}: h_K == -E^2", h == -p.e_self)
    if fs.nontrivial:
        v = check_theorem_A(fs, p)
        r.values[f"{key}.theorem_A_margin"] = _q(v.margin)
        r.check(f"{key}: height inequality", v.ok, v.describe())
    if sd is not None and fs.semistable and fs.b >= 1 and p.is_section:
        b7 = check_bound_7(fs, p, sd)
        b6 = bound_6(fs, p, sd)
        r.values[f"{key}.bound_7"] = _q(bound_7(fs, sd))
        r.values[f"{key}.bound_6_margin"] = _q(b6.margin)
        r.check(f"{key}: section bound via Miyaoka", b6.ok and b7.ok, b7.describe())
        if fs.e_f == sum(m + 1 for m in sd.mu_list):
            r.check(f"{key}: Miyaoka margin == bound - h_K", b6.margin == b7.margin)


def audit_point_check(name: str, doc: PointCheckDocument) -> EntryResult:
    r = EntryResult(name, "point-check")
    r.warnings.extend(validate_fibration(doc.summary))
    _audit_point(r, doc.summary, doc.point, doc.section_data, "point")
    return r


def audit_miyaoka(name: str, doc: MiyaokaDocument) -> EntryResult:
    r = EntryResult(name, "miyaoka-check")
    v = miyaoka_check(doc.c2_S, doc.ksq_plus_D, doc.ade, doc.chi_top_D)
    r.values["margin"] = _q(v.margin)
    r.values["status"] = v.status
    r.check("Miyaoka inequality", v.ok, v.describe())
    return r


def audit(name: str, doc: Document) -> EntryResult:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            if isinstance(doc, FiberDocument):
                r = audit_fiber(name, doc.fiber)
            elif isinstance(doc, FibrationDocument):
                r = audit_fibration(name, doc)
            elif isinstance(doc, PointCheckDocument):
                r = audit_point_check(name, doc)
            else:
                r = audit_miyaoka(name, doc)
        except (EngineError, FiberlabError) as exc:
            r = EntryResult(name, doc.kind)
            r.check("pipeline ran", False, f"{type(exc).__name__}: {exc}")
    r.warnings.extend(sorted({str(w.message) for w in caught}))
    return r


def _normalize(v):
    return json.loads(json.dumps(v))


def compare_golden(r: EntryResult, golden: dict[str, Any]) -> None:
    want = golden.get(r.name)
    if want is None:
        r.check("golden record present", False, "no golden record")
        return
    for key in sorted(want):
        got = _normalize(r.values.get(key, "<missing>"))
        r.check(f"golden {key}", got == want[key], f"expected {want[key]!r}, got {got!r}")


def load_golden(path: Path | None = None) -> dict[str, Any]:
    p = path or golden_path()
    try:
        return json.loads(p.read_text())
    except OSError as exc:
        raise InputError(f"cannot read golden file {p}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{p}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def run_corpus(golden: Path | None = None) -> list[EntryResult]:
    gold = load_golden(golden)
    out = []
    for name, doc in load_entries():
        r = audit(name, doc)
        compare_golden(r, gold)
        out.append(r)
    return out


__all__ = [
    "ENV_VAR",
    "EntryResult",
    "audit",
    "corpus_dir",
    "describe",
    "load_entries",
    "resolve_fiber",
    "run_corpus",
]

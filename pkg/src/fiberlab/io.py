"""JSON input documents: parsing with located diagnostics, and serialization.

The formal field list lives in ``schema.json`` next to this module.  Rationals
are written as integers or "p/q" strings.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any, Callable, Union

import jsonschema

from .errors import InputError
from .fiber import Edge, FiberComponent, FiberGraph, PointSingularity
from .heights import AlgebraicPoint, SectionLocalData
from .invariants import FiberEntry, FibrationSummary
from .singularities import ClusterPoint, SingularityDescriptor

Resolver = Callable[[str], FiberGraph]


@dataclass(frozen=True)
class FiberDocument:
    fiber: FiberGraph
    kind: str = field(default="fiber", init=False)

    @property
    def name(self) -> str:
        return self.fiber.name


@dataclass(frozen=True)
class Scaling:
    d: int
    profile: tuple[tuple[str, int], ...] = ()


@dataclass(frozen=True)
class FibrationDocument:
    summary: FibrationSummary
    points: tuple[AlgebraicPoint, ...] = ()
    section_data: SectionLocalData | None = None
    scalings: tuple[Scaling, ...] = ()
    meta: tuple[tuple[str, str], ...] = ()
    kind: str = field(default="fibration", init=False)

    @property
    def name(self) -> str:
        return self.summary.name


@dataclass(frozen=True)
class PointCheckDocument:
    summary: FibrationSummary
    point: AlgebraicPoint
    section_data: SectionLocalData | None = None
    name: str = ""
    meta: tuple[tuple[str, str], ...] = ()
    kind: str = field(default="point-check", init=False)


@dataclass(frozen=True)
class MiyaokaDocument:
    c2_S: Fraction
    ksq_plus_D: Fraction
    chi_top_D: int
    ade: tuple[tuple[str, int], ...] = ()
    name: str = ""
    meta: tuple[tuple[str, str], ...] = ()
    kind: str = field(default="miyaoka-check", init=False)


Document = Union[FiberDocument, FibrationDocument, PointCheckDocument, MiyaokaDocument]


@lru_cache(maxsize=1)
def schema() -> dict:
    return json.loads(resources.files("fiberlab").joinpath("schema.json").read_text())


def _where(path) -> str:
    out = ""
    for p in path:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out or "<document>"


def validate(obj: Any) -> None:
    v = jsonschema.Draft202012Validator(schema())
    errors = sorted(v.iter_errors(obj), key=lambda e: (len(e.absolute_path), list(map(str, e.absolute_path))))
    if errors:
        best = jsonschema.exceptions.best_match(errors)
        raise InputError(f"{_where(best.absolute_path)}: {best.message}")


def rational(v) -> Fraction:
    try:
        return Fraction(v)
    except (ValueError, ZeroDivisionError, TypeError):
        raise InputError(f"not a rational number: {v!r}") from None


def rational_out(q) -> int | str:
    q = Fraction(q)
    return q.numerator if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class _At:
    """Prefix domain errors with the field they came from."""

    def __init__(self, where: str):
        self.where = where

    def __enter__(self):
        return self

    def __exit__(self, tp, exc, tb):
        if exc is not None and isinstance(exc, InputError) and not getattr(exc, "_located", False):
            new = type(exc)(f"{self.where}: {exc}")
            new._located = True
            raise new from exc
        return False


# ---------------------------------------------------------------- parsing


def _meta(obj) -> tuple[tuple[str, str], ...]:
    return tuple(sorted((obj.get("meta") or {}).items()))


def _singularity(obj, where) -> PointSingularity:
    kind = obj["kind"]
    with _At(where):
        if kind == "custom":
            if "points" not in obj:
                raise InputError("custom singularity needs 'points'")
            pts = tuple(
                ClusterPoint(p["id"], p.get("parent"), tuple(p["mults"]), p.get("satellite_of"))
                for p in obj["points"]
            )
            desc = SingularityDescriptor("custom", pts)
        else:
            if "points" in obj:
                raise InputError(f"built-in kind {kind!r} takes no 'points'")
            if kind != "ordinary" and "m" in obj:
                raise InputError("'m' is only used by the ordinary kind")
            desc = SingularityDescriptor.builtin(kind, obj.get("m"))
        return PointSingularity(obj["id"], tuple(obj["branches"]), desc)


def _edge(obj) -> Edge:
    if isinstance(obj, list):
        return Edge(obj[0], obj[1])
    return Edge(obj["ends"][0], obj["ends"][1], obj.get("twist", 0))


def parse_fiber(obj, where: str = "") -> FiberGraph:
    comps = []
    for i, c in enumerate(obj["components"]):
        with _At(f"{where}components[{i}]"):
            comps.append(
                FiberComponent(c["id"], c.get("genus", 0), c.get("multiplicity", 1), c.get("cover_components"))
            )
    edges = tuple(_edge(e) for e in obj.get("edges", []))
    sings = tuple(
        _singularity(s, f"{where}singularities[{i}]") for i, s in enumerate(obj.get("singularities", []))
    )
    with _At(where.rstrip(".") or "fiber"):
        return FiberGraph(tuple(comps), edges, sings, obj.get("name", ""), _meta(obj))


def _point(obj, where) -> AlgebraicPoint:
    with _At(where):
        return AlgebraicPoint(
            obj["degree"],
            rational(obj["k_dot_e"]),
            obj["genus_tilde"],
            rational(obj["e_self"]) if "e_self" in obj else None,
            obj.get("name", ""),
        )


def _section(obj, where) -> SectionLocalData | None:
    if obj is None:
        return None
    with _At(where):
        return SectionLocalData(tuple(obj["mu_list"]), tuple(tuple(t) for t in obj.get("epsilon_terms", [])))


def _summary(obj, where: str, resolver: Resolver | None) -> FibrationSummary:
    entries = []
    for i, x in enumerate(obj.get("fibers", [])):
        loc = f"{where}fibers[{i}]"
        if "ref" in x:
            if resolver is None:
                raise InputError(f"{loc}: fiber reference {x['ref']!r} needs a corpus")
            with _At(loc):
                fib = resolver(x["ref"])
        else:
            fib = parse_fiber(x["fiber"], f"{loc}.fiber.")
        entries.append(FiberEntry(x["count"], fib))
    with _At(where.rstrip(".") or "fibration"):
        return FibrationSummary(
            obj["g"], obj["b"], obj["s"],
            rational(obj["ksq"]), rational(obj["chi"]), rational(obj["e_f"]),
            tuple(entries), obj.get("semistable", True), obj.get("nontrivial", True), obj.get("name", ""),
        )


def parse(obj: Any, resolver: Resolver | None = None) -> Document:
    if resolver is None:
        from .corpus import resolve_fiber as resolver
    validate(obj)
    kind = obj["kind"]
    if kind == "fiber":
        return FiberDocument(parse_fiber(obj))
    if kind == "fibration":
        fs = _summary(obj, "", resolver)
        pts = tuple(_point(p, f"points[{i}]") for i, p in enumerate(obj.get("points", [])))
        scal = tuple(
            Scaling(s["d"], tuple(sorted(s.get("profile", {}).items()))) for s in obj.get("scalings", [])
        )
        return FibrationDocument(fs, pts, _section(obj.get("section_data"), "section_data"), scal, _meta(obj))
    if kind == "point-check":
        return PointCheckDocument(
            _summary(obj["fibration"], "fibration.", resolver),
            _point(obj["point"], "point"),
            _section(obj.get("section_data"), "section_data"),
            obj.get("name", ""),
            _meta(obj),
        )
    return MiyaokaDocument(
        rational(obj["c2_S"]), rational(obj["ksq_plus_D"]), obj["chi_top_D"],
        tuple((k, r) for k, r in obj.get("ade", [])), obj.get("name", ""), _meta(obj),
    )


def loads(text: str, source: str = "<string>", resolver: Resolver | None = None) -> Document:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    try:
        return parse(obj, resolver)
    except InputError as exc:
        raise type(exc)(f"{source}: {exc}") from exc


def load(path: str | Path, resolver: Resolver | None = None) -> Document:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {p}: {exc.strerror}") from None
    return loads(text, str(p), resolver)


# ---------------------------------------------------------- serialization


def _meta_out(out: dict, meta) -> None:
    if meta:
        out["meta"] = dict(meta)


def serialize_fiber(f: FiberGraph, kind: bool = True) -> dict:
    out: dict = {"kind": "fiber"} if kind else {}
    if f.name:
        out["name"] = f.name
    _meta_out(out, f.meta)
    comps = []
    for c in f.components:
        d: dict = {"id": c.id, "genus": c.genus, "multiplicity": c.multiplicity}
        if c.cover_components is not None:
            d["cover_components"] = c.cover_components
        comps.append(d)
    out["components"] = comps
    out["edges"] = [[e.a, e.b] if not e.twist else {"ends": [e.a, e.b], "twist": e.twist} for e in f.edges]
    sings = []
    for p in f.point_singularities:
        d = {"id": p.id, "kind": p.descriptor.kind, "branches": list(p.branches)}
        if p.descriptor.kind == "ordinary":
            d["m"] = p.descriptor.m
        if p.descriptor.kind == "custom":
            d["points"] = [_cluster_out(q) for q in p.descriptor.points]
        sings.append(d)
    if sings:
        out["singularities"] = sings
    return out


def _cluster_out(q: ClusterPoint) -> dict:
    d: dict = {"id": q.id, "parent": q.parent, "mults": list(q.mults)}
    if q.satellite_of is not None:
        d["satellite_of"] = q.satellite_of
    return d


def _point_out(p: AlgebraicPoint) -> dict:
    d: dict = {"degree": p.degree, "k_dot_e": rational_out(p.k_dot_e), "genus_tilde": p.genus_tilde}
    if p.name:
        d["name"] = p.name
    if p.e_self is not None:
        d["e_self"] = rational_out(p.e_self)
    return d


def _section_out(sd: SectionLocalData) -> dict:
    d: dict = {"mu_list": list(sd.mu_list)}
    if sd.epsilon_terms:
        d["epsilon_terms"] = [list(t) for t in sd.epsilon_terms]
    return d


def _summary_out(fs: FibrationSummary, kind: bool) -> dict:
    out: dict = {"kind": "fibration"} if kind else {}
    if fs.name:
        out["name"] = fs.name
    out.update(
        g=fs.g, b=fs.b, s=fs.s, ksq=rational_out(fs.ksq), chi=rational_out(fs.chi), e_f=rational_out(fs.e_f),
        semistable=fs.semistable, nontrivial=fs.nontrivial,
    )
    if fs.fibers:
        out["fibers"] = [{"count": x.count, "fiber": serialize_fiber(x.fiber, kind=False)} for x in fs.fibers]
    return out


def serialize(doc: Document) -> dict:
    if isinstance(doc, FiberDocument):
        return serialize_fiber(doc.fiber)
    if isinstance(doc, FibrationDocument):
        out = _summary_out(doc.summary, True)
        _meta_out(out, doc.meta)
        if doc.points:
            out["points"] = [_point_out(p) for p in doc.points]
        if doc.section_data is not None:
            out["section_data"] = _section_out(doc.section_data)
        if doc.scalings:
            out["scalings"] = [
                {"d": s.d, **({"profile": dict(s.profile)} if s.profile else {})} for s in doc.scalings
            ]
        return out
    if isinstance(doc, PointCheckDocument):
        out = {"kind": "point-check"}
        if doc.name:
            out["name"] = doc.name
        _meta_out(out, doc.meta)
        out["fibration"] = _summary_out(doc.summary, False)
        out["point"] = _point_out(doc.point)
        if doc.section_data is not None:
            out["section_data"] = _section_out(doc.section_data)
        return out
    out = {"kind": "miyaoka-check"}
    if doc.name:
        out["name"] = doc.name
    _meta_out(out, doc.meta)
    out.update(
        c2_S=rational_out(doc.c2_S), ksq_plus_D=rational_out(doc.ksq_plus_D), chi_top_D=doc.chi_top_D,
        ade=[[k, r] for k, r in doc.ade],
    )
    return out


def dumps(doc: Document) -> str:
    return json.dumps(serialize(doc), indent=2) + "\n"

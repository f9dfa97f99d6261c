"""Local semistable reduction over one critical value.

The base change is s^e = t, totally ramified at the critical value.  For an SNC
fiber F = sum n_i C_i with every n_i dividing e, the normalized pullback is
built from two kinds of local data:

* over the generic point of C_i, a cyclic cover of degree n_i, unramified away
  from the nodes, whose monodromy around a node with C_j is n_j mod n_i;
* over a node with branch multiplicities (a, b), gcd(a, b) points, each an
  A_{n-1} point with n = e / lcm(a, b) (computed through the toric model).

The resolved pullback is then contracted to its relatively minimal model.
"""
from __future__ import annotations

import random
import warnings
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from .errors import EngineError, InputError
from .fiber import (
    Edge,
    FiberComponent,
    FiberGraph,
    chi_top,
    classify,
    fiber_genus,
)
from .lattice import ExceptionalConfig, IntersectionLattice, rational_canonical
from .resolution import ResolutionLog, resolve
from .toric import ToricNode, normalize_node


class CoverWarning(UserWarning):
    """A positive-genus multiple component was lifted with the default connected cover."""


class FractionalContractionWarning(UserWarning):
    pass


@dataclass(frozen=True)
class LocalNodeCover:
    a: int
    b: int
    e: int
    points_above: int
    chain_length_per_point: int
    toric: ToricNode = field(repr=False, compare=False)


def local_model(a: int, b: int, e: int) -> LocalNodeCover:
    for v, name in ((a, "a"), (b, "b"), (e, "e")):
        if int(v) != v or v < 1:
            raise InputError(f"{name} must be a positive integer, got {v}")
    if e % a or e % b:
        raise InputError(f"base change order {e} is not divisible by the branch multiplicities {a}, {b}")
    t = normalize_node(a, b, e)
    return LocalNodeCover(a, b, e, t.factors, len(t.self_intersections), t)


@dataclass(frozen=True)
class ComponentCover:
    component: str
    count: int  # connected pieces
    genus: int  # genus of each piece
    degree: int  # degree of each piece over the component
    defaulted: bool = False  # positive genus, no splitting data: connected cover assumed


def component_cover(c: FiberComponent, e: int, neighbor_mults: list[int]) -> ComponentCover:
    """Cover of ``c`` induced by the base change.

    ``neighbor_mults`` lists, for every node on ``c`` (a self-node twice), the
    multiplicity of the other branch there.
    """
    n = c.multiplicity
    if e % n:
        raise InputError(f"base change order {e} is not divisible by the multiplicity {n} of {c.id}")
    k = [gcd(n, m) for m in neighbor_mults]
    full = gcd(n, *neighbor_mults) if neighbor_mults else n
    defaulted = False
    if n == 1:
        count = 1
    elif c.genus == 0:
        count = full
    elif c.cover_components is not None:
        count = c.cover_components
        if full % count:
            raise InputError(
                f"component {c.id}: cover_components = {count} must divide "
                f"gcd of its multiplicity and the local monodromies ({full})"
            )
    else:
        count, defaulted = 1, True
    deg = n // count
    twice = deg * (2 * c.genus - 2) + sum(deg - kp // count for kp in k)
    if twice % 2 or twice < -2:
        raise EngineError(f"component {c.id}: Riemann-Hurwitz gives 2g-2 = {twice}")
    return ComponentCover(c.id, count, twice // 2 + 1, deg, defaulted)


def choose_e(log: ResolutionLog | FiberGraph, override: int | None = None) -> int:
    """Least common multiple of all multiplicities on the SNC model; override must be a multiple."""
    g = log.final_graph if isinstance(log, ResolutionLog) else log
    base = lcm(*(c.multiplicity for c in g.components))
    if override is None:
        return base
    if int(override) != override or override < 1 or override % base:
        raise InputError(f"order {override} is not a positive multiple of {base}")
    return int(override)


def _copy_id(cid: str, r: int, count: int) -> str:
    return cid if count == 1 else f"{cid}~{r}"


@lru_cache(maxsize=None)
def _chain_canonical_is_zero(selfints: tuple[int, ...]) -> bool:
    n = len(selfints)
    rows = [[selfints[i] if i == j else int(abs(i - j) == 1) for j in range(n)] for i in range(n)]
    lat = IntersectionLattice.from_matrix([f"G{i}" for i in range(n)], rows)
    return rational_canonical(ExceptionalConfig.from_basis(lat, {b: 0 for b in lat.basis})).is_zero()


@dataclass(frozen=True)
class PullbackResult:
    source: FiberGraph
    e_used: int
    resolved: FiberGraph  # normalized pullback with its A_n chains resolved
    fibers_above: tuple[FiberGraph, ...]
    contracted: tuple[str, ...]
    contracted_per_point: int
    c_minus_1: Fraction
    ksq_ledger: Fraction
    node_covers: tuple[tuple[int, LocalNodeCover], ...] = field(repr=False)
    component_covers: tuple[ComponentCover, ...] = field(repr=False)
    trace: tuple[str, ...] = field(default=(), repr=False, compare=False)

    @property
    def fiber(self) -> FiberGraph:
        return self.fibers_above[0]


def pullback_fiber(f: FiberGraph, e: int, rng: random.Random | None = None) -> PullbackResult:
    """Semistable fiber over the preimage of the critical value after s^e = t.

    ``rng`` randomizes the order in which (-1)-curves are contracted.
    """
    if not f.is_snc:
        raise InputError("pullback_fiber needs an SNC fiber; resolve it first")
    e = choose_e(f, e)
    trace: list[str] = [f"base change of order {e}"]
    sq = f.self_intersections

    nbr: dict[str, list[int]] = defaultdict(list)
    for ed in f.edges:
        nbr[ed.a].append(f.by_id[ed.b].multiplicity)
        nbr[ed.b].append(f.by_id[ed.a].multiplicity)
    covers = {c.id: component_cover(c, e, nbr[c.id]) for c in f.components}
    for cv in covers.values():
        trace.append(f"  {cv.component}: {cv.count} piece(s) of genus {cv.genus}, degree {cv.degree}")
        if cv.defaulted:
            warnings.warn(
                f"component {cv.component} has positive genus and no cover_components; "
                "assuming a connected cover",
                CoverWarning,
                stacklevel=2,
            )

    comps: list[FiberComponent] = []
    for c in f.components:
        cv = covers[c.id]
        comps.extend(FiberComponent(_copy_id(c.id, r, cv.count), cv.genus, 1) for r in range(cv.count))
    edges: list[Edge] = []
    # psi^* C_i as coefficients on the resolved pullback
    pull: dict[str, dict[str, Fraction]] = {
        c.id: {
            _copy_id(c.id, r, covers[c.id].count): Fraction(e, c.multiplicity)
            for r in range(covers[c.id].count)
        }
        for c in f.components
    }
    chain_ids: list[str] = []
    node_covers = []
    for idx, ed in enumerate(f.edges):
        ca, cb = covers[ed.a], covers[ed.b]
        na, nb = f.by_id[ed.a].multiplicity, f.by_id[ed.b].multiplicity
        loc = local_model(na, nb, e)
        node_covers.append((idx, loc))
        t = loc.toric
        if any(m != 1 for m in t.fiber_mults):
            raise EngineError(f"node {idx}: pulled-back fiber not reduced along {t.fiber_mults}")
        if any(s != -2 for s in t.self_intersections) or not _chain_canonical_is_zero(t.self_intersections):
            raise EngineError(f"node {idx}: chain {t.self_intersections} is not an A_n configuration")
        L = loc.chain_length_per_point
        trace.append(
            f"  node {idx} ({ed.a},{ed.b}) mults ({na},{nb}): {loc.points_above} point(s), A_{L} each"
        )
        for x in range(loc.points_above):
            end_a = _copy_id(ed.a, x % ca.count, ca.count)
            end_b = _copy_id(ed.b, (x + ed.twist) % cb.count, cb.count)
            ids = [f"N{idx}.{x}.{j}" for j in range(1, L + 1)]
            comps.extend(FiberComponent(i) for i in ids)
            chain_ids.extend(ids)
            path = [end_a, *ids, end_b]
            edges.extend(Edge(u, v) for u, v in zip(path, path[1:]))
            for j, i in enumerate(ids, start=1):
                if t.x_coeffs[j]:
                    pull[ed.a][i] = pull[ed.a].get(i, 0) + t.x_coeffs[j]
                if t.y_coeffs[j]:
                    pull[ed.b][i] = pull[ed.b].get(i, 0) + t.y_coeffs[j]

    try:
        resolved = FiberGraph(tuple(comps), tuple(edges), (), f.name)
    except InputError as exc:
        raise InputError(
            f"pulled-back fiber is disconnected ({exc}); the fiber graph has cycles through "
            "multiple components, so set edge twists to fix how the covers are glued"
        ) from exc

    _check_pullback(f, e, covers, resolved, pull, chain_ids, sq, nbr)

    final, contracted = _contract(resolved, rng)
    k = len(contracted)
    trace.append(f"  contracted {k}: {', '.join(contracted) if contracted else '-'}")
    if classify(final).kind == "non-semistable":
        raise EngineError("contracted pullback is not semistable")
    if not classify(final).relatively_minimal:
        raise EngineError("contraction stopped before reaching a relatively minimal fiber")
    if fiber_genus(final) != fiber_genus(f):
        raise EngineError("fiber genus changed under base change")
    c_minus_1 = Fraction(k, e)
    if c_minus_1.denominator != 1:
        warnings.warn(f"c_-1 = {c_minus_1} is not an integer", FractionalContractionWarning, stacklevel=2)

    ledger = _ksq_ledger(f, k, e)
    return PullbackResult(
        f, e, resolved, (final,), contracted, k, c_minus_1, ledger,
        tuple(node_covers), tuple(covers.values()), tuple(trace),
    )


def _ksq_ledger(f: FiberGraph, contracted: int, e: int) -> Fraction:
    """K^2 change per unit degree: -2K.D + D^2 + contracted/e with D = F - F_red on the SNC model."""
    sq = f.self_intersections
    d = {c.id: c.multiplicity - 1 for c in f.components}
    kd = sum(d[c] * f.canonical_degree(c) for c in d)
    dd = sum(d[a] * d[a] * sq[a] for a in d) + sum(
        d[a] * d[b] * k for (a, b), k in f.intersections.items()
    )
    return Fraction(-2 * kd + dd) + Fraction(contracted, e)


def _sparse_pairing(g: FiberGraph) -> dict[str, dict[str, int]]:
    sq = g.self_intersections
    out: dict[str, dict[str, int]] = {c.id: {c.id: sq[c.id]} for c in g.components}
    for ed in g.edges:
        if not ed.is_loop:
            out[ed.a][ed.b] = out[ed.a].get(ed.b, 0) + 1
            out[ed.b][ed.a] = out[ed.b].get(ed.a, 0) + 1
    return out


def _pair(p: dict[str, dict[str, int]], x: dict[str, Fraction], y: dict[str, Fraction]) -> Fraction:
    total = Fraction(0)
    for a, ca in x.items():
        row = p[a]
        for b, cb in y.items():
            v = row.get(b)
            if v:
                total += ca * cb * v
    return total


def _check_pullback(f, e, covers, resolved, pull, chain_ids, sq, nbr) -> None:
    p = _sparse_pairing(resolved)
    ids = f.ids
    for i, a in enumerate(ids):
        for b in ids[i:]:
            want = e * (sq[a] if a == b else f.meet(a, b))
            got = _pair(p, pull[a], pull[b])
            if got != want:
                raise EngineError(f"projection formula fails for ({a},{b}): {got} != {want}")
    for a in ids:
        for cid in chain_ids:
            if _pair(p, pull[a], {cid: Fraction(1)}):
                raise EngineError(f"pullback of {a} is not orthogonal to chain curve {cid}")

    rsq = resolved.self_intersections
    rel = {c: c_ - 1 for c, c_ in ((c.id, c.multiplicity) for c in f.components)}
    for c in f.components:
        cv = covers[c.id]
        d_dot = sum(rel[x] * (sq[x] if x == c.id else f.meet(x, c.id)) for x in ids)
        want = cv.degree * (f.canonical_degree(c.id) - d_dot)
        for r in range(cv.count):
            got = resolved.canonical_degree(_copy_id(c.id, r, cv.count))
            if got != want:
                raise EngineError(
                    f"canonical degree on the lift of {c.id}: adjunction {got}, pullback formula {want}"
                )
    for cid in chain_ids:
        if resolved.canonical_degree(cid) != 0 or rsq[cid] != -2:
            raise EngineError(f"chain curve {cid} is not a (-2)-curve")

    predicted = sum(
        c.multiplicity * (2 - 2 * c.genus - len(nbr[c.id])) for c in f.components
    ) + sum(
        loc_pts * (1 + L)
        for loc_pts, L in (
            (gcd(f.by_id[ed.a].multiplicity, f.by_id[ed.b].multiplicity),
             e // lcm(f.by_id[ed.a].multiplicity, f.by_id[ed.b].multiplicity) - 1)
            for ed in f.edges
        )
    )
    if chi_top(resolved) != predicted:
        raise EngineError(f"Euler characteristic {chi_top(resolved)} != predicted {predicted}")


def _contract(g: FiberGraph, rng: random.Random | None) -> tuple[FiberGraph, tuple[str, ...]]:
    p = _sparse_pairing(g)
    genus = {c.id: c.genus for c in g.components}
    loops = {c.id: g.self_nodes(c.id) for c in g.components}

    def is_candidate(x: str) -> bool:
        return genus[x] == 0 and loops[x] == 0 and p[x][x] == -1

    contracted: list[str] = []
    while True:
        cands = [x for x in p if is_candidate(x)]
        if not cands:
            break
        x = rng.choice(cands) if rng is not None else cands[0]
        row = p.pop(x)
        others = [(y, v) for y, v in row.items() if y != x and v]
        if len(others) != 1 or others[0][1] != 1:
            raise EngineError(f"(-1)-curve {x} in a reduced fiber must meet the rest once, got {others}")
        for y, _ in others:
            del p[y][x]
        for y, vy in others:
            for z, vz in others:
                p[y][z] = p[y].get(z, 0) + vy * vz
        contracted.append(x)

    comps = tuple(c for c in g.components if c.id in p)
    edges = [ed for ed in g.edges if ed.is_loop and ed.a in p]
    order = [c.id for c in comps]
    for i, a in enumerate(order):
        for b in order[i + 1:]:
            edges.extend(Edge(a, b) for _ in range(p[a].get(b, 0)))
    out = FiberGraph(comps, tuple(edges), (), g.name)
    osq = out.self_intersections
    for c in order:
        if osq[c] != p[c][c]:
            raise EngineError(f"{c}: maintained square {p[c][c]} != fiber-relation square {osq[c]}")
    return out, tuple(contracted)


@dataclass(frozen=True)
class SemistableReduction:
    log: ResolutionLog
    pullback: PullbackResult

    @property
    def e(self) -> int:
        return self.pullback.e_used


def semistable_reduction(f: FiberGraph, order: int | None = None, rng: random.Random | None = None):
    """Resolve ``f``, choose the order (or validate ``order``), and pull back."""
    log = resolve(f)
    e = choose_e(log, order)
    return SemistableReduction(log, pullback_fiber(log.final_graph, e, rng))


__all__ = [
    "ComponentCover",
    "CoverWarning",
    "FractionalContractionWarning",
    "LocalNodeCover",
    "PullbackResult",
    "SemistableReduction",
    "choose_e",
    "component_cover",
    "local_model",
    "pullback_fiber",
    "semistable_reduction",
]

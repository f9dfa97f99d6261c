"""Weighted dual graphs of fibers and their elementary numerical data."""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple

from .errors import InconsistentConfiguration, InputError
from .lattice import IntersectionLattice
from .singularities import SingularityDescriptor


@dataclass(frozen=True)
class FiberComponent:
    id: str
    genus: int = 0
    multiplicity: int = 1
    # number of connected pieces over this component after base change; only
    # consulted for positive-genus multiple components
    cover_components: int | None = None

    def __post_init__(self):
        if not isinstance(self.id, str) or not self.id:
            raise InputError("component id must be a non-empty string")
        if int(self.genus) != self.genus or self.genus < 0:
            raise InputError(f"component {self.id}: genus must be an integer >= 0")
        if int(self.multiplicity) != self.multiplicity or self.multiplicity < 1:
            raise InputError(f"component {self.id}: multiplicity must be an integer >= 1")
        if self.cover_components is not None and self.cover_components < 1:
            raise InputError(f"component {self.id}: cover_components must be >= 1")


@dataclass(frozen=True)
class Edge:
    """A node of the fiber joining two local branches; a == b for a self-node."""

    a: str
    b: str
    twist: int = 0

    @property
    def is_loop(self) -> bool:
        return self.a == self.b


@dataclass(frozen=True)
class PointSingularity:
    id: str
    branches: tuple[str, ...]
    descriptor: SingularityDescriptor

    def __post_init__(self):
        if len(self.branches) != self.descriptor.n_branches:
            raise InputError(
                f"singularity {self.id}: {len(self.branches)} branch components given, "
                f"descriptor has {self.descriptor.n_branches} branches"
            )

    def branches_on(self, cid: str) -> list[int]:
        return [i for i, c in enumerate(self.branches) if c == cid]


@dataclass(frozen=True)
class FiberGraph:
    components: tuple[FiberComponent, ...]
    edges: tuple[Edge, ...] = ()
    point_singularities: tuple[PointSingularity, ...] = ()
    name: str = ""
    meta: tuple[tuple[str, str], ...] = field(default=(), compare=False)

    def __post_init__(self):
        ids = [c.id for c in self.components]
        if not ids:
            raise InputError("a fiber needs at least one component")
        if len(set(ids)) != len(ids):
            raise InputError("duplicate component ids")
        known = set(ids)
        for e in self.edges:
            for end in (e.a, e.b):
                if end not in known:
                    raise InputError(f"edge refers to unknown component {end!r}")
        ps_ids = [p.id for p in self.point_singularities]
        if len(set(ps_ids)) != len(ps_ids):
            raise InputError("duplicate singular point ids")
        for p in self.point_singularities:
            for c in p.branches:
                if c not in known:
                    raise InputError(f"singularity {p.id} refers to unknown component {c!r}")
        if not self._connected():
            raise InconsistentConfiguration("dual graph is not connected")
        self.self_intersections  # integrality check

    def _connected(self) -> bool:
        adj = defaultdict(set)
        for e in self.edges:
            adj[e.a].add(e.b)
            adj[e.b].add(e.a)
        for p in self.point_singularities:
            for x in p.branches:
                adj[x].update(p.branches)
        start = self.components[0].id
        seen, stack = {start}, [start]
        while stack:
            for y in adj[stack.pop()]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(self.components)

    @cached_property
    def by_id(self) -> dict[str, FiberComponent]:
        return {c.id: c for c in self.components}

    @property
    def ids(self) -> list[str]:
        return [c.id for c in self.components]

    def self_nodes(self, cid: str) -> int:
        return sum(1 for e in self.edges if e.a == cid and e.b == cid)

    @cached_property
    def intersections(self) -> dict[tuple[str, str], int]:
        """C_i.C_j for distinct components (both orders), counting local multiplicities."""
        out: Counter = Counter()
        for e in self.edges:
            if not e.is_loop:
                out[(e.a, e.b)] += 1
                out[(e.b, e.a)] += 1
        for p in self.point_singularities:
            d = p.descriptor
            for i in range(len(p.branches)):
                for j in range(i + 1, len(p.branches)):
                    x, y = p.branches[i], p.branches[j]
                    if x != y:
                        k = d.branch_intersection(i, j)
                        out[(x, y)] += k
                        out[(y, x)] += k
        return dict(out)

    def meet(self, a: str, b: str) -> int:
        return self.intersections.get((a, b), 0)

    @cached_property
    def self_intersections(self) -> dict[str, int]:
        return self_intersections(self)

    def component_pa(self, cid: str) -> int:
        """Arithmetic genus of a single component, with its own singular points."""
        c = self.by_id[cid]
        pa = c.genus + self.self_nodes(cid)
        for p in self.point_singularities:
            on = p.branches_on(cid)
            if on:
                pa += p.descriptor.delta(on)
        return pa

    def canonical_degree(self, cid: str) -> int:
        """K.C by adjunction."""
        return 2 * self.component_pa(cid) - 2 - self.self_intersections[cid]

    def lattice(self) -> IntersectionLattice:
        ids = self.ids
        sq = self.self_intersections
        rows = [[sq[a] if a == b else self.meet(a, b) for b in ids] for a in ids]
        return IntersectionLattice.from_matrix(ids, rows)

    @property
    def is_reduced(self) -> bool:
        return all(c.multiplicity == 1 for c in self.components)

    @property
    def is_snc(self) -> bool:
        return not self.point_singularities


def self_intersections(f: FiberGraph) -> dict[str, int]:
    """C_i^2 from C_i.F = 0.  Self-nodes do not enter: they are not intersections with other components."""
    touch: Counter = Counter()
    for (a, b), k in f.intersections.items():
        touch[a] += f.by_id[b].multiplicity * k
    out = {}
    for c in f.components:
        q = Fraction(-touch[c.id], c.multiplicity)
        if q.denominator != 1:
            raise InconsistentConfiguration(
                f"component {c.id}: self-intersection {q} is not an integer"
            )
        out[c.id] = int(q)
    return out


def pa_red(f: FiberGraph) -> int:
    """Arithmetic genus of the reduced fiber: sum g_i - #components + 1 + sum of delta invariants."""
    delta = len(f.edges) + sum(p.descriptor.delta() for p in f.point_singularities)
    return sum(c.genus for c in f.components) - len(f.components) + 1 + delta


def fred_square(f: FiberGraph) -> int:
    sq = f.self_intersections
    cross = sum(f.intersections.values())  # both orders, so already doubled
    return sum(sq.values()) + cross


def fiber_genus(f: FiberGraph) -> int:
    two_g_minus_2 = sum(c.multiplicity * f.canonical_degree(c.id) for c in f.components)
    if two_g_minus_2 % 2 or two_g_minus_2 < -2:
        raise InconsistentConfiguration(f"K.F = {two_g_minus_2} is not 2g - 2 for any genus g >= 0")
    return two_g_minus_2 // 2 + 1


def chi_top(f: FiberGraph) -> int:
    glued = len(f.edges) + sum(len(p.branches) - 1 for p in f.point_singularities)
    return sum(2 - 2 * c.genus for c in f.components) - glued


def euler_contribution(f: FiberGraph) -> int:
    """chi_top(F) - (2 - 2g)."""
    return chi_top(f) - (2 - 2 * fiber_genus(f))


SMOOTH = "smooth"
SEMISTABLE = "semistable-singular"
NON_SEMISTABLE = "non-semistable"


class Classification(NamedTuple):
    kind: str
    relatively_minimal: bool
    minus_one_curves: tuple[str, ...]

    @property
    def semistable(self) -> bool:
        return self.kind != NON_SEMISTABLE


def minus_one_curves(f: FiberGraph) -> tuple[str, ...]:
    sq = f.self_intersections
    return tuple(c.id for c in f.components if f.component_pa(c.id) == 0 and sq[c.id] == -1)


def classify(f: FiberGraph) -> Classification:
    bad = minus_one_curves(f)
    nodal = all(p.descriptor.kind == "node" for p in f.point_singularities)
    if not (f.is_reduced and nodal):
        kind = NON_SEMISTABLE
    elif len(f.components) == 1 and not f.edges and not f.point_singularities:
        kind = SMOOTH
    else:
        kind = SEMISTABLE
    return Classification(kind, not bad, bad)

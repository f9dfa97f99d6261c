"""Embedded resolution of the non-nodal points of a reduced fiber.

Blow-ups happen exactly at points of the successive reduced total transforms
that are not ordinary double points, depth first through each point's
proximity tree, points in input order.  The intersection lattice is carried
along in the basis of total transforms (original components, then E1, E2, ...).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import EngineError, InputError
from .fiber import Edge, FiberComponent, FiberGraph, pa_red, self_intersections
from .lattice import DivisorClass, IntersectionLattice, blow_up
from .singularities import ClusterPoint, SingularityDescriptor


@dataclass(frozen=True)
class ResolutionStep:
    point: str
    cluster_point: str
    label: str
    m: int  # multiplicity of the reduced total transform at the center
    m_bar: int  # multiplicity of the strict transform of the original reduced fiber
    exc_mult_in_total_B: int
    through_exceptionals: tuple[str, ...] = ()


@dataclass(frozen=True)
class ResolutionLog:
    source: FiberGraph
    steps: tuple[ResolutionStep, ...]
    final_graph: FiberGraph
    lattice: IntersectionLattice = field(compare=False)
    strict: tuple[tuple[str, DivisorClass], ...] = field(compare=False)

    @property
    def m_sequence(self) -> tuple[int, ...]:
        return tuple(s.m for s in self.steps)

    def steps_at(self, point: str) -> tuple[ResolutionStep, ...]:
        return tuple(s for s in self.steps if s.point == point)

    def exceptional_sum(self) -> DivisorClass:
        """Sum of total transforms of all exceptional curves; its square is minus the number of blow-ups."""
        total = self.lattice.zero()
        for s in self.steps:
            total = total + self.lattice.element(s.label)
        return total

    def fiber_class(self) -> DivisorClass:
        return self.lattice.divisor({c.id: c.multiplicity for c in self.source.components})


def _is_ordinary_double(desc: SingularityDescriptor, q: ClusterPoint, exc_through: list, branches: list[int]) -> bool:
    """m == 2 at q: two smooth local branches, decide transversality."""
    if not branches:
        return True  # two exceptional curves
    if len(branches) == 1:
        b = branches[0]
        if q.mults[b] != 1:
            return False  # a single singular branch
        nxt = desc.next_point(q, b)
        # tangent to the exceptional curve through q iff the branch's next point stays on it
        return nxt is None or q.parent not in desc.proximate_to(nxt)
    b1, b2 = branches
    n1, n2 = desc.next_point(q, b1), desc.next_point(q, b2)
    return n1 is None or n2 is None or n1.id != n2.id


def resolve(f: FiberGraph) -> ResolutionLog:
    lattice = f.lattice()
    strict: dict[str, DivisorClass] = {c.id: lattice.element(c.id) for c in f.components}
    exc_mult: dict[str, int] = {}
    steps: list[ResolutionStep] = []
    mult = {c.id: c.multiplicity for c in f.components}

    remaining = sum(sum(q.mults) for p in f.point_singularities for q in p.descriptor.points)
    loops: list[str] = []  # surviving double points of one component; the lattice cannot see them

    for ps in f.point_singularities:
        desc = ps.descriptor
        blown: dict[str, str] = {}
        for q in desc.dfs_order():
            if q.parent is not None and q.parent not in blown:
                raise InputError(
                    f"singularity {ps.id}: point {q.id} lies beyond the embedded resolution "
                    f"({q.parent} is not blown up)"
                )
            exc_through = [blown[x] for x in desc.proximate_to(q)]
            branches = [b for b in range(len(ps.branches)) if q.mults[b] > 0]
            m_bar = sum(q.mults)
            m = m_bar + len(exc_through)
            if m < 2 or (m == 2 and _is_ordinary_double(desc, q, exc_through, branches)):
                if desc.children[q.id]:
                    raise InputError(
                        f"singularity {ps.id}: point {q.id} is already resolved but has "
                        "infinitely near points listed after it"
                    )
                if len(branches) == 2 and ps.branches[branches[0]] == ps.branches[branches[1]]:
                    loops.append(ps.branches[branches[0]])
                continue

            through: dict[str, int] = {}
            for b in branches:
                through[ps.branches[b]] = through.get(ps.branches[b], 0) + q.mults[b]
            for lab in exc_through:
                through[lab] = through.get(lab, 0) + 1
            keys = list(through)
            label = f"E{lattice.tower_depth + 1}"
            bu = blow_up(lattice, [(strict[k], through[k]) for k in keys], label)
            lattice = bu.lattice
            strict = {k: bu.pullback(v) for k, v in strict.items()}
            for k, st in zip(keys, bu.strict_transforms):
                strict[k] = st
            strict[label] = bu.exceptional
            em = sum(mult[ps.branches[b]] * q.mults[b] for b in branches) + sum(exc_mult[x] for x in exc_through)
            exc_mult[label] = em
            mult[label] = em
            blown[q.id] = label
            steps.append(ResolutionStep(ps.id, q.id, label, m, m_bar, em, tuple(exc_through)))

            left = remaining - sum(q.mults)
            if not left < remaining:
                raise EngineError("termination measure did not decrease")
            remaining = left

    final = _final_graph(f, lattice, strict, exc_mult, loops)
    log = ResolutionLog(f, tuple(steps), final, lattice, tuple(strict.items()))
    _replay_check(log, strict)
    return log


def _final_graph(f, lattice, strict, exc_mult, loops) -> FiberGraph:
    comps = list(f.components) + [FiberComponent(lab, 0, m) for lab, m in exc_mult.items()]
    ids = [c.id for c in comps]
    edges: list[Edge] = [e for e in f.edges]  # original nodes survive with their twists
    edges.extend(Edge(c, c) for c in loops)
    have: dict[tuple[str, str], int] = {}
    for e in f.edges:
        if not e.is_loop:
            key = tuple(sorted((e.a, e.b)))
            have[key] = have.get(key, 0) + 1
    for i, a in enumerate(ids):
        for b in ids[i + 1:]:
            k = lattice.pair(strict[a], strict[b])
            if k < 0 or k.denominator != 1:
                raise EngineError(f"strict transforms {a}, {b} meet negatively ({k})")
            extra = int(k) - have.get(tuple(sorted((a, b))), 0)
            if extra < 0:
                raise EngineError(f"lost intersection points between {a} and {b}")
            edges.extend(Edge(a, b) for _ in range(extra))
    meta = tuple(f.meta)
    return FiberGraph(tuple(comps), tuple(edges), (), f.name, meta)


def _replay_check(log: ResolutionLog, strict: dict[str, DivisorClass]) -> None:
    lat = log.lattice
    sq = self_intersections(log.final_graph)
    for cid, cls in strict.items():
        if lat.pair(cls, cls) != sq[cid]:
            raise EngineError(
                f"{cid}: lattice square {lat.pair(cls, cls)} != fiber-relation square {sq[cid]}",
                {"component": cid},
            )
    fib = log.fiber_class()
    total = lat.zero()
    for c in log.final_graph.components:
        total = total + c.multiplicity * strict[c.id]
    if total != fib:
        raise EngineError("total transform of the fiber does not decompose along the final components")
    if lat.pair(fib, fib) != 0:
        raise EngineError("fiber class has nonzero square")


def alpha(log: ResolutionLog, point: str) -> int:
    if point not in {p.id for p in log.source.point_singularities}:
        raise InputError(f"unknown singular point {point!r}")
    return sum((s.m - 2) ** 2 for s in log.steps_at(point))


def alpha_total(log: ResolutionLog) -> int:
    return sum((s.m - 2) ** 2 for s in log.steps)


@dataclass(frozen=True)
class BoundEntry:
    name: str
    lhs: Fraction
    rhs: Fraction
    equality: bool
    ok: bool

    @property
    def margin(self) -> Fraction:
        return self.rhs - self.lhs


@dataclass(frozen=True)
class ResolutionBoundsReport:
    entries: tuple[BoundEntry, ...]
    alpha_sum: int
    pa_red: int
    equality_iff_ok: bool

    @property
    def ok(self) -> bool:
        return self.equality_iff_ok and all(e.ok for e in self.entries)


def check_resolution_bounds(log: ResolutionLog, f: FiberGraph | None = None) -> ResolutionBoundsReport:
    f = f or log.source
    entries = []
    for s in log.steps:
        lhs, rhs = Fraction(s.m - 2), Fraction(s.m_bar)
        entries.append(BoundEntry(f"m_bar>=m-2 at {s.label}", lhs, rhs, lhs == rhs, rhs >= lhs))
    a = alpha_total(log)
    p = pa_red(f)
    entries.append(BoundEntry("sum alpha <= 2 p_a(F_red)", Fraction(a), Fraction(2 * p), a == 2 * p, a <= 2 * p))
    return ResolutionBoundsReport(tuple(entries), a, p, (a == 2 * p) == (p == 0))

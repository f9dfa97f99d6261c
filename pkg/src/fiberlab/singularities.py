"""Local descriptors for the non-nodal singular points of a reduced fiber.

A descriptor is a proximity tree: the infinitely near points of the germ, each
with a parent (it lies on the parent's exceptional curve), optionally a second
point it is proximate to (a satellite point also lies on that earlier
exceptional curve), and the multiplicity of every local branch there.

Every branch passes through the root and through a single chain of points.
Where a branch with multiplicity 1 leaves the listed points, it continues
through a free point that no other branch shares.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

from .errors import InputError

KINDS = ("node", "cusp", "tacnode", "ordinary", "custom")


@dataclass(frozen=True)
class ClusterPoint:
    id: str
    parent: str | None
    mults: tuple[int, ...]
    satellite_of: str | None = None


@dataclass(frozen=True)
class SingularityDescriptor:
    kind: str
    points: tuple[ClusterPoint, ...]
    m: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown singularity kind {self.kind!r}")
        _validate_tree(self.points)

    @classmethod
    def builtin(cls, kind: str, m: int | None = None) -> "SingularityDescriptor":
        if kind == "node":
            pts = (ClusterPoint("q0", None, (1, 1)),)
        elif kind == "cusp":
            pts = (
                ClusterPoint("q0", None, (2,)),
                ClusterPoint("q1", "q0", (1,)),
                ClusterPoint("q2", "q1", (1,), satellite_of="q0"),
            )
        elif kind == "tacnode":
            pts = (ClusterPoint("q0", None, (1, 1)), ClusterPoint("q1", "q0", (1, 1)))
        elif kind == "ordinary":
            if m is None or m < 3:
                raise InputError("ordinary m-fold point needs m >= 3")
            pts = (ClusterPoint("q0", None, (1,) * m),)
        else:
            raise InputError(f"{kind!r} is not a built-in kind")
        return cls(kind, pts, m if kind == "ordinary" else None)

    @property
    def n_branches(self) -> int:
        return len(self.points[0].mults)

    @cached_property
    def by_id(self) -> dict[str, ClusterPoint]:
        return {p.id: p for p in self.points}

    @cached_property
    def children(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {p.id: [] for p in self.points}
        for p in self.points:
            if p.parent is not None:
                out[p.parent].append(p.id)
        return out

    @property
    def root(self) -> ClusterPoint:
        return self.points[0]

    def proximate_to(self, q: ClusterPoint) -> tuple[str, ...]:
        return tuple(x for x in (q.parent, q.satellite_of) if x is not None)

    def dfs_order(self) -> list[ClusterPoint]:
        out, stack = [], [self.root.id]
        while stack:
            pid = stack.pop()
            out.append(self.by_id[pid])
            stack.extend(reversed(self.children[pid]))
        return out

    def next_point(self, q: ClusterPoint, branch: int) -> ClusterPoint | None:
        for cid in self.children[q.id]:
            c = self.by_id[cid]
            if c.mults[branch] > 0:
                return c
        return None

    def branch_intersection(self, b1: int, b2: int) -> int:
        # Noether's formula over shared infinitely near points
        return sum(p.mults[b1] * p.mults[b2] for p in self.points)

    def branch_delta(self, b: int) -> int:
        return sum(p.mults[b] * (p.mults[b] - 1) // 2 for p in self.points)

    def delta(self, branches: list[int] | None = None) -> int:
        """delta invariant of the sub-germ formed by the given branches (default: all)."""
        bs = list(range(self.n_branches)) if branches is None else branches
        return sum(self.branch_delta(b) for b in bs) + sum(
            self.branch_intersection(x, y) for x, y in combinations(bs, 2)
        )


def _validate_tree(points: tuple[ClusterPoint, ...]) -> None:
    if not points:
        raise InputError("proximity tree is empty")
    root = points[0]
    if root.parent is not None or root.satellite_of is not None:
        raise InputError("first point of a proximity tree must be the root")
    nb = len(root.mults)
    if nb < 1:
        raise InputError("a singular point needs at least one branch")
    seen: dict[str, ClusterPoint] = {}
    sat_taken: set[tuple[str, str]] = set()
    for p in points:
        if p.id in seen:
            raise InputError(f"duplicate proximity tree point {p.id!r}")
        if len(p.mults) != nb:
            raise InputError(f"point {p.id}: expected {nb} branch multiplicities")
        if any(int(m) != m or m < 0 for m in p.mults):
            raise InputError(f"point {p.id}: multiplicities must be nonnegative integers")
        if p is not root:
            if p.parent is None:
                raise InputError(f"point {p.id}: only the root may lack a parent")
            if p.parent not in seen:
                raise InputError(f"point {p.id}: parent {p.parent!r} must be listed before it")
            if p.satellite_of is not None:
                par = seen[p.parent]
                if p.satellite_of not in (par.parent, par.satellite_of):
                    raise InputError(
                        f"point {p.id}: cannot be satellite of {p.satellite_of!r}; "
                        f"its parent {p.parent} does not lie on that exceptional curve"
                    )
                key = (p.parent, p.satellite_of)
                if key in sat_taken:
                    raise InputError(f"two points of {p.parent} claim the same satellite position")
                sat_taken.add(key)
            if not any(p.mults):
                raise InputError(f"point {p.id} carries no branch")
        seen[p.id] = p

    for b in range(nb):
        if root.mults[b] < 1:
            raise InputError(f"branch {b} does not pass through the root")
        for p in points:
            if p.mults[b] == 0:
                continue
            on_b = [c for c in points if c.parent == p.id and c.mults[b] > 0]
            if len(on_b) > 1:
                raise InputError(f"branch {b} passes through two points next to {p.id}")
            if p.parent is not None and seen[p.parent].mults[b] == 0:
                raise InputError(f"branch {b} reaches {p.id} without passing its parent")
            prox_sum = sum(
                c.mults[b] for c in points if c.mults[b] and p.id in (c.parent, c.satellite_of)
            )
            if on_b:
                if prox_sum != p.mults[b]:
                    raise InputError(
                        f"branch {b}: multiplicity {p.mults[b]} at {p.id} differs from the sum "
                        f"{prox_sum} over points proximate to it"
                    )
            elif p.mults[b] != 1 or prox_sum != 0:
                raise InputError(
                    f"branch {b} ends at {p.id} with multiplicity {p.mults[b]}; "
                    "list its further infinitely near points"
                )

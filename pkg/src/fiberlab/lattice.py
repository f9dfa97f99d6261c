"""Exact intersection calculus on divisor classes through towers of blow-ups.

Pairings are integers; class coefficients are ``Fraction`` so that rational
canonical divisors fit in the same type.  Everything here is immutable.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence

from .errors import InconsistentConfiguration, InputError


@dataclass(frozen=True)
class DivisorClass:
    coefficients: tuple[Fraction, ...]

    @classmethod
    def of(cls, values: Iterable) -> "DivisorClass":
        return cls(tuple(Fraction(v) for v in values))

    def __len__(self):
        return len(self.coefficients)

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        _same_length(self, other)
        return DivisorClass(tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        _same_length(self, other)
        return DivisorClass(tuple(a - b for a, b in zip(self.coefficients, other.coefficients)))

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(tuple(-a for a in self.coefficients))

    def __mul__(self, k) -> "DivisorClass":
        k = Fraction(k)
        return DivisorClass(tuple(k * a for a in self.coefficients))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coefficients)

    def extended(self, extra: int = 1) -> "DivisorClass":
        return DivisorClass(self.coefficients + (Fraction(0),) * extra)


def _same_length(a: DivisorClass, b: DivisorClass) -> None:
    if len(a) != len(b):
        raise InputError(f"class dimension mismatch: {len(a)} vs {len(b)}")


@dataclass(frozen=True)
class IntersectionLattice:
    """Free lattice on ``basis`` with a symmetric integer pairing."""

    basis: tuple[str, ...]
    pairing: tuple[tuple[int, ...], ...]
    tower_depth: int = 0

    def __post_init__(self):
        n = len(self.basis)
        if len(set(self.basis)) != n:
            raise InputError("duplicate basis labels")
        if len(self.pairing) != n or any(len(row) != n for row in self.pairing):
            raise InputError("pairing matrix must be square and match the basis")
        for i in range(n):
            for j in range(i):
                if self.pairing[i][j] != self.pairing[j][i]:
                    raise InputError(f"pairing not symmetric at ({self.basis[i]}, {self.basis[j]})")

    @classmethod
    def from_matrix(cls, basis: Sequence[str], matrix: Sequence[Sequence[int]], tower_depth: int = 0):
        return cls(tuple(basis), tuple(tuple(int(x) for x in row) for row in matrix), tower_depth)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def index(self, label: str) -> int:
        try:
            return self.basis.index(label)
        except ValueError:
            raise InputError(f"unknown basis label {label!r}") from None

    def element(self, label: str) -> DivisorClass:
        i = self.index(label)
        return DivisorClass(tuple(Fraction(int(j == i)) for j in range(self.rank)))

    def divisor(self, coefficients: Mapping[str, object]) -> DivisorClass:
        values = [Fraction(0)] * self.rank
        for label, c in coefficients.items():
            values[self.index(label)] += Fraction(c)
        return DivisorClass(tuple(values))

    def zero(self) -> DivisorClass:
        return DivisorClass((Fraction(0),) * self.rank)

    def as_dict(self, d: DivisorClass) -> dict[str, Fraction]:
        self._check(d)
        return {b: c for b, c in zip(self.basis, d.coefficients) if c}

    def _check(self, d: DivisorClass) -> None:
        if len(d) != self.rank:
            raise InputError(f"class has {len(d)} coefficients, lattice has rank {self.rank}")

    def pair(self, a: DivisorClass, b: DivisorClass) -> Fraction:
        return pair(self, a, b)

    def gram(self, classes: Sequence[DivisorClass]) -> list[list[Fraction]]:
        return [[pair(self, a, b) for b in classes] for a in classes]


def pair(lattice: IntersectionLattice, a: DivisorClass, b: DivisorClass) -> Fraction:
    lattice._check(a)
    lattice._check(b)
    total = Fraction(0)
    for i, ai in enumerate(a.coefficients):
        if not ai:
            continue
        row = lattice.pairing[i]
        for j, bj in enumerate(b.coefficients):
            if bj and row[j]:
                total += ai * row[j] * bj
    return total


class BlowUp(NamedTuple):
    lattice: IntersectionLattice
    pullback: Callable[[DivisorClass], DivisorClass]
    exceptional: DivisorClass
    strict_transforms: tuple[DivisorClass, ...]


def blow_up(
    lattice: IntersectionLattice,
    classes_through_center: Sequence[tuple[DivisorClass, int]],
    label: str | None = None,
) -> BlowUp:
    """Blow up a point through which the given classes pass with the given multiplicities.

    The basis of the result consists of the total transforms of the old basis
    plus the new exceptional class, so pullback is coordinate padding and the
    old Gram block is unchanged.
    """
    for d, m in classes_through_center:
        lattice._check(d)
        if int(m) != m or m < 0:
            raise InputError(f"multiplicity at a blow-up center must be a nonnegative integer, got {m}")
    depth = lattice.tower_depth + 1
    label = label or f"E{depth}"
    if label in lattice.basis:
        raise InputError(f"label {label!r} already in the lattice")
    n = lattice.rank
    rows = [row + (0,) for row in lattice.pairing]
    rows.append((0,) * n + (-1,))
    new = IntersectionLattice(lattice.basis + (label,), tuple(rows), depth)

    def pullback(d: DivisorClass) -> DivisorClass:
        lattice._check(d)
        return d.extended()

    e = new.element(label)
    strict = tuple(pullback(d) - int(m) * e for d, m in classes_through_center)
    return BlowUp(new, pullback, e, strict)


def contract(lattice: IntersectionLattice, label: str) -> IntersectionLattice:
    """Blow down the (-1)-curve ``label``; remaining basis elements map to their images.

    Images pair as D.D' + (D.E)(D'.E).
    """
    k = lattice.index(label)
    if lattice.pairing[k][k] != -1:
        raise InconsistentConfiguration(f"{label} has self-intersection {lattice.pairing[k][k]}, not -1")
    keep = [i for i in range(lattice.rank) if i != k]
    rows = tuple(
        tuple(lattice.pairing[i][j] + lattice.pairing[i][k] * lattice.pairing[j][k] for j in keep)
        for i in keep
    )
    return IntersectionLattice(tuple(lattice.basis[i] for i in keep), rows, lattice.tower_depth)


@dataclass(frozen=True)
class ExceptionalConfig:
    """Exceptional curves of a resolution, as classes in an ambient lattice."""

    lattice: IntersectionLattice
    curves: tuple[tuple[str, int, DivisorClass], ...]

    @classmethod
    def from_basis(cls, lattice: IntersectionLattice, genera: Mapping[str, int]):
        return cls(lattice, tuple((lab, int(g), lattice.element(lab)) for lab, g in genera.items()))

    def matrix(self) -> list[list[Fraction]]:
        return self.lattice.gram([c for _, _, c in self.curves])

    def is_negative_definite(self) -> bool:
        if not self.curves:
            return True
        return _positive_definite([[-x for x in row] for row in self.matrix()])


def _positive_definite(m: list[list[Fraction]]) -> bool:
    # symmetric Gaussian elimination: all pivots > 0 iff positive definite
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    for k in range(n):
        piv = a[k][k]
        if piv <= 0:
            return False
        for i in range(k + 1, n):
            if a[i][k]:
                f = a[i][k] / piv
                for j in range(k + 1, n):
                    if a[k][j]:
                        a[i][j] -= f * a[k][j]
    return True


def _solve(m: list[list[Fraction]], rhs: Sequence) -> list[Fraction]:
    """Exact solve of a nonsingular square system by elimination with pivot search."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(r)] for row, r in zip(m, rhs)]
    for k in range(n):
        p = next((i for i in range(k, n) if a[i][k]), None)
        if p is None:
            raise InconsistentConfiguration("singular intersection matrix")
        a[k], a[p] = a[p], a[k]
        for i in range(k + 1, n):
            if a[i][k]:
                f = a[i][k] / a[k][k]
                for j in range(k, n + 1):
                    if a[k][j]:
                        a[i][j] -= f * a[k][j]
    x = [Fraction(0)] * n
    for k in reversed(range(n)):
        x[k] = (a[k][n] - sum(a[k][j] * x[j] for j in range(k + 1, n))) / a[k][k]
    return x


def rational_canonical(config: ExceptionalConfig) -> DivisorClass:
    """Solve K.G_i + G_i^2 = 2 p_a(G_i) - 2 for K supported on the curves G_i."""
    if not config.curves:
        return config.lattice.zero()
    if not config.is_negative_definite():
        raise InconsistentConfiguration("exceptional configuration is not negative definite")
    m = config.matrix()
    alpha = _solve(m, [2 * g - 2 - m[i][i] for i, (_, g, _) in enumerate(config.curves)])
    k = config.lattice.zero()
    for a, (_, _, c) in zip(alpha, config.curves):
        k = k + a * c
    return k


def rational_canonical_coefficients(config: ExceptionalConfig) -> dict[str, Fraction]:
    """Coefficients of the rational canonical divisor on each exceptional curve."""
    k = rational_canonical(config)
    classes = [c for _, _, c in config.curves]
    # classes are independent (negative definite), so recover coefficients by pairing
    if not classes:
        return {}
    sol = _solve(config.matrix(), [config.lattice.pair(k, c) for c in classes])
    return dict(zip((lab for lab, _, _ in config.curves), sol))

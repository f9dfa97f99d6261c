"""Heights of algebraic points, Miyaoka m-values, and inequality verdicts."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import InconsistentConfiguration, InputError, UnsupportedInput
from .invariants import FibrationSummary

SATISFIED_STRICT = "satisfied-strict"
SATISFIED_EQUALITY = "satisfied-equality"
VIOLATED = "violated"


@dataclass(frozen=True)
class AlgebraicPoint:
    degree: int
    k_dot_e: Fraction
    genus_tilde: int
    e_self: Fraction | None = None
    name: str = ""

    def __post_init__(self):
        if int(self.degree) != self.degree or self.degree < 1:
            raise InputError(f"point degree must be a positive integer, got {self.degree}")
        if int(self.genus_tilde) != self.genus_tilde or self.genus_tilde < 0:
            raise InputError(f"genus_tilde must be a nonnegative integer, got {self.genus_tilde}")
        object.__setattr__(self, "k_dot_e", Fraction(self.k_dot_e))
        if self.e_self is not None:
            object.__setattr__(self, "e_self", Fraction(self.e_self))
            if self.degree != 1:
                raise InputError("E^2 (e_self) is only meaningful for sections, which have degree 1")

    @property
    def is_section(self) -> bool:
        return self.degree == 1


def point_invariants(p: AlgebraicPoint) -> tuple[Fraction, Fraction]:
    """(h_K, d) with h_K = K.E_P / deg and d = (2 g(E~_P) - 2) / deg."""
    h = p.k_dot_e / p.degree
    d = Fraction(2 * p.genus_tilde - 2, p.degree)
    if p.e_self is not None and h != -p.e_self:
        raise InconsistentConfiguration(f"section with E^2 = {p.e_self} must have h_K = {-p.e_self}, got {h}")
    return h, d


@dataclass(frozen=True)
class Verdict:
    name: str
    lhs: Fraction
    rhs: Fraction
    strict: bool = False
    inconsistency: str | None = None

    @property
    def margin(self) -> Fraction:
        """Slack rhs - lhs; negative means violated."""
        return self.rhs - self.lhs

    @property
    def status(self) -> str:
        m = self.margin
        if m < 0 or (m == 0 and self.strict):
            return VIOLATED
        return SATISFIED_EQUALITY if m == 0 else SATISFIED_STRICT

    @property
    def ok(self) -> bool:
        return self.status != VIOLATED and self.inconsistency is None

    def describe(self) -> str:
        rel = "<" if self.strict else "<="
        return (
            f"{self.name}: {self.lhs} {rel} {self.rhs}  [{self.status}, margin {self.margin} "
            f"~ {float(self.margin):.6g}]" + (f"  INCONSISTENT: {self.inconsistency}" if self.inconsistency else "")
        )


def _require_theorem_setting(fs: FibrationSummary) -> None:
    if fs.g < 2:
        raise UnsupportedInput(f"the height and canonical-class inequalities need g >= 2, got g = {fs.g}")


def check_theorem_A(fs: FibrationSummary, p: AlgebraicPoint) -> Verdict:
    _require_theorem_setting(fs)
    if not fs.nontrivial:
        raise UnsupportedInput("the height inequality is stated for non-trivial fibrations")
    h, d = point_invariants(p)
    if p.is_section and p.genus_tilde != fs.b:
        raise InconsistentConfiguration(
            f"a section is isomorphic to the base, so genus_tilde must be b = {fs.b}, got {p.genus_tilde}"
        )
    if fs.semistable:
        rhs = (2 * fs.g - 1) * (d + fs.s) - fs.ksq
        v = Verdict("h_K(P) <= (2g-1)(d(P)+s) - K^2", h, rhs)
        if v.margin == 0 and fs.s > 0:
            v = Verdict(v.name, h, rhs, inconsistency="equality holds although the fibration has singular fibers")
        return v
    rhs = (2 * fs.g - 1) * (d + 3 * fs.s) - fs.ksq
    return Verdict("h_K(P) < (2g-1)(d(P)+3s) - K^2", h, rhs, strict=True)


def check_canonical_class(fs: FibrationSummary) -> Verdict:
    _require_theorem_setting(fs)
    if fs.semistable:
        rhs = Fraction((2 * fs.g - 2) * (2 * fs.b - 2 + fs.s))
        v = Verdict("K^2 <= (2g-2)(2b-2+s)", fs.ksq, rhs)
        if v.margin == 0 and fs.s > 0:
            v = Verdict(v.name, fs.ksq, rhs, inconsistency="equality holds although the fibration has singular fibers")
        return v
    rhs = Fraction((2 * fs.g - 2) * (2 * fs.b - 2 + 3 * fs.s))
    return Verdict("K^2 < (2g-2)(2b-2+3s)", fs.ksq, rhs, strict=True)


_E_VALUES = {6: Fraction(21) - Fraction(1, 8), 7: Fraction(24) - Fraction(1, 16), 8: Fraction(27) - Fraction(1, 40)}


def miyaoka_m(kind: str, r: int) -> Fraction:
    if int(r) != r:
        raise InputError(f"rank must be an integer, got {r}")
    r = int(r)
    if kind == "A":
        if r < 0:
            raise InputError("A_r needs r >= 0")
        return 3 * Fraction(r + 1) - Fraction(3, r + 1)  # vanishes at r = 0
    if kind == "D":
        if r < 4:
            raise InputError("D_r needs r >= 4")
        return 3 * Fraction(r + 1) - Fraction(3, 4 * (r - 2))
    if kind == "E":
        if r not in _E_VALUES:
            raise InputError("E_r needs r in {6, 7, 8}")
        return _E_VALUES[r]
    raise InputError(f"unknown ADE kind {kind!r}")


def epsilon_q(mu: int, mu1: int, mu2: int) -> Fraction:
    if min(mu, mu1, mu2) < 0:
        raise InputError("Milnor numbers are nonnegative")
    if mu != mu1 + mu2 + 1:
        raise InputError(f"need mu = mu1 + mu2 + 1, got {mu} vs {mu1} + {mu2} + 1")
    closed = Fraction(3, mu1 + 1) + Fraction(3, mu2 + 1) - Fraction(3, mu + 1)
    via_m = miyaoka_m("A", mu) - miyaoka_m("A", mu1) - miyaoka_m("A", mu2)
    if closed != via_m:
        raise ArithmeticError(f"epsilon mismatch at {(mu, mu1, mu2)}: {closed} vs {via_m}")
    return closed


def miyaoka_check(
    c2_S, ksq_plus_D, ade_list: Iterable[tuple[str, int]], chi_top_D: int, extra=0, name: str = ""
) -> Verdict:
    """sum m(E_i) + 3 chi_top(D) <= 3 c2(S) - (K_S + D)^2 (+ extra)."""
    lhs = sum((miyaoka_m(k, r) for k, r in ade_list), Fraction(0)) + 3 * int(chi_top_D)
    rhs = 3 * Fraction(c2_S) - Fraction(ksq_plus_D) + Fraction(extra)
    return Verdict(name or "sum m(E_i) + 3 chi_top(D) <= 3 c2(S) - (K_S+D)^2", lhs, rhs)


@dataclass(frozen=True)
class SectionLocalData:
    mu_list: tuple[int, ...]  # Milnor numbers of all singular points of the stable model
    epsilon_terms: tuple[tuple[int, int, int], ...] = ()

    def __post_init__(self):
        if any(int(m) != m or m < 0 for m in self.mu_list):
            raise InputError("Milnor numbers must be nonnegative integers")
        for t in self.epsilon_terms:
            if len(t) != 3 or t[0] != t[1] + t[2] + 1 or min(t) < 0:
                raise InputError(f"epsilon term {t} violates mu = mu' + mu'' + 1")

    @property
    def epsilon(self) -> Fraction:
        return sum((epsilon_q(*t) for t in self.epsilon_terms), Fraction(0))


def _require_bound_setting(fs: FibrationSummary) -> None:
    if not fs.semistable:
        raise UnsupportedInput("the section bounds are derived for semistable fibrations")
    if fs.b < 1:
        raise UnsupportedInput("the section bounds need b >= 1 (K_S nef)")


def bound_7(fs: FibrationSummary, sd: SectionLocalData) -> Fraction:
    """sum 3/(mu_q+1) + (2g-1)(2b-2) - K^2 + epsilon."""
    _require_bound_setting(fs)
    return (
        sum((Fraction(3, m + 1) for m in sd.mu_list), Fraction(0))
        + (2 * fs.g - 1) * (2 * fs.b - 2)
        - fs.ksq
        + sd.epsilon
    )


def bound_6(fs: FibrationSummary, p: AlgebraicPoint, sd: SectionLocalData) -> Verdict:
    """Miyaoka's inequality for D = E_P (a section) and the A_mu configurations.

    c2(S) = e_f + 4(g-1)(b-1), (K_S + E)^2 = K^2 + 8(g-1)(b-1) + h_K + 4b - 4,
    chi_top(E) = 2 - 2b.  When e_f = sum(mu_q + 1) its margin is bound_7 - h_K.
    """
    _require_bound_setting(fs)
    if not p.is_section:
        raise UnsupportedInput("bound (6) is stated for sections")
    h, _ = point_invariants(p)
    gb = (fs.g - 1) * (fs.b - 1)
    return miyaoka_check(
        fs.e_f + 4 * gb,
        fs.ksq + 8 * gb + h + 4 * fs.b - 4,
        [("A", m) for m in sd.mu_list],
        2 - 2 * fs.b,
        extra=sd.epsilon,
        name="sum m(E_q) + 3 chi_top(E) <= 3 c2(S) - (K_S+E)^2 + eps",
    )


def check_bound_7(fs: FibrationSummary, p: AlgebraicPoint, sd: SectionLocalData) -> Verdict:
    h, _ = point_invariants(p)
    return Verdict("h_K(P) <= sum 3/(mu_q+1) + (2g-1)(2b-2) - K^2 + eps", h, bound_7(fs, sd))


def validate_fibration(fs: FibrationSummary) -> list[str]:
    out = []
    if fs.b == 0 and fs.nontrivial and fs.s < 2:
        out.append(f"non-trivial fibration over P^1 must have s >= 2, got s = {fs.s}")
    if fs.b == 0 and fs.semistable and fs.nontrivial and fs.s < 5:
        out.append(f"non-trivial semistable fibration over P^1 must have s >= 5, got s = {fs.s}")
    if fs.noether_defect:
        out.append(f"relative Noether fails: 12 chi_f - K^2 - e_f = {fs.noether_defect}")
    return out

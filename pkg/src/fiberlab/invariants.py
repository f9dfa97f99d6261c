"""Per-fiber defects c1^2, c2, chi and the global invariants built from them."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
import warnings

from .basechange import CoverWarning, SemistableReduction, choose_e, semistable_reduction
from .errors import EngineError, InconsistentConfiguration, InputError, UnsupportedInput
from .fiber import (
    FiberGraph,
    chi_top,
    classify,
    euler_contribution,
    fiber_genus,
    fred_square,
    pa_red,
)
from .resolution import alpha_total, resolve


@dataclass(frozen=True)
class FiberInvariants:
    c1_sq: Fraction
    c2: Fraction
    chi: Fraction
    c_minus_1: Fraction
    alpha_total: int
    e_used: int
    # provenance
    c1_closed: Fraction
    c1_simulated: Fraction
    genus: int
    pa_red: int
    fred_sq: int
    euler_before: int
    euler_after: int
    contracted: int
    blowups: int
    ksq_ledger: Fraction  # per unit degree K^2 change on the SNC model, contraction included
    cover_defaulted: bool = False

    @property
    def ksq_total(self) -> Fraction:
        """Per unit degree change of K^2 from the original surface, blow-ups included."""
        return self.ksq_ledger - self.blowups


def fiber_invariants(f: FiberGraph, e: int | None = None) -> FiberInvariants:
    """Compute c1^2 by the closed formula and by the K^2 ledger of the simulated reduction.

    Raises ``EngineError`` if the two routes disagree.
    """
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        red = semistable_reduction(f, e)
    for w in caught:
        warnings.warn_explicit(w.message, w.category, w.filename, w.lineno)
    defaulted = any(issubclass(w.category, CoverWarning) for w in caught)
    return from_reduction(f, red, defaulted)


def from_reduction(f: FiberGraph, red: SemistableReduction, defaulted: bool) -> FiberInvariants:
    log, pb = red.log, red.pullback
    g = fiber_genus(f)
    p = pa_red(f)
    fsq = fred_square(f)
    a = alpha_total(log)
    c_m1 = pb.c_minus_1
    c1_closed = 4 * (g - p) + fsq + a - c_m1
    r = len(log.steps)
    c1_sim = -(pb.ksq_ledger - r)
    if c1_closed != c1_sim:
        raise EngineError(
            f"c1^2 routes disagree on {f.name or 'fiber'}: closed formula {c1_closed}, simulation {c1_sim}",
            {"g": g, "pa_red": p, "fred_sq": fsq, "alpha": a, "c_minus_1": str(c_m1),
             "ksq_ledger": str(pb.ksq_ledger), "blowups": r, "e": pb.e_used},
        )
    eps = euler_contribution(f)
    eps_after = chi_top(pb.fiber) - (2 - 2 * g)
    c2 = eps - Fraction(eps_after, pb.e_used)
    chi = (c1_closed + c2) / 12
    out = FiberInvariants(
        c1_sq=c1_closed, c2=c2, chi=chi, c_minus_1=c_m1, alpha_total=a, e_used=pb.e_used,
        c1_closed=c1_closed, c1_simulated=c1_sim, genus=g, pa_red=p, fred_sq=fsq,
        euler_before=eps, euler_after=eps_after, contracted=pb.contracted_per_point,
        blowups=r, ksq_ledger=pb.ksq_ledger, cover_defaulted=defaulted,
    )
    vanish = out.c1_sq == 0 and out.c2 == 0 and out.chi == 0
    if vanish != is_multiple_of_semistable(f):
        raise EngineError(
            f"{f.name or 'fiber'}: (c1^2, c2, chi) = ({out.c1_sq}, {out.c2}, {out.chi}) "
            f"but semistable = {classify(f).semistable}"
        )
    return out


def is_multiple_of_semistable(f: FiberGraph) -> bool:
    """F = m F' with F' reduced and nodal; m = 1 is the semistable case."""
    m = {c.multiplicity for c in f.components}
    return len(m) == 1 and all(p.descriptor.kind == "node" for p in f.point_singularities)


@dataclass(frozen=True)
class FiberEntry:
    count: int
    fiber: FiberGraph


@dataclass(frozen=True)
class FibrationSummary:
    g: int
    b: int
    s: int
    ksq: Fraction
    chi: Fraction
    e_f: Fraction
    fibers: tuple[FiberEntry, ...] = ()
    semistable: bool = True
    nontrivial: bool = True
    name: str = ""

    def __post_init__(self):
        for attr in ("g", "b", "s"):
            v = getattr(self, attr)
            if int(v) != v or v < 0:
                raise InputError(f"{attr} must be a nonnegative integer, got {v}")
        if self.g < 1:
            raise UnsupportedInput(f"fiber genus {self.g} < 1 is outside the engine's scope")
        for attr in ("ksq", "chi", "e_f"):
            object.__setattr__(self, attr, Fraction(getattr(self, attr)))
        if self.fibers:
            listed = sum(x.count for x in self.fibers)
            if listed != self.s:
                raise InconsistentConfiguration(f"s = {self.s} but {listed} singular fibers are listed")
            for x in self.fibers:
                if x.count < 1:
                    raise InputError("fiber counts must be positive")
                if fiber_genus(x.fiber) != self.g:
                    raise InconsistentConfiguration(
                        f"fiber {x.fiber.name or '?'} has genus {fiber_genus(x.fiber)}, summary says g = {self.g}"
                    )
                kind = classify(x.fiber).kind
                if kind == "smooth":
                    raise InconsistentConfiguration(f"fiber {x.fiber.name or '?'} listed as singular is smooth")
            if all(classify(x.fiber).semistable for x in self.fibers) != self.semistable:
                raise InconsistentConfiguration("semistable flag disagrees with the listed fibers")

    @property
    def noether_defect(self) -> Fraction:
        return 12 * self.chi - self.ksq - self.e_f


@dataclass(frozen=True)
class GlobalInvariants:
    I_K: Fraction
    I_chi: Fraction
    I_e: Fraction
    per_fiber: tuple[tuple[int, FiberInvariants], ...] = field(repr=False, default=())

    @property
    def values(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.I_K, self.I_chi, self.I_e)

    @property
    def nonnegative(self) -> bool:
        return all(v >= 0 for v in self.values)

    @property
    def isotrivial_indicated(self) -> bool:
        """I_K or I_chi vanishes, which characterizes isotrivial fibrations."""
        return self.I_K == 0 or self.I_chi == 0


def global_invariants(fs: FibrationSummary) -> GlobalInvariants:
    if fs.noether_defect:
        raise InconsistentConfiguration(f"12 chi_f - K^2 - e_f = {fs.noether_defect}, not 0")
    if not fs.fibers and not fs.semistable:
        raise UnsupportedInput("non-semistable summary without its singular fibers")
    per = tuple((x.count, fiber_invariants(x.fiber)) for x in fs.fibers)
    return GlobalInvariants(
        fs.ksq - sum(n * v.c1_sq for n, v in per),
        fs.chi - sum(n * v.chi for n, v in per),
        fs.e_f - sum(n * v.c2 for n, v in per),
        per,
    )


@dataclass(frozen=True)
class BoundCheck:
    name: str
    lhs: Fraction
    rhs: Fraction
    applicable: bool = True

    @property
    def margin(self) -> Fraction:
        return self.rhs - self.lhs

    @property
    def ok(self) -> bool:
        return not self.applicable or self.margin >= 0

    @property
    def equality(self) -> bool:
        return self.applicable and self.margin == 0


@dataclass(frozen=True)
class Lemma16Report:
    invariants: FiberInvariants
    checks: tuple[BoundCheck, ...]

    @property
    def in_scope(self) -> bool:
        return self.invariants.genus >= 2

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)


def check_lemma_1_6(f: FiberGraph, inv: FiberInvariants | None = None) -> Lemma16Report:
    """c1^2 + c_-1 <= 4g - 3, and <= 4g - 4 when p_a(F_red) > 0.

    Both bounds need g >= 2.  For elliptic fibers the margins are still
    reported, marked not applicable: the star fibers (I0*, IV*, ...) have
    c1^2 + c_-1 = 2 > 4g - 3.
    """
    inv = inv or fiber_invariants(f)
    lhs = inv.c1_sq + inv.c_minus_1
    g = inv.genus
    checks = (
        BoundCheck("c1^2 + c_-1 <= 4g - 3", lhs, Fraction(4 * g - 3), g >= 2),
        BoundCheck("c1^2 + c_-1 <= 4g - 4", lhs, Fraction(4 * g - 4), inv.pa_red > 0 and g >= 2),
    )
    return Lemma16Report(inv, checks)


@dataclass(frozen=True)
class Lemma15Report:
    d: int
    before: tuple[Fraction, Fraction, Fraction]
    after: tuple[Fraction, Fraction, Fraction]
    ksq_tilde: Fraction
    e_tilde: Fraction
    chi_tilde: Fraction
    s_tilde: int
    profile: tuple[tuple[str, int], ...]
    skipped: tuple[str, ...] = ()

    @property
    def complete(self) -> bool:
        return not self.skipped

    @property
    def ok(self) -> bool:
        return self.complete and all(a == self.d * b for a, b in zip(self.after, self.before))


def check_lemma_1_5(fs: FibrationSummary, d: int, e_profile: dict[str, int] | None = None) -> Lemma15Report:
    """Simulate a degree-d base change ramified to order e_F over each critical value.

    Over f(F) there are d / e_F preimages, each carrying the locally simulated
    semistable fiber; the pulled-back fibration is semistable, so its global
    invariants are its relative invariants.
    """
    if int(d) != d or d < 1:
        raise InputError(f"degree must be a positive integer, got {d}")
    gi = global_invariants(fs)
    e_profile = dict(e_profile or {})
    ksq_t = Fraction(d) * fs.ksq
    e_t = Fraction(0)
    s_t = 0
    skipped, prof = [], []
    for idx, x in enumerate(fs.fibers):
        key = x.fiber.name or f"#{idx}"
        e = e_profile.get(key) or choose_e(resolve(x.fiber))
        if d % e:
            raise InputError(f"ramification {e} over {key} does not divide the degree {d}")
        inv = fiber_invariants(x.fiber, e)
        if inv.cover_defaulted:
            skipped.append(key)
            continue
        prof.append((key, e))
        copies = x.count * (d // e)
        # each preimage point: K^2 drops by e * (-ksq_total), Euler number becomes the reduced one
        ksq_t += copies * e * inv.ksq_total
        e_t += copies * inv.euler_after
        s_t += copies * int(inv.euler_after > 0)
    if fs.semistable and not fs.fibers:
        e_t = d * fs.e_f
        s_t = d * fs.s
    chi_t = (ksq_t + e_t) / 12
    return Lemma15Report(d, gi.values, (ksq_t, chi_t, e_t), ksq_t, e_t, chi_t, s_t, tuple(prof), tuple(skipped))

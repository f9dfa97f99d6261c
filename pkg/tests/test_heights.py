from fractions import Fraction as Q

import pytest
from hypothesis import given, strategies as st

from fiberlab.errors import InconsistentConfiguration, InputError, UnsupportedInput
from fiberlab.heights import (
    SATISFIED_EQUALITY,
    SATISFIED_STRICT,
    VIOLATED,
    AlgebraicPoint,
    SectionLocalData,
    bound_6,
    bound_7,
    check_bound_7,
    check_canonical_class,
    check_theorem_A,
    epsilon_q,
    miyaoka_check,
    miyaoka_m,
    point_invariants,
    validate_fibration,
)
from fiberlab.invariants import FiberEntry, FibrationSummary

# orders of the binary polyhedral groups: m(X) = 3 (r + 1 - 1/|G|)
GROUP_ORDER = {"A": lambda r: r + 1, "D": lambda r: 4 * (r - 2), "E": {6: 24, 7: 48, 8: 120}.__getitem__}


def m_oracle(kind, r):
    return 3 * (r + 1 - Q(1, GROUP_ORDER[kind](r)))


@pytest.mark.parametrize("kind,r", [("A", r) for r in range(0, 12)] + [("D", r) for r in range(4, 12)]
                         + [("E", 6), ("E", 7), ("E", 8)])
def test_m_values_match_group_orders(kind, r):
    assert miyaoka_m(kind, r) == m_oracle(kind, r)


def test_m_table():
    assert miyaoka_m("A", 1) == Q(9, 2)
    assert miyaoka_m("A", 2) == 8
    assert miyaoka_m("E", 6) == 21 - Q(1, 8)
    assert miyaoka_m("E", 7) == 24 - Q(1, 16)
    assert miyaoka_m("E", 8) == 27 - Q(1, 40)


@pytest.mark.parametrize("kind,r", [("A", -1), ("D", 3), ("E", 5), ("F", 4)])
def test_m_domain(kind, r):
    with pytest.raises(InputError):
        miyaoka_m(kind, r)


@given(st.integers(0, 50), st.integers(0, 50))
def test_epsilon_identity(mu1, mu2):
    mu = mu1 + mu2 + 1
    eps = epsilon_q(mu, mu1, mu2)
    assert eps == miyaoka_m("A", mu) - miyaoka_m("A", mu1) - miyaoka_m("A", mu2)
    assert eps > 0


def test_epsilon_needs_relation():
    with pytest.raises(InputError):
        epsilon_q(3, 1, 0)


def test_miyaoka_boundary():
    v = miyaoka_check(3, Q(9, 2), [("A", 1)], 0)
    assert v.status == SATISFIED_EQUALITY and v.ok


def semistable_p1(ksq=2, s=5, e_f=10):
    return FibrationSummary(2, 0, s, ksq, 1, e_f)


def test_point_invariants():
    h, d = point_invariants(AlgebraicPoint(3, 7, 2))
    assert (h, d) == (Q(7, 3), Q(2, 3))


def test_section_identity():
    h, _ = point_invariants(AlgebraicPoint(1, 3, 0, e_self=-3))
    assert h == 3
    with pytest.raises(InconsistentConfiguration):
        point_invariants(AlgebraicPoint(1, 3, 0, e_self=-2))
    with pytest.raises(InputError):
        AlgebraicPoint(2, 3, 0, e_self=-3)


def test_theorem_A_semistable_equality_flags_inconsistency():
    fs = semistable_p1()
    v = check_theorem_A(fs, AlgebraicPoint(1, 7, 0))
    assert v.margin == 0 and v.inconsistency and not v.ok


def test_theorem_A_equality_without_singular_fibers_is_fine():
    fs = FibrationSummary(2, 4, 0, 12, 1, 0)
    v = check_theorem_A(fs, AlgebraicPoint(1, 6, 4))
    assert v.status == SATISFIED_EQUALITY and v.ok


def test_theorem_A_strict_in_general_case(fiber):
    fs = FibrationSummary(2, 1, 2, 7, 1, 5,
                          (FiberEntry(1, fiber("genus2-elliptic-cusp")), FiberEntry(1, fiber("genus2-theta"))),
                          semistable=False)
    assert check_theorem_A(fs, AlgebraicPoint(1, 11, 1)).status == VIOLATED
    assert check_theorem_A(fs, AlgebraicPoint(1, 10, 1)).status == SATISFIED_STRICT


def test_section_genus_must_match_base():
    with pytest.raises(InconsistentConfiguration):
        check_theorem_A(semistable_p1(), AlgebraicPoint(1, 1, 1))


def test_canonical_class_branches():
    assert check_canonical_class(semistable_p1(ksq=6, e_f=6)).inconsistency
    assert check_canonical_class(semistable_p1(ksq=7, e_f=5)).status == VIOLATED
    fs = FibrationSummary(2, 0, 2, 2, 1, 10, semistable=False)
    assert check_canonical_class(fs).margin == 2 * (-2 + 6) - 2


def test_canonical_class_strict_boundary():
    # (2g-2)(2b-2+3s) = 2 * (-2 + 3) = 2 for s = 1
    fs = FibrationSummary(2, 0, 1, 2, 1, 10, semistable=False)
    assert check_canonical_class(fs).status == VIOLATED
    fs = FibrationSummary(2, 0, 1, 1, 1, 11, semistable=False)
    assert check_canonical_class(fs).status == SATISFIED_STRICT


def test_theorem_checks_need_genus_two():
    fs = FibrationSummary(1, 0, 12, 0, 1, 12)
    with pytest.raises(UnsupportedInput):
        check_canonical_class(fs)
    with pytest.raises(UnsupportedInput):
        check_theorem_A(fs, AlgebraicPoint(1, 0, 0))


def test_validation_warnings():
    assert any("s >= 5" in w for w in validate_fibration(semistable_p1(s=4)))
    assert not validate_fibration(semistable_p1(s=5))
    fs = FibrationSummary(2, 0, 1, 1, 1, 11, semistable=False)
    assert any("s >= 2" in w for w in validate_fibration(fs))
    assert any("Noether" in w for w in validate_fibration(FibrationSummary(2, 0, 5, 2, 1, 9)))


def test_bounds_need_semistable_positive_base():
    sd = SectionLocalData((0,) * 10)
    with pytest.raises(UnsupportedInput):
        bound_7(semistable_p1(), sd)


@given(st.lists(st.integers(0, 6), min_size=1, max_size=8), st.integers(1, 3), st.integers(0, 12))
def test_bound_6_margin_is_bound_7_minus_height(mus, b, k):
    e_f = sum(m + 1 for m in mus)
    ksq = 2 * (2 * b - 2 + len(mus)) - 1
    chi = Q(ksq + e_f, 12)
    fs = FibrationSummary(2, b, len(mus), ksq, chi, e_f)
    p = AlgebraicPoint(1, k, b, e_self=-k)
    sd = SectionLocalData(tuple(mus))
    assert bound_6(fs, p, sd).margin == bound_7(fs, sd) - k
    assert check_bound_7(fs, p, sd).margin == bound_7(fs, sd) - k


def test_section_local_data_validation():
    with pytest.raises(InputError):
        SectionLocalData((-1,))
    with pytest.raises(InputError):
        SectionLocalData((1,), ((3, 1, 0),))
    assert SectionLocalData((3,), ((3, 1, 1),)).epsilon == Q(3, 2) + Q(3, 2) - Q(3, 4)

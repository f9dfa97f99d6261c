import pytest
from hypothesis import given, strategies as st

from fiberlab.errors import InputError
from fiberlab.fiber import FiberComponent, FiberGraph, PointSingularity, classify, pa_red
from fiberlab.resolution import alpha, alpha_total, check_resolution_bounds, resolve
from fiberlab.singularities import ClusterPoint, SingularityDescriptor


def one_point(desc: SingularityDescriptor, genus: int = 0) -> FiberGraph:
    branches = ("C",) * desc.n_branches
    return FiberGraph((FiberComponent("C", genus),), (), (PointSingularity("p", branches, desc),))


A4 = SingularityDescriptor(
    "custom",
    (
        ClusterPoint("q0", None, (2,)),
        ClusterPoint("q1", "q0", (2,)),
        ClusterPoint("q2", "q1", (1,)),
        ClusterPoint("q3", "q2", (1,), satellite_of="q1"),
    ),
)


# delta from Milnor's formula mu = 2 delta - r + 1, with mu read off the normal form
@pytest.mark.parametrize(
    "desc,delta",
    [
        (SingularityDescriptor.builtin("node"), 1),  # xy: mu 1, r 2
        (SingularityDescriptor.builtin("cusp"), 1),  # y^2 - x^3: mu 2, r 1
        (SingularityDescriptor.builtin("tacnode"), 2),  # y^2 - x^4: mu 3, r 2
        (SingularityDescriptor.builtin("ordinary", 4), 6),  # mu (m-1)^2 = 9, r 4
        (A4, 2),  # y^2 - x^5: mu 4, r 1
    ],
)
def test_delta_invariants(desc, delta):
    assert desc.delta() == delta


@pytest.mark.parametrize(
    "desc,m_seq,exc",
    [
        (SingularityDescriptor.builtin("cusp"), (2, 2, 3), (2, 3, 6)),
        (SingularityDescriptor.builtin("tacnode"), (2, 3), (2, 4)),
        (SingularityDescriptor.builtin("ordinary", 3), (3,), (3,)),
        (A4, (2, 3, 2, 3), (2, 4, 5, 10)),
    ],
)
def test_blow_up_sequences(desc, m_seq, exc):
    log = resolve(one_point(desc))
    assert log.m_sequence == m_seq
    assert tuple(s.exc_mult_in_total_B for s in log.steps) == exc
    assert log.final_graph.is_snc
    assert classify(log.final_graph).kind != "smooth"


def test_resolved_cusp_is_kodaira_shape():
    # the SNC model of a cuspidal cubic: C, and exceptional curves of squares -3, -2, -1 meeting E3
    log = resolve(one_point(SingularityDescriptor.builtin("cusp")))
    g = log.final_graph
    sq = g.self_intersections
    assert sorted(sq.values()) == [-6, -3, -2, -1]
    assert sorted(c.multiplicity for c in g.components) == [1, 2, 3, 6]


def test_exceptional_sum_square_is_minus_blowups():
    log = resolve(one_point(A4))
    s = log.exceptional_sum()
    assert log.lattice.pair(s, s) == -len(log.steps)


def test_bounds_on_ordinary_point_equality():
    log = resolve(one_point(SingularityDescriptor.builtin("ordinary", 3)))
    rep = check_resolution_bounds(log)
    assert rep.ok
    # m_bar = 3 >= m - 2 = 1 strictly; alpha = (3-2)^2 = 1 <= 2 p_a = 6
    assert alpha(log, "p") == 1


def test_alpha_vanishes_for_nodes_only(fiber):
    log = resolve(fiber("genus2-theta"))
    assert alpha_total(log) == 0 and not log.steps


@given(st.integers(3, 9), st.integers(0, 2))
def test_ordinary_point_bounds(m, genus):
    f = one_point(SingularityDescriptor.builtin("ordinary", m), genus)
    log = resolve(f)
    assert log.m_sequence == (m,)
    assert alpha_total(log) == (m - 2) ** 2
    rep = check_resolution_bounds(log, f)
    assert rep.ok
    assert pa_red(f) == genus + m * (m - 1) // 2


@given(st.lists(st.sampled_from(["cusp", "tacnode", "node"]), min_size=1, max_size=4), st.integers(0, 2))
def test_bounds_hold_for_mixed_points(kinds, genus):
    pts = tuple(
        PointSingularity(f"p{i}", ("C",) * (1 if k == "cusp" else 2), SingularityDescriptor.builtin(k))
        for i, k in enumerate(kinds)
    )
    f = FiberGraph((FiberComponent("C", genus),), (), pts)
    log = resolve(f)
    rep = check_resolution_bounds(log, f)
    assert rep.ok and rep.equality_iff_ok
    for s in log.steps:
        assert s.m_bar >= s.m - 2


@pytest.mark.parametrize(
    "points",
    [
        (ClusterPoint("q0", None, (2,)),),  # branch stops with multiplicity 2
        (ClusterPoint("q0", None, (1,)), ClusterPoint("q1", None, (1,))),  # second root
        (ClusterPoint("q0", None, (2,)), ClusterPoint("q1", "q0", (1,)), ClusterPoint("q2", "q1", (1,), "q9")),
    ],
)
def test_invalid_proximity_trees(points):
    with pytest.raises(InputError):
        SingularityDescriptor("custom", points)

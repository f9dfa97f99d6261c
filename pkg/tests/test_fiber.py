import pytest
from hypothesis import given, strategies as st

from fiberlab.errors import InconsistentConfiguration, InputError
from fiberlab.fiber import (
    Edge,
    FiberComponent,
    FiberGraph,
    PointSingularity,
    chi_top,
    classify,
    euler_contribution,
    fiber_genus,
    fred_square,
    pa_red,
)
from fiberlab.singularities import SingularityDescriptor

# Euler numbers of Kodaira fibers, from the standard table
KODAIRA_EULER = {
    "kodaira-I1": 1, "kodaira-I2": 2, "kodaira-I3": 3, "kodaira-II": 2, "kodaira-III": 3, "kodaira-IV": 4,
    "kodaira-I0star": 6, "kodaira-I1star": 7, "kodaira-IVstar": 8, "kodaira-IIIstar": 9, "kodaira-IIstar": 10,
}


@pytest.mark.parametrize("name,euler", sorted(KODAIRA_EULER.items()))
def test_kodaira_euler_numbers(fiber, name, euler):
    f = fiber(name)
    assert fiber_genus(f) == 1
    assert euler_contribution(f) == euler
    assert chi_top(f) == euler  # 2 - 2g = 0


def test_star_fibers_are_minus_two_configurations(fiber):
    for name in ("kodaira-I0star", "kodaira-IVstar", "kodaira-IIIstar", "kodaira-IIstar"):
        f = fiber(name)
        assert set(f.self_intersections.values()) == {-2}
        assert fred_square(f) == -2
        assert pa_red(f) == 0


def test_self_node_does_not_change_square():
    f = FiberGraph((FiberComponent("C"),), (Edge("C", "C"),))
    assert f.self_intersections == {"C": 0}
    assert pa_red(f) == 1 and fiber_genus(f) == 1


def test_theta_fiber():
    f = FiberGraph((FiberComponent("A"), FiberComponent("B")), (Edge("A", "B"),) * 3)
    assert f.self_intersections == {"A": -3, "B": -3}
    assert fiber_genus(f) == 2
    assert classify(f).kind == "semistable-singular"


def test_non_integer_square_rejected():
    with pytest.raises(InconsistentConfiguration):
        FiberGraph((FiberComponent("A", multiplicity=2), FiberComponent("B")), (Edge("A", "B"),))


def test_disconnected_rejected():
    with pytest.raises(InconsistentConfiguration):
        FiberGraph((FiberComponent("A", genus=1), FiberComponent("B", genus=1)))


def test_unknown_edge_end_rejected():
    with pytest.raises(InputError):
        FiberGraph((FiberComponent("A"),), (Edge("A", "Z"),))


def test_bad_component_fields():
    with pytest.raises(InputError):
        FiberComponent("")
    with pytest.raises(InputError):
        FiberComponent("A", genus=-1)
    with pytest.raises(InputError):
        FiberComponent("A", multiplicity=0)


def test_cusp_makes_fiber_non_semistable():
    cusp = PointSingularity("p", ("C",), SingularityDescriptor.builtin("cusp"))
    f = FiberGraph((FiberComponent("C"),), (), (cusp,))
    assert classify(f).kind == "non-semistable"
    assert pa_red(f) == 1


def test_minus_one_curve_detected():
    # E meets the elliptic curve once: E^2 = -1
    f = FiberGraph((FiberComponent("A", genus=1), FiberComponent("E")), (Edge("A", "E"),))
    c = classify(f)
    assert not c.relatively_minimal and c.minus_one_curves == ("E",)


@st.composite
def nodal_graphs(draw):
    n = draw(st.integers(1, 5))
    comps = tuple(FiberComponent(f"C{i}", draw(st.integers(0, 2))) for i in range(n))
    edges = [Edge(f"C{i}", f"C{draw(st.integers(0, i - 1))}") for i in range(1, n)]  # spanning tree
    extra = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=4))
    edges += [Edge(f"C{i}", f"C{j}") for i, j in extra]
    return FiberGraph(comps, tuple(edges))


@given(nodal_graphs())
def test_reduced_fiber_relations(f):
    # F.C_i = 0 for every component and the genus formula matches adjunction
    sq = f.self_intersections
    for c in f.components:
        assert sq[c.id] + sum(k for (a, _), k in f.intersections.items() if a == c.id) == 0
    loops = sum(e.is_loop for e in f.edges)
    g = sum(c.genus for c in f.components) + len(f.edges) - len(f.components) + 1
    assert fiber_genus(f) == pa_red(f) == g
    assert fred_square(f) == 0
    assert chi_top(f) == sum(2 - 2 * c.genus for c in f.components) - len(f.edges)
    assert loops == sum(f.self_nodes(c.id) for c in f.components)

import random
import warnings
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fiberlab.basechange import (
    CoverWarning,
    choose_e,
    component_cover,
    pullback_fiber,
    semistable_reduction,
)
from fiberlab.errors import InputError
from fiberlab.fiber import Edge, FiberComponent, FiberGraph, classify, fiber_genus
from fiberlab.resolution import resolve


def cycle_signature(f: FiberGraph):
    return sorted(f.self_intersections.values()), len(f.components), len(f.edges)


@pytest.mark.parametrize("e,n", [(2, 2), (3, 3), (5, 5)])
def test_nodal_cubic_becomes_cycle(fiber, e, n):
    pb = pullback_fiber(fiber("kodaira-I1"), e)
    assert cycle_signature(pb.fiber) == ([-2] * n, n, n)
    assert pb.contracted == ()


def test_semistable_order_one_is_identity(fiber):
    f = fiber("genus2-theta")
    pb = pullback_fiber(f, 1)
    assert pb.fiber == f


@pytest.mark.parametrize(
    "name,e", [("kodaira-II", 6), ("kodaira-III", 4), ("kodaira-IV", 3), ("kodaira-I0star", 2),
               ("kodaira-IVstar", 6), ("kodaira-IIIstar", 12), ("kodaira-IIstar", 60), ("genus2-A4", 20)]
)
def test_choose_e(fiber, name, e):
    assert choose_e(resolve(fiber(name))) == e


def test_order_must_be_multiple(fiber):
    log = resolve(fiber("kodaira-II"))
    with pytest.raises(InputError):
        choose_e(log, 4)
    assert choose_e(log, 12) == 12


@pytest.mark.parametrize(
    "name,contracted",
    [("kodaira-II", 6), ("kodaira-III", 4), ("kodaira-IV", 3), ("kodaira-I0star", 4), ("kodaira-IVstar", 12)],
)
def test_potentially_good_fibers_become_smooth(fiber, name, contracted):
    red = semistable_reduction(fiber(name))
    assert classify(red.pullback.fiber).kind == "smooth"
    assert red.pullback.contracted_per_point == contracted
    assert red.pullback.fiber.components[0].genus == 1


def test_i1_star_becomes_i2(fiber):
    pb = semistable_reduction(fiber("kodaira-I1star")).pullback
    assert cycle_signature(pb.fiber) == ([-2, -2], 2, 2)


def test_component_cover_genus_zero():
    # mult-2 rational curve meeting four mult-1 curves: double cover branched at 4 points is elliptic
    cv = component_cover(FiberComponent("Z", 0, 2), 2, [1, 1, 1, 1])
    assert (cv.count, cv.degree, cv.genus) == (1, 2, 1)
    # splitting when every local monodromy is trivial
    cv = component_cover(FiberComponent("Z", 0, 2), 2, [2, 2])
    assert (cv.count, cv.degree, cv.genus) == (2, 1, 0)


def test_component_cover_positive_genus_default_and_override():
    c = FiberComponent("A", 1, 2)
    cv = component_cover(c, 2, [2, 2])
    assert cv.defaulted and cv.count == 1 and cv.genus == 1  # unramified double cover of an elliptic curve
    cv = component_cover(FiberComponent("A", 1, 2, cover_components=2), 2, [2, 2])
    assert not cv.defaulted and cv.count == 2
    with pytest.raises(InputError):
        component_cover(FiberComponent("A", 1, 2, cover_components=2), 2, [2, 1])


def test_cover_warning_emitted():
    f = FiberGraph((FiberComponent("A", 2, 2),), ())
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        pullback_fiber(f, 2)
    assert any(issubclass(w.category, CoverWarning) for w in caught)


def test_twisted_multiple_fiber(fiber):
    pb = pullback_fiber(fiber("multiple-2I2"), 2)
    assert cycle_signature(pb.fiber) == ([-2] * 4, 4, 4)


def test_untwisted_cycle_needs_twist():
    f = FiberGraph((FiberComponent("A", 0, 2), FiberComponent("B", 0, 2)), (Edge("A", "B"), Edge("A", "B")))
    with pytest.raises(InputError, match="twist"):
        pullback_fiber(f, 2)


def test_non_snc_input_refused(fiber):
    with pytest.raises(InputError):
        pullback_fiber(fiber("kodaira-II"), 6)


@pytest.mark.parametrize("name", ["kodaira-II", "kodaira-I0star", "genus2-elliptic-cusp", "genus2-A4", "genus2-star"])
@given(seed=st.integers(0, 10_000))
def test_contraction_order_irrelevant(fiber, name, seed):
    log = resolve(fiber(name))
    e = choose_e(log)
    a = pullback_fiber(log.final_graph, e)
    b = pullback_fiber(log.final_graph, e, random.Random(seed))
    assert a.contracted_per_point == b.contracted_per_point
    assert cycle_signature(a.fiber) == cycle_signature(b.fiber)
    assert fiber_genus(b.fiber) == fiber_genus(log.source)


@given(st.integers(1, 4))
def test_c_minus_1_scales_with_order(t):
    f = FiberGraph((FiberComponent("Z", 0, 2),) + tuple(FiberComponent(x) for x in "ABDG"),
                   tuple(Edge("Z", x) for x in "ABDG"))
    pb = pullback_fiber(f, 2 * t)
    assert pb.c_minus_1 == Fraction(2)

from fractions import Fraction
from math import gcd, lcm

import pytest
from hypothesis import given, strategies as st

from fiberlab.basechange import local_model
from fiberlab.errors import InputError
from fiberlab.toric import hj_continued_fraction, hj_value, normalize_node


def hilbert_basis(a: int, b: int, e: int) -> set[tuple[int, int]]:
    """Irreducible elements of the quadrant monoid {v >= 0 : (a v0 + b v1) / e integral}, by enumeration."""
    k = gcd(gcd(a, b), e)
    a, b, e = a // k, b // k, e // k
    box = range(e + 1)
    pts = [(x, y) for x in box for y in box if (x, y) != (0, 0) and (a * x + b * y) % e == 0]
    members = set(pts)
    out = set()
    for p in pts:
        if not any((p[0] - q[0], p[1] - q[1]) in members for q in pts if q != p and q[0] <= p[0] and q[1] <= p[1]):
            out.add(p)
    return out


@pytest.mark.parametrize(
    "n,q,want", [(2, 1, [2]), (3, 1, [3]), (3, 2, [2, 2]), (5, 2, [3, 2]), (7, 3, [3, 2, 2]), (1, 0, [])]
)
def test_continued_fraction_examples(n, q, want):
    assert hj_continued_fraction(n, q) == want


@given(st.integers(2, 200).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n - 1))))
def test_continued_fraction_round_trip(nq):
    n, q = nq
    if gcd(n, q) != 1:
        with pytest.raises(ValueError):
            hj_continued_fraction(n, q)
        return
    bs = hj_continued_fraction(n, q)
    assert all(b >= 2 for b in bs)
    assert hj_value(bs) == Fraction(n, q)


triples = st.tuples(st.integers(1, 8), st.integers(1, 8), st.integers(1, 24))


@given(triples)
def test_rays_are_the_hilbert_basis(t):
    a, b, e = t
    node = normalize_node(a, b, e)
    assert set(node.rays) == hilbert_basis(a, b, e)
    assert node.factors == gcd(gcd(a, b), e)


@given(triples)
def test_adjacent_rays_are_unimodular_in_the_sublattice(t):
    a, b, e = t
    node = normalize_node(a, b, e)
    index = e // gcd(gcd(a, b), e)  # [Z^2 : N'] = e'
    rays = node.rays
    for u, v in zip(rays, rays[1:]):
        assert abs(u[0] * v[1] - u[1] * v[0]) == index
    # consecutive rays satisfy u_{i-1} + u_{i+1} = b_i u_i
    for (u, v, w), s in zip(zip(rays, rays[1:], rays[2:]), node.self_intersections):
        assert (u[0] + w[0], u[1] + w[1]) == (-s * v[0], -s * v[1])


@given(st.integers(1, 6), st.integers(1, 6), st.integers(1, 5))
def test_reduced_case_gives_an_chain(a, b, t):
    e = lcm(a, b) * t
    m = local_model(a, b, e)
    assert m.points_above == gcd(a, b)
    assert m.chain_length_per_point == e // lcm(a, b) - 1
    node = m.toric
    assert all(x == 1 for x in node.fiber_mults)
    assert all(s == -2 for s in node.self_intersections)


@pytest.mark.parametrize("e", [1, 2, 3, 7])
def test_node_of_reduced_fiber(e):
    m = local_model(1, 1, e)
    assert (m.points_above, m.chain_length_per_point) == (1, e - 1)


def test_local_model_needs_divisibility():
    with pytest.raises(InputError):
        local_model(2, 3, 4)
    with pytest.raises(InputError):
        local_model(0, 1, 1)

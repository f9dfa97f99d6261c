"""Normalization of s^e = x^a y^b as a toric surface germ.

Each irreducible factor s^e' = x^a' y^b' (with gcd(a', b', e') = 1) normalizes
to the affine toric surface of the positive quadrant in the lattice
N' = { v in Z^2 : <v, (a', b')/e'> in Z }.  Writing the cone in the normal form
cone(e2, n e1 - q e2) gives the cyclic quotient type 1/n(1, q); its minimal
resolution is the Hirzebruch-Jung chain of n/q.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import sympy
from sympy.matrices.normalforms import hermite_normal_form


def hj_continued_fraction(n: int, q: int) -> list[int]:
    """n/q = b1 - 1/(b2 - 1/(...)); every b_i >= 2.  Empty for n == 1."""
    if n < 1 or not 0 <= q < n:
        raise ValueError(f"need 0 <= q < n, got n={n}, q={q}")
    if n == 1:
        return []
    if gcd(n, q) != 1:
        raise ValueError(f"gcd(n, q) must be 1, got n={n}, q={q}")
    out = []
    num, den = n, q
    while den:
        b = -(-num // den)
        out.append(b)
        num, den = den, b * den - num
    return out


def hj_value(bs: list[int]) -> Fraction:
    x = Fraction(bs[-1])
    for b in reversed(bs[:-1]):
        x = b - 1 / x
    return x


def _det(u, v) -> int:
    return u[0] * v[1] - u[1] * v[0]


def _ext_basis(u: tuple[int, int]) -> tuple[int, int]:
    """Some integer x with det(x, u) = 1, for primitive u."""
    g, s, t = _xgcd(u[0], u[1])
    assert g == 1
    # det((x0, x1), (u0, u1)) = x0 u1 - x1 u0 = 1  <=  x0 = t, x1 = -s
    return (t, -s)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (abs(a), (1 if a >= 0 else -1), 0)
    g, s, t = _xgcd(b, a % b)
    return g, t, s - (a // b) * t


@dataclass(frozen=True)
class ToricNode:
    factors: int  # points of the normalization above the node
    n: int
    q: int
    # resolution rays from the x = 0 side to the y = 0 side, endpoints included,
    # in Z^2 coordinates of the ambient (x, y) cocharacter lattice
    rays: tuple[tuple[int, int], ...]
    self_intersections: tuple[int, ...]
    fiber_mults: tuple[Fraction, ...]  # order of s along each ray, endpoints included
    x_coeffs: tuple[Fraction, ...]  # order of x along each ray
    y_coeffs: tuple[Fraction, ...]


def normalize_node(a: int, b: int, e: int) -> ToricNode:
    if min(a, b, e) < 1:
        raise ValueError("exponents must be positive")
    k = gcd(gcd(a, b), e)
    a1, b1, e1 = a // k, b // k, e // k

    # e1 * M' is generated by (e1, 0), (0, e1), (a1, b1); saturate through the HNF
    gens = sympy.Matrix([[e1, 0, a1], [0, e1, b1]])
    h = hermite_normal_form(gens)
    if h.shape != (2, 2):
        raise ArithmeticError(f"unexpected HNF shape {h.shape}")
    m_basis = h / e1  # columns span M'
    n_basis = (m_basis.T).inv()  # columns span N' (dual)
    nb = [[int(n_basis[i, j]) for j in range(2)] for i in range(2)]
    if any(n_basis[i, j] != nb[i][j] for i in range(2) for j in range(2)):
        raise ArithmeticError("dual lattice is not integral")

    def to_n(v):  # ambient -> N' coordinates
        sol = n_basis.solve(sympy.Matrix(v))
        return (sol[0], sol[1])

    def primitive_on_axis(axis):
        c = to_n(axis)
        den = sympy.ilcm(sympy.fraction(c[0])[1], sympy.fraction(c[1])[1])
        w = (int(c[0] * den), int(c[1] * den))
        g = gcd(*w)
        return (w[0] // g, w[1] // g)

    U = primitive_on_axis((1, 0))
    W = primitive_on_axis((0, 1))
    X = _ext_basis(U)  # det(X, U) = 1
    n = _det(W, U)
    if n < 0:
        X, n = (-X[0], -X[1]), -n
    # W = n X + beta U
    beta = _det(X, W) // _det(X, U)
    t = -(-beta // n)  # ceil(beta / n)
    X = (X[0] + t * U[0], X[1] + t * U[1])
    q = n * t - beta
    if W != (n * X[0] - q * U[0], n * X[1] - q * U[1]):
        raise ArithmeticError("failed to bring the cone into normal form")

    bs = hj_continued_fraction(n, q)
    if bs:
        rays_n = [U, X]
        for b in bs:
            prev, cur = rays_n[-2], rays_n[-1]
            rays_n.append((b * cur[0] - prev[0], b * cur[1] - prev[1]))
        if rays_n[-1] != W:
            raise ArithmeticError("Hirzebruch-Jung chain does not end on the second ray")
    else:
        rays_n = [U, W]
    # convert to ambient coordinates
    rays = []
    for r in rays_n:
        v = (nb[0][0] * r[0] + nb[0][1] * r[1], nb[1][0] * r[0] + nb[1][1] * r[1])
        rays.append(v)
    s_exp = (Fraction(a1, e1), Fraction(b1, e1))
    fiber = tuple(r[0] * s_exp[0] + r[1] * s_exp[1] for r in rays)
    return ToricNode(
        factors=k,
        n=n,
        q=q,
        rays=tuple(rays),
        self_intersections=tuple(-b for b in bs),
        fiber_mults=fiber,
        x_coeffs=tuple(Fraction(r[0]) for r in rays),
        y_coeffs=tuple(Fraction(r[1]) for r in rays),
    )

"""Shared fixture builders: standard curves, random operator families."""

from fractions import Fraction

import pytest

from pertinv.geom2d import PolyCurve2
from pertinv.geom3d import PolyCurve3
from pertinv.ratlin import rref
from pertinv.solver import OperatorFamily, RationalSpace, multilinear_from_tensor


def hopf_pair():
    """Square in the xy-plane threaded by a square in the xz-plane."""
    a = PolyCurve3([(-1, -1, 0), (1, -1, 0), (1, 1, 0), (-1, 1, 0)])
    b = PolyCurve3([(0, 0, -1), (2, 0, -1), (2, 0, 1), (0, 0, 1)])
    return a, b


def split_pair():
    a = PolyCurve3([(-1, -1, 0), (1, -1, 0), (1, 1, 0), (-1, 1, 0)])
    b = PolyCurve3([(10, 10, 0), (11, 10, 0), (11, 11, 0), (10, 11, 0)])
    return a, b


def unit_square():
    return PolyCurve2([(0, 0), (1, 0), (1, 1), (0, 1)])


def crossing_slab():
    """Slanted parallelogram whose left edge cuts the unit square from
    (1/4, 0) to (3/4, 1); the overlap with the unit square is exactly 1/2.

    This is the generic stand-in for a pair of axis-aligned unit squares
    offset by (1/2, 0): that literal configuration has collinear edge
    overlaps and corner-on-edge contacts, which genericity rejects.
    """
    F = Fraction
    return PolyCurve2([
        (F(1, 8), F(-1, 4)),
        (F(17, 8), F(-1, 4)),
        (F(23, 8), F(5, 4)),
        (F(7, 8), F(5, 4)),
    ])


def figure_eight():
    return PolyCurve2([(0, 0), (2, 2), (2, 0), (0, 2)])


def random_tensor(rng, dim, k):
    def build(depth):
        if depth == 0:
            return Fraction(rng.randint(-2, 2))
        return [build(depth - 1) for _ in range(dim)]

    return [build(k) for _ in range(dim)]


def random_operator_family(rng, max_dim=3, max_arity=3, max_label=2):
    """Random polynomial operator family with an invertible linear part."""
    dim = rng.randint(1, max_dim)
    space = RationalSpace(dim)
    while True:
        linear = [[Fraction(rng.randint(-3, 3)) for _ in range(dim)] for _ in range(dim)]
        if len(rref(linear)[1]) == dim:
            break
    higher = {}
    for _ in range(rng.randint(1, 3)):
        n = rng.randint(0, max_label)
        k = rng.randint(2, max_arity)
        tensor = random_tensor(rng, dim, k)
        higher[(n, k)] = multilinear_from_tensor(space, tensor, k)
    ops = OperatorFamily.from_matrices(space, linear, higher)
    psi = tuple(Fraction(rng.randint(-3, 3)) for _ in range(dim))
    return ops, psi

"""Exact series arithmetic, fixed points, and operator substitution."""

import random
from fractions import Fraction

import pytest

from pertinv.errors import InputError
from pertinv.series import (
    FormalSeries,
    VectorSeries,
    compositions,
    fixed_point,
    series_mul,
    substitute_series,
)
from pertinv.solver import OperatorFamily, RationalSpace, solve_recursive

CATALAN = [1, 1, 2, 5, 14, 42, 132, 429]


def random_series(rng, order):
    return FormalSeries(
        [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(order + 1)]
    )


def test_mul_example():
    one_plus = FormalSeries([1, 1, 0])
    one_minus = FormalSeries([1, -1, 0])
    assert one_plus * one_minus == FormalSeries([1, 0, -1])


def test_mul_identity():
    rng = random.Random(0)
    for _ in range(20):
        a = random_series(rng, 6)
        assert a * FormalSeries.one(6) == a


def test_mul_against_bruteforce_convolution():
    rng = random.Random(1)
    for _ in range(20):
        a = random_series(rng, 5)
        b = random_series(rng, 5)
        expect = [
            sum((a[i] * b[m - i] for i in range(m + 1)), Fraction(0))
            for m in range(6)
        ]
        assert series_mul(a, b) == FormalSeries(expect)


def test_catalan_square_shift():
    # c_{n+1} = sum c_i c_{n-i}: the square of the Catalan series is the
    # shifted tail
    c = FormalSeries(CATALAN[:7])
    sq = c * c
    assert list(sq.coeffs[:6]) == CATALAN[1:7]


def test_ring_axioms():
    rng = random.Random(2)
    for _ in range(15):
        a, b, c = (random_series(rng, 5) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c


def test_mixed_order_rejected():
    with pytest.raises(InputError):
        FormalSeries([1, 2]) + FormalSeries([1, 2, 3])
    with pytest.raises(InputError):
        FormalSeries([1, 2]) * FormalSeries([1, 2, 3])


def test_fixed_point_catalan():
    x = fixed_point(lambda x: FormalSeries.one(7) + (x * x).shift(1), 7)
    assert list(x.coeffs) == CATALAN


def test_fixed_point_super_catalan():
    def update(x):
        acc = FormalSeries.one(6)
        xk = x
        for k in range(2, 8):
            xk = xk * x
            acc = acc + xk.shift(k - 1)
        return acc

    x = fixed_point(update, 6)
    assert list(x.coeffs) == [1, 1, 3, 11, 45, 197, 903]


def test_fixed_point_constant():
    x = fixed_point(lambda x: FormalSeries.one(5), 5)
    assert x == FormalSeries.one(5)


def test_fixed_point_idempotent():
    update = lambda x: FormalSeries.one(6) + (x * x).shift(1)
    x = fixed_point(update, 6)
    assert update(x) == x


def test_fixed_point_detects_valuation_violation():
    # coefficient n depending on coefficient n: x = x + 1 never settles
    with pytest.raises(InputError):
        fixed_point(lambda x: x + FormalSeries.one(4), 4)


def test_series_str():
    s = FormalSeries([Fraction(1), Fraction(-1, 2), Fraction(3)])
    assert str(s) == "1 + -1/2*L + 3*L^2"


def test_compositions():
    assert sorted(compositions(2, 2)) == [(0, 2), (1, 1), (2, 0)]
    assert list(compositions(0, 3)) == [(0, 0, 0)]
    assert list(compositions(2, 0)) == []


# --- substitution -------------------------------------------------------

def quadratic_family():
    space = RationalSpace(1)
    higher = {(0, 2): lambda args: (args[0][0] * args[1][0],)}
    return space, OperatorFamily.from_matrices(space, [[1]], higher)


def test_substitute_residual_of_solution():
    space, ops = quadratic_family()
    psi = (Fraction(1),)
    sol = solve_recursive(ops, psi, 6)
    res = substitute_series(ops, sol.as_series(), 6)
    assert res[0] == psi
    assert all(res[m] == space.zero() for m in range(1, 7))


def test_substitute_zero_series():
    space, ops = quadratic_family()
    zero = VectorSeries.zero(space, 5)
    res = substitute_series(ops, zero, 5)
    assert all(res[m] == space.zero() for m in range(6))


def test_substitute_degree_bookkeeping():
    # a single quadratic operator applied to v*L^0 lands at L^1
    space = RationalSpace(1)
    ops = OperatorFamily.from_matrices(
        space, [[0]], {(0, 2): lambda args: (args[0][0] * args[1][0],)}
    )
    # zero linear part: use terms directly, bypassing the solve
    phi = VectorSeries(space, [(Fraction(3),)] + [space.zero()] * 4)
    res = substitute_series(ops, phi, 4)
    assert res[0] == space.zero()  # linear part is 0 here
    assert res[1] == (Fraction(9),)
    assert all(res[m] == space.zero() for m in (2, 3, 4))


def test_substitute_multilinearity():
    # scaling one coefficient of phi scales each output term accordingly
    space, ops = quadratic_family()
    phi = VectorSeries(space, [(Fraction(2),), (Fraction(1),), (Fraction(0),)])
    res1 = substitute_series(ops, phi, 2)
    phi2 = VectorSeries(space, [(Fraction(2),), (Fraction(3),), (Fraction(0),)])
    res2 = substitute_series(ops, phi2, 2)
    # order-2 coefficient collects 2 * phi_0 * phi_1, linear in phi_1
    base = res1[2][0]
    assert res2[2][0] == 3 * base


def test_substitute_requires_enough_orders():
    space, ops = quadratic_family()
    phi = VectorSeries(space, [(Fraction(1),)] * 3)
    with pytest.raises(InputError):
        substitute_series(ops, phi, 5)

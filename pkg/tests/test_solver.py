"""Solver strategies, consistency conditions, and the on-shell hierarchy."""

import random
from fractions import Fraction

import pytest
from conftest import random_operator_family

from pertinv.errors import ConsistencyError, InputError
from pertinv.series import substitute_series
from pertinv.solver import (
    ActionSpec,
    MatrixRightInverse,
    OperatorFamily,
    RationalSpace,
    check_consistency,
    multilinear_from_tensor,
    onshell_hierarchy,
    solve_polynomial,
    solve_recursive,
    solve_tree_sum,
)

F = Fraction


def scalar_quadratic(a1=1, a2=1):
    space = RationalSpace(1)
    higher = {(0, 2): lambda args, c=F(a2): (c * args[0][0] * args[1][0],)}
    return space, OperatorFamily.from_matrices(space, [[a1]], higher)


def test_signed_catalan_tree_sum():
    space, ops = scalar_quadratic()
    sol = solve_tree_sum(ops, (F(1),), 4)
    assert [v[0] for v in sol.coeffs] == [1, -1, 2, -5, 14]


def test_order_zero_is_linear_solve():
    space, ops = scalar_quadratic(a1=4)
    sol = solve_tree_sum(ops, (F(3),), 0)
    assert sol[0] == (F(3, 4),)


def test_zero_source_gives_zero():
    space, ops = scalar_quadratic()
    sol = solve_tree_sum(ops, (F(0),), 5)
    assert all(v == space.zero() for v in sol.coeffs)


def test_strategies_agree_on_random_families():
    rng = random.Random(11)
    for _ in range(20):
        ops, psi = random_operator_family(rng)
        a = solve_tree_sum(ops, psi, 5)
        b = solve_recursive(ops, psi, 5)
        assert a.coeffs == b.coeffs


def test_residual_vanishes_on_random_families():
    rng = random.Random(12)
    for _ in range(10):
        ops, psi = random_operator_family(rng)
        sol = solve_recursive(ops, psi, 5)
        res = substitute_series(ops, sol.as_series(), 5)
        assert res[0] == psi
        assert all(res[m] == ops.space.zero() for m in range(1, 6))


def test_solve_polynomial_signed_catalan():
    s = solve_polynomial([1, 1], 1, 4)
    assert list(s.coeffs) == [1, -1, 2, -5, 14]


def test_solve_polynomial_linear():
    s = solve_polynomial([F(2)], F(5), 4)
    assert list(s.coeffs) == [F(5, 2), 0, 0, 0, 0]


def test_solve_polynomial_cubic_parity():
    # only the cubic term: x + x^3 L^2 = 1 has corrections at even orders
    s = solve_polynomial([1, 0, 1], 1, 6)
    assert [s[i] for i in (1, 3, 5)] == [0, 0, 0]
    assert s[2] != 0 and s[4] != 0
    # residual: substitute back into the equation
    space = RationalSpace(1)
    ops = OperatorFamily.from_matrices(
        space, [[1]],
        {(0, 3): lambda a: (a[0][0] * a[1][0] * a[2][0],)},
    )
    sol = solve_recursive(ops, (F(1),), 6)
    assert [v[0] for v in sol.coeffs] == list(s.coeffs)


def test_solve_polynomial_rejects_zero_linear_term():
    with pytest.raises(InputError):
        solve_polynomial([0, 1], 1, 3)


def test_closed_formula_deep_orders():
    # the internal cross-check between the closed tree formula and the
    # recursion runs inside solve_polynomial; exercise it to order 10
    s = solve_polynomial([1, 1], 1, 10)
    catalan = [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796]
    assert [abs(c) for c in s.coeffs] == catalan
    assert all((-1) ** n * s[n] > 0 for n in range(11))


# --- right inverses and consistency conditions --------------------------

def singular_family(psi_in_image):
    space = RationalSpace(2)
    linear = [[1, 0], [0, 0]]  # image = span(e1)
    higher = {(0, 2): lambda a: (a[0][0] * a[1][0], F(0))}  # lands in the image
    ops = OperatorFamily.from_matrices(space, linear, higher)
    psi = (F(1), F(0)) if psi_in_image else (F(0), F(1))
    return ops, psi


def test_invertible_consistency_all_pass():
    space, ops = scalar_quadratic()
    report = check_consistency(ops, (F(1),), 5)
    assert report.all_ok and report.first_failure is None


def test_singular_with_incompatible_source_fails_at_zero():
    ops, psi = singular_family(psi_in_image=False)
    report = check_consistency(ops, psi, 3)
    assert not report.all_ok and report.first_failure == 0
    with pytest.raises(ConsistencyError) as exc:
        solve_recursive(ops, psi, 3)
    assert exc.value.order == 0
    with pytest.raises(ConsistencyError):
        solve_tree_sum(ops, psi, 3)


def test_singular_with_compatible_data_passes():
    ops, psi = singular_family(psi_in_image=True)
    report = check_consistency(ops, psi, 5)
    assert report.all_ok
    a = solve_tree_sum(ops, psi, 5)
    b = solve_recursive(ops, psi, 5)
    assert a.coeffs == b.coeffs
    # the computed solution actually solves the equation
    res = substitute_series(ops, a.as_series(), 5)
    assert res[0] == psi
    assert all(res[m] == ops.space.zero() for m in range(1, 6))


def test_right_inverse_property():
    m = [[F(1), F(0)], [F(0), F(0)]]
    p = MatrixRightInverse(m)
    assert p.in_image((F(2), F(0)))
    assert not p.in_image((F(0), F(1)))
    from pertinv.ratlin import mat_vec

    v = (F(5), F(0))
    assert mat_vec(m, p.solve(v)) == v


# --- equivariance --------------------------------------------------------

def equivariant_action(j_vec):
    # componentwise cubic interaction; commutes with signed permutations
    space = RationalSpace(2)
    forms = {
        (0, 2): lambda a: a[0][0] * a[1][0] + a[0][1] * a[1][1],
        (1, 4): lambda a: sum(a[0][i] * a[1][i] * a[2][i] * a[3][i] for i in range(2)),
    }
    return ActionSpec(space, [[1, 0], [0, 1]], j_vec, forms)


def apply_signed_perm(g, v):
    return tuple(sum(F(g[i][j]) * v[j] for j in range(len(v))) for i in range(len(v)))


SIGNED_PERMS = [
    [[0, 1], [1, 0]],
    [[-1, 0], [0, -1]],
    [[0, -1], [-1, 0]],
]


@pytest.mark.parametrize("g", SIGNED_PERMS)
def test_solution_equivariance(g):
    j = (F(2), F(-3))
    gj = apply_signed_perm(g, j)
    phi = solve_recursive(equivariant_action(j).operator_family(), j, 5)
    phi_g = solve_recursive(equivariant_action(gj).operator_family(), gj, 5)
    for n in range(6):
        assert phi_g[n] == apply_signed_perm(g, phi[n])


@pytest.mark.parametrize("g", SIGNED_PERMS)
def test_hierarchy_invariance_on_orbit(g):
    j = (F(2), F(-3))
    gj = apply_signed_perm(g, j)
    h1 = onshell_hierarchy(equivariant_action(j), 5)
    h2 = onshell_hierarchy(equivariant_action(gj), 5)
    assert h1.tree == h2.tree
    assert h1.matches and h2.matches


# --- on-shell hierarchy ---------------------------------------------------

def toy(kappa, g, j):
    space = RationalSpace(1)
    forms = {
        (0, 2): lambda a, k=F(kappa): k * a[0][0] * a[1][0],
        (1, 3): lambda a, c=F(g): c * a[0][0] * a[1][0] * a[2][0],
    }
    return ActionSpec(space, [[1]], (F(j),), forms)


def test_hierarchy_order_zero_value():
    res = onshell_hierarchy(toy(1, 1, 1), 6)
    assert res.tree[0] == F(-1, 2)  # -j^2 / (2 kappa)
    assert res.matches


def test_hierarchy_order_zero_general_parameters():
    kappa, g, j = F(2), F(3), F(5)
    res = onshell_hierarchy(toy(kappa, g, j), 4)
    assert res.tree[0] == -j * j / (2 * kappa)
    # first correction: g j^3 / (3 kappa^3)
    assert res.tree[1] == g * j**3 / (3 * kappa**3)
    assert res.matches


def test_hierarchy_zero_source():
    res = onshell_hierarchy(toy(1, 1, 0), 5)
    assert all(c == 0 for c in res.tree)
    assert res.matches


def test_hierarchy_literal_mode_mismatch():
    lit = onshell_hierarchy(toy(1, 1, 1), 4, "literal")
    assert lit.tree[0] == 0  # the unweighted root sum cancels at order 0
    assert lit.direct[0] == F(-1, 2)
    assert not lit.matches


def test_hierarchy_matches_through_order_six():
    res = onshell_hierarchy(toy(1, 2, 3), 6)
    assert res.tree == res.direct


def test_action_spec_validation():
    space = RationalSpace(1)
    with pytest.raises(InputError):
        ActionSpec(space, [[1]], (F(1),), {(1, 2): lambda a: F(0)})
    with pytest.raises(InputError):
        ActionSpec(space, [[0]], (F(1),), {(0, 2): lambda a: a[0][0] * a[1][0]})


def test_derived_operator_pairing_identity():
    act = toy(2, 3, 1)
    ops = act.operator_family()
    rng = random.Random(5)
    for _ in range(10):
        u = (F(rng.randint(-4, 4)),)
        v = (F(rng.randint(-4, 4)),)
        w = (F(rng.randint(-4, 4)),)
        # <O_{1,2}(u, v), w> = Q_{1,3}(u, v, w)
        o = ops.apply(1, 2, (u, v))
        assert act.pair(o, w) == act.q(1, 3, (u, v, w))
        # <O_{0,1}(u), v> = Q_{0,2}(u, v)
        o1 = ops.apply(0, 1, (u,))
        assert act.pair(o1, v) == act.q(0, 2, (u, v))


def test_operator_family_validation():
    space = RationalSpace(1)
    with pytest.raises(InputError):
        OperatorFamily(space, {(1, 1): lambda a: a[0]}, None)
    with pytest.raises(InputError):
        OperatorFamily(space, {(0, 2): lambda a: a[0]}, None)  # no linear part


def test_multilinear_from_tensor():
    space = RationalSpace(2)
    tensor = [[[1, 0], [0, 0]], [[0, 0], [0, 2]]]
    f = multilinear_from_tensor(space, tensor, 2)
    u, v = (F(3), F(5)), (F(7), F(11))
    assert f((u, v)) == (F(21), F(110))

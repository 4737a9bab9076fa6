"""Tree-indexed perturbative solver and the on-shell hierarchy.

The equation solved is, after the order-counting substitution that puts
the coupling L in front of every nonlinearity,

    O_{0,1}(phi) + sum_{n>=0, k>=2} O_{n,k}(phi,...,phi) L^(n+k-1) = psi.

Order by order this is a linear system for phi_n with right-hand side
built from lower orders; the closed-form answer is a sum over labelled
planar rooted trees of order n, with the inverse (or a right inverse) of
O_{0,1} applied at every internal vertex.  Both evaluation strategies
are implemented and must agree exactly.

The hierarchy part evaluates the stationary value of an action
S = sum_{n,k} Q_{n,k}(phi,..,phi) L^n / k - <j, phi> on the perturbative
solution; coefficient n of the result is also a sum over root trees of
grade n, which is what makes each coefficient a symmetry invariant of
the action's external data.
"""

from fractions import Fraction

from .errors import ConsistencyError, InputError, InternalConsistencyError
from .ratlin import frac, inverse, mat_eq, mat_mul, mat_vec, rref, solve, transpose
from .series import FormalSeries, VectorSeries, compositions
from .trees import enumerate_R, enumerate_T, iter_internal, tree_stats


class RationalSpace:
    """Fraction^dim with tuple vectors; exact throughout."""

    def __init__(self, dim):
        if dim < 1:
            raise InputError("dimension must be positive")
        self.dim = dim

    def zero(self):
        return (Fraction(0),) * self.dim

    def basis(self, i):
        return tuple(Fraction(int(j == i)) for j in range(self.dim))

    def add(self, u, v):
        return tuple(x + y for x, y in zip(u, v))

    def neg(self, u):
        return tuple(-x for x in u)

    def scale(self, c, u):
        c = frac(c)
        return tuple(c * x for x in u)

    def eq(self, u, v):
        return tuple(u) == tuple(v)

    def vector(self, entries):
        entries = tuple(frac(x) for x in entries)
        if len(entries) != self.dim:
            raise InputError("expected %d entries" % self.dim)
        return entries


class MatrixInverse:
    """Exact inverse of an invertible linear part."""

    is_exact_inverse = True

    def __init__(self, matrix):
        self.inv = inverse(matrix)

    def solve(self, v):
        return mat_vec(self.inv, v)

    def in_image(self, v):
        return True


class MatrixRightInverse:
    """Total linear right inverse of a possibly singular linear part.

    Off the column space the map factors through the orthogonal
    projection onto it, so P stays linear; on the column space
    A(P(v)) = v holds exactly.
    """

    is_exact_inverse = False

    def __init__(self, matrix):
        self.matrix = [row[:] for row in matrix]
        at = transpose(self.matrix)
        _, pivots = rref(self.matrix)
        cols = [at[c] for c in pivots]  # basis of the column space
        if cols:
            c = transpose(cols)
            gram = mat_mul(transpose(c), c)
            self.proj = mat_mul(c, mat_mul(inverse(gram), transpose(c)))
        else:
            n = len(self.matrix)
            self.proj = [[Fraction(0)] * n for _ in range(n)]

    def solve(self, v):
        w = mat_vec(self.proj, v)
        x = solve(self.matrix, w)
        if x is None:
            raise InternalConsistencyError("projected vector left the image")
        return x

    def in_image(self, v):
        return mat_vec(self.proj, v) == tuple(frac(x) for x in v)


class OperatorFamily:
    """Finitely many multilinear operators O_{n,k} plus the linear part.

    terms maps (n, k) to a callable on k-tuples of vectors; the pair
    (0, 1) is the linear part and must be present.  Pairs (n, 1) with
    n >= 1 are forbidden (the linear part carries no label).
    """

    def __init__(self, space, terms, linear_solve):
        if (0, 1) not in terms:
            raise InputError("the linear term (0,1) is required")
        for (n, k) in terms:
            if k < 1 or n < 0:
                raise InputError("invalid operator index (%d, %d)" % (n, k))
            if k == 1 and n >= 1:
                raise InputError("O_{n,1} must vanish for n >= 1")
        self.space = space
        self.terms = dict(terms)
        self.linear_solve = linear_solve

    @classmethod
    def from_matrices(cls, space, linear_matrix, higher_terms):
        """Linear part given as a matrix; the solve strategy is picked by
        exact rank (inverse when regular, right inverse otherwise)."""
        m = [[frac(x) for x in row] for row in linear_matrix]
        if len(rref(m)[1]) == space.dim:
            ls = MatrixInverse(m)
        else:
            ls = MatrixRightInverse(m)
        terms = dict(higher_terms)
        terms[(0, 1)] = lambda args, m=m: mat_vec(m, args[0])
        return cls(space, terms, ls)

    def support(self):
        return sorted(self.terms.keys())

    def apply(self, n, k, args):
        if len(args) != k:
            raise InputError("arity mismatch")
        f = self.terms.get((n, k))
        if f is None:
            return self.space.zero()
        return f(args)

    @property
    def max_label(self):
        labels = [n for (n, k) in self.terms if k >= 2]
        return max(labels) if labels else 0

    @property
    def max_arity(self):
        arities = [k for (n, k) in self.terms if k >= 2]
        return max(arities) if arities else 1


class PerturbativeSolution:
    """Coefficients phi_0..phi_N and the strategy that produced them."""

    def __init__(self, space, coeffs, strategy):
        self.space = space
        self.coeffs = tuple(coeffs)
        self.strategy = strategy

    @property
    def order(self):
        return len(self.coeffs) - 1

    def __getitem__(self, i):
        return self.coeffs[i]

    def as_series(self):
        return VectorSeries(self.space, self.coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, PerturbativeSolution) and self.coeffs == other.coeffs
        )

    def __repr__(self):
        return "PerturbativeSolution(order=%d, strategy=%s)" % (
            self.order,
            self.strategy,
        )


def _order_rhs(ops, phi, n):
    """Right-hand side sum of the order-n linear equation (unsigned):
    all O_{m,k}(phi_{i_1},..,phi_{i_k}) with m + k - 1 + sum(i) = n."""
    space = ops.space
    acc = space.zero()
    for (m, k) in ops.support():
        if k < 2:
            continue
        rest = n - m - k + 1
        if rest < 0:
            continue
        for idx in compositions(rest, k):
            acc = space.add(acc, ops.apply(m, k, tuple(phi[i] for i in idx)))
    return acc


def solve_recursive(ops, psi, order):
    """Dynamic-programming solve of the order-by-order linear system."""
    space = ops.space
    ls = ops.linear_solve
    phi = []
    for n in range(order + 1):
        rhs = psi if n == 0 else space.neg(_order_rhs(ops, phi, n))
        if not ls.in_image(rhs):
            raise ConsistencyError(
                "consistency condition fails at order %d" % n, order=n
            )
        phi.append(ls.solve(rhs))
    return PerturbativeSolution(space, phi, "recursive")


class TreeEvaluator:
    """Evaluates O_T(psi,...,psi) with memoization on tree encodings."""

    def __init__(self, ops, psi):
        self.ops = ops
        self.psi = tuple(psi)
        self.memo = {}

    def value(self, t):
        v = self.memo.get(t.enc)
        if v is not None:
            return v
        if t.is_leaf:
            v = self.ops.linear_solve.solve(self.psi)
        else:
            k = len(t.children)
            if (t.label, k) not in self.ops.terms:
                v = self.ops.space.zero()
            else:
                args = tuple(self.value(c) for c in t.children)
                v = self.ops.space.neg(
                    self.ops.linear_solve.solve(self.ops.apply(t.label, k, args))
                )
        self.memo[t.enc] = v
        return v


def solve_tree_sum(ops, psi, order):
    """phi_n as the sum of O_T(psi,...,psi) over all order-n trees.

    Trees whose labels or arities fall outside the operator support are
    pruned.  With a right inverse the aggregated right-hand side of each
    order is image-tested first, exactly as in the recursive strategy.
    """
    space = ops.space
    ls = ops.linear_solve
    ev = TreeEvaluator(ops, psi)
    phi = []
    for n in range(order + 1):
        if not ls.is_exact_inverse:
            rhs = psi if n == 0 else space.neg(_order_rhs(ops, phi, n))
            if not ls.in_image(rhs):
                raise ConsistencyError(
                    "consistency condition fails at order %d" % n, order=n
                )
        acc = space.zero()
        for t in enumerate_T(n, 0, label_cap=ops.max_label, arity_cap=ops.max_arity):
            acc = space.add(acc, ev.value(t))
        phi.append(acc)
    return PerturbativeSolution(space, phi, "tree-sum")


class ConsistencyReport:
    def __init__(self, orders):
        self.orders = tuple(orders)  # (order, passed) pairs

    @property
    def all_ok(self):
        return all(ok for _, ok in self.orders)

    @property
    def first_failure(self):
        for n, ok in self.orders:
            if not ok:
                return n
        return None

    def __repr__(self):
        return "ConsistencyReport(%s)" % (dict(self.orders),)


def check_consistency(ops, psi, order):
    """Image-membership of every order's right-hand side, as data.

    The solution is continued through failing orders (the right inverse
    is total), so the report covers all requested orders.
    """
    space = ops.space
    ls = ops.linear_solve
    phi = []
    results = []
    for n in range(order + 1):
        rhs = psi if n == 0 else space.neg(_order_rhs(ops, phi, n))
        results.append((n, ls.in_image(rhs)))
        phi.append(ls.solve(rhs))
    return ConsistencyReport(results)


def multilinear_from_tensor(space, tensor, k):
    """Multilinear map from a coefficient array:
    out[o] = sum tensor[o][i_1]...[i_k] * args[0][i_1] * ... * args[k-1][i_k]."""
    from itertools import product as iproduct

    dim = space.dim
    flat = {}
    for o in range(dim):
        for idx in iproduct(range(dim), repeat=k):
            c = tensor[o]
            for i in idx:
                c = c[i]
            c = frac(c)
            if c != 0:
                flat[(o,) + idx] = c

    def apply(args):
        out = [Fraction(0)] * dim
        for key, c in flat.items():
            o, idx = key[0], key[1:]
            p = c
            for slot, i in enumerate(idx):
                p *= args[slot][i]
                if p == 0:
                    break
            out[o] += p
        return tuple(out)

    return apply


def solve_polynomial(coefficients, y, order):
    """Perturbative inverse of a_d x^d L^(d-1) + ... + a_2 x^2 L + a_1 x = y.

    Computed twice: by the closed tree formula (zero-label trees with
    valence at most d, each tree contributing
    (-1)^#internal * a_1^-#vertices * prod a_val(v) * y^#leaves) and by
    the recursive solver on the one-dimensional space; exact agreement
    is enforced.
    """
    a = [frac(c) for c in coefficients]
    if not a or a[0] == 0:
        raise InputError("the linear coefficient a_1 must be nonzero")
    d = len(a)
    y = frac(y)

    closed = []
    for n in range(order + 1):
        total = Fraction(0)
        for t in enumerate_T(n, 0, label_cap=0, arity_cap=d):
            nv, ni, nl = tree_stats(t)
            term = Fraction(-1) ** ni * a[0] ** (-nv) * y**nl
            for val, _ in iter_internal(t):
                term *= a[val - 1]
            total += term
        closed.append(total)

    space = RationalSpace(1)
    higher = {
        (0, k): (lambda args, c=a[k - 1]: (c * _prod(args),))
        for k in range(2, d + 1)
    }
    ops = OperatorFamily.from_matrices(space, [[a[0]]], higher)
    rec = solve_recursive(ops, (y,), order)
    recursive = [v[0] for v in rec.coeffs]

    if closed != recursive:
        raise InternalConsistencyError(
            "closed tree formula and recursion disagree: %s vs %s"
            % (closed, recursive)
        )
    return FormalSeries(closed)


def _prod(args):
    p = Fraction(1)
    for v in args:
        p *= v[0]
    return p


class ActionSpec:
    """Action data: multilinear forms Q_{n,k}, a source j and a pairing.

    Q_{0,1} is fixed by the source, Q_{0,1}(v) = -<j, v>, and is not
    part of `forms`.  The operators O_{n,k-1} are recovered from the
    forms through the pairing, which must be symmetric and invertible.
    """

    def __init__(self, space, pairing, j, forms):
        self.space = space
        self.pairing = [[frac(x) for x in row] for row in pairing]
        if not mat_eq(self.pairing, transpose(self.pairing)):
            raise InputError("pairing must be symmetric")
        self.pairing_inv = inverse(self.pairing)  # also checks nondegeneracy
        self.j = space.vector(j)
        for (n, k) in forms:
            if n == 0 and k >= 1 and (n, k) != (0, 1):
                continue
            if n >= 1 and k >= 3:
                continue
            raise InputError("form index (%d, %d) out of range" % (n, k))
        self.forms = dict(forms)

    def pair(self, u, v):
        return sum(x * y for x, y in zip(mat_vec(self.pairing, u), v))

    def q(self, n, k, args):
        if (n, k) == (0, 1):
            return -self.pair(self.j, args[0])
        f = self.forms.get((n, k))
        if f is None:
            return Fraction(0)
        return frac(f(args))

    def q_support(self):
        return sorted(self.forms.keys() | {(0, 1)})

    def operator_family(self):
        """Derived operators: <O_{n,k-1}(args), v> = Q_{n,k}(args, v)."""
        space = self.space

        def derived(n, k):
            def apply(args):
                rhs = [self.q(n, k + 1, args + (space.basis(i),))
                       for i in range(space.dim)]
                return mat_vec(self.pairing_inv, rhs)

            return apply

        higher = {}
        linear_matrix = None
        for (n, k) in self.forms:
            if (n, k) == (0, 2):
                op = derived(0, 1)
                linear_matrix = transpose(
                    [list(op((space.basis(i),))) for i in range(space.dim)]
                )
            elif k >= 2:
                higher[(n, k - 1)] = derived(n, k - 1)
        if linear_matrix is None:
            raise InputError("the quadratic form Q_{0,2} is required")
        return OperatorFamily.from_matrices(space, linear_matrix, higher)


class HierarchyResult:
    """Both evaluations of the on-shell coefficients S_(0)..S_(N)."""

    def __init__(self, tree, direct, weight_mode):
        self.tree = tuple(tree)
        self.direct = tuple(direct)
        self.weight_mode = weight_mode

    @property
    def matches(self):
        return self.tree == self.direct

    def __repr__(self):
        return "HierarchyResult(mode=%s, matches=%s)" % (
            self.weight_mode,
            self.matches,
        )


def onshell_hierarchy(action, order, weight_mode="with-1k"):
    """On-shell coefficients by root-tree sum and by direct substitution.

    Path (a) sums, over root trees of grade n, the form Q_{l,k} applied
    to the tree-evaluated arguments, weighted 1/k at the root in
    "with-1k" mode and unweighted in "literal" mode.  Path (b) solves
    the stationarity equation and expands the action on the solution
    (its own 1/k weights; the (0,1) term is -<j, phi>).  The default
    mode must match path (b) exactly; the literal mode is kept because
    its order-0 value differs and the discrepancy is worth inspecting.
    """
    if weight_mode not in ("with-1k", "literal"):
        raise InputError("weight_mode is 'with-1k' or 'literal'")
    ops = action.operator_family()
    phi = solve_recursive(ops, action.j, order)

    direct = [Fraction(0)] * (order + 1)
    for (n, k) in action.q_support():
        for rest in range(order - n + 1):
            for idx in compositions(rest, k):
                args = tuple(phi[i] for i in idx)
                direct[n + rest] += action.q(n, k, args) / k

    ev = TreeEvaluator(ops, action.j)
    qset = set(action.q_support())
    max_arity = max(k for (_, k) in qset)
    max_q_label = max(n for (n, _) in qset)
    tree = []
    for n in range(order + 1):
        acc = Fraction(0)
        for t in enumerate_R(
            n,
            max_arity,
            label_min=0,
            label_cap=max_q_label,
            child_label_cap=ops.max_label,
            child_arity_cap=ops.max_arity,
        ):
            k = len(t.children)
            if (t.label, k) not in qset:
                continue
            args = tuple(ev.value(c) for c in t.children)
            w = Fraction(1, k) if weight_mode == "with-1k" else Fraction(1)
            acc += w * action.q(t.label, k, args)
        tree.append(acc)
    return HierarchyResult(tree, direct, weight_mode)

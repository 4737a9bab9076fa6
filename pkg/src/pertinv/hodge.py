"""Finite-dimensional Hodge machinery over exact rationals.

A graded complex is a finite list of degrees with differentials
d^i: A^i -> A^{i+1}, d o d = 0, and a symmetric positive-definite inner
product per degree.  From this we derive the adjoint d*, the Laplacian
Delta = d d* + d* d, the orthogonal projector pi onto harmonics,
the Green operator Q (Delta Q + pi = I, Q zero on harmonics, image
orthogonal to them) and G = d* Q.  All identities hold with exact
rational equality; nothing here is numerical.

Elements live in the flattened direct sum of the degrees, so the
generic perturbative solver applies verbatim: the Laplace-type equation
uses Q as the (right) inverse of Delta, the d-type equation uses G as a
right inverse of d on closed elements with no harmonic part.
"""

import random
from fractions import Fraction
from itertools import combinations

from .errors import ConsistencyError, InputError
from .ratlin import (
    frac,
    identity,
    inverse,
    is_positive_definite,
    is_symmetric,
    mat,
    mat_add,
    mat_eq,
    mat_mul,
    mat_sub,
    mat_vec,
    nullspace,
    rank,
    solve,
    transpose,
    zeros,
)
from .solver import OperatorFamily, RationalSpace, solve_tree_sum


class GradedComplex:
    """Degrees, differentials, inner products, optional graded product."""

    def __init__(self, dims, diffs, inners=None, products=None):
        self.dims = tuple(int(d) for d in dims)
        if any(d < 0 for d in self.dims):
            raise InputError("negative dimension")
        if len(diffs) != max(len(self.dims) - 1, 0):
            raise InputError("expected %d differentials" % (len(self.dims) - 1))
        self.diffs = [mat(d) for d in diffs]
        for i, d in enumerate(self.diffs):
            if len(d) != self.dims[i + 1] or any(len(r) != self.dims[i] for r in d):
                raise InputError("differential %d has the wrong shape" % i)
        for i in range(len(self.diffs) - 1):
            if any(x != 0 for row in mat_mul(self.diffs[i + 1], self.diffs[i]) for x in row):
                raise InputError("d o d != 0 between degrees %d and %d" % (i, i + 2))
        if inners is None:
            inners = [identity(d) for d in self.dims]
        self.inners = [mat(m) for m in inners]
        for i, m in enumerate(self.inners):
            if len(m) != self.dims[i]:
                raise InputError("inner product %d has the wrong size" % i)
            if not is_symmetric(m) or not is_positive_definite(m):
                raise InputError("inner product %d is not symmetric positive-definite" % i)
        # products[(p, q)][r][a][b]: coefficient of output basis vector r
        self.products = {} if products is None else dict(products)

        self.offsets = []
        total = 0
        for d in self.dims:
            self.offsets.append(total)
            total += d
        self.total_dim = total

    @property
    def top_degree(self):
        return len(self.dims) - 1

    def zero(self):
        return (Fraction(0),) * self.total_dim

    def embed(self, degree, coeffs):
        """Degree-homogeneous element as a full-space vector."""
        coeffs = tuple(frac(x) for x in coeffs)
        if len(coeffs) != self.dims[degree]:
            raise InputError("expected %d coefficients in degree %d"
                             % (self.dims[degree], degree))
        off = self.offsets[degree]
        v = [Fraction(0)] * self.total_dim
        v[off:off + len(coeffs)] = coeffs
        return tuple(v)

    def component(self, v, degree):
        off = self.offsets[degree]
        return tuple(v[off:off + self.dims[degree]])

    def full_matrix(self, blocks, shift):
        """Assemble per-degree blocks mapping A^i -> A^{i+shift}."""
        m = zeros(self.total_dim, self.total_dim)
        for i, b in blocks.items():
            j = i + shift
            if not (0 <= j < len(self.dims)) or b is None:
                continue
            for r in range(self.dims[j]):
                for c in range(self.dims[i]):
                    m[self.offsets[j] + r][self.offsets[i] + c] = b[r][c]
        return m

    def apply_product(self, p, q, a_coeffs, b_coeffs):
        """Structure-constant product A^p x A^q -> A^{p+q} (degree coords)."""
        c = self.products.get((p, q))
        out_dim = self.dims[p + q] if p + q < len(self.dims) else 0
        if c is None or out_dim == 0:
            return (Fraction(0),) * out_dim
        out = []
        for r in range(out_dim):
            s = Fraction(0)
            for a, xa in enumerate(a_coeffs):
                if xa == 0:
                    continue
                row = c[r][a]
                for b, xb in enumerate(b_coeffs):
                    if xb != 0:
                        s += frac(row[b]) * xa * xb
            out.append(s)
        return tuple(out)


class HodgeData:
    """Derived operators of a graded complex, per degree and assembled."""

    def __init__(self, cx):
        self.complex = cx
        n = len(cx.dims)
        self.adjoints = {}  # i -> matrix A^{i+1} -> A^i, adjoint of diffs[i]
        for i in range(n - 1):
            minv = inverse(cx.inners[i])
            self.adjoints[i] = mat_mul(
                minv, mat_mul(transpose(cx.diffs[i]), cx.inners[i + 1])
            )
        self.laplacians = {}
        for i in range(n):
            lap = zeros(cx.dims[i], cx.dims[i])
            if i < n - 1:
                lap = mat_add(lap, mat_mul(self.adjoints[i], cx.diffs[i]))
            if i > 0:
                lap = mat_add(lap, mat_mul(cx.diffs[i - 1], self.adjoints[i - 1]))
            self.laplacians[i] = lap
        self.harmonic_dims = {}
        self.pis = {}
        self.qs = {}
        for i in range(n):
            lap = self.laplacians[i]
            kern = nullspace(lap)
            self.harmonic_dims[i] = len(kern)
            dim = cx.dims[i]
            if kern:
                k = transpose([list(v) for v in kern])
                gram = mat_mul(transpose(k), mat_mul(cx.inners[i], k))
                pi = mat_mul(k, mat_mul(inverse(gram), mat_mul(transpose(k), cx.inners[i])))
            else:
                pi = zeros(dim, dim)
            self.pis[i] = pi
            comp = mat_sub(identity(dim), pi)
            q_cols = []
            for col in transpose(comp):
                x = solve(lap, col)
                if x is None:
                    raise InputError("Laplacian image does not cover the co-harmonics")
                x = tuple(a - b for a, b in zip(x, mat_vec(pi, x)))
                q_cols.append(list(x))
            q = mat_mul(transpose(q_cols), comp) if q_cols else zeros(dim, dim)
            self.qs[i] = q
        self.greens = {}  # G_i = d*_{i-1} Q_i : A^i -> A^{i-1}; none in degree 0
        for i in range(1, n):
            self.greens[i] = mat_mul(self.adjoints[i - 1], self.qs[i])
        self.d_full = cx.full_matrix({i: cx.diffs[i] for i in range(n - 1)}, 1)
        self.adjoint_full = cx.full_matrix(
            {i + 1: a for i, a in self.adjoints.items()}, -1
        )
        self.delta_full = cx.full_matrix(dict(self.laplacians), 0)
        self.pi_full = cx.full_matrix(dict(self.pis), 0)
        self.q_full = cx.full_matrix(dict(self.qs), 0)
        self.g_full = cx.full_matrix(dict(self.greens), -1)

    def apply_d(self, v):
        return mat_vec(self.d_full, v)

    def apply_delta(self, v):
        return mat_vec(self.delta_full, v)

    def apply_pi(self, v):
        return mat_vec(self.pi_full, v)

    def apply_q(self, v):
        return mat_vec(self.q_full, v)

    def apply_g(self, v):
        return mat_vec(self.g_full, v)

    def check_identities(self):
        """Exact identity checks per degree; all booleans must be True."""
        cx = self.complex
        n = len(cx.dims)
        out = {}
        for i in range(n):
            dim = cx.dims[i]
            ident = identity(dim)
            pi, q, lap = self.pis[i], self.qs[i], self.laplacians[i]
            out[("delta_q_pi", i)] = mat_eq(mat_add(mat_mul(lap, q), pi), ident)
            gd = zeros(dim, dim)
            if i < n - 1:
                gd = mat_mul(self.greens[i + 1], cx.diffs[i])
            dg = zeros(dim, dim)
            if i > 0:
                dg = mat_mul(cx.diffs[i - 1], self.greens[i])
            out[("g_d_pi", i)] = mat_eq(mat_add(mat_add(gd, dg), pi), ident)
            out[("pi_projector", i)] = mat_eq(mat_mul(pi, pi), pi)
            # pi self-adjoint for the inner product: M pi = pi^T M
            m = cx.inners[i]
            out[("pi_selfadjoint", i)] = mat_eq(mat_mul(m, pi), mat_mul(transpose(pi), m))
            # adjoint property <d a, b> = <a, d* b> as a matrix identity
            if i < n - 1:
                lhs = mat_mul(transpose(cx.diffs[i]), cx.inners[i + 1])
                rhs = mat_mul(cx.inners[i], self.adjoints[i])
                out[("adjoint", i)] = mat_eq(lhs, rhs)
            # harmonic dimension equals the Betti number of the complex
            ker = cx.dims[i] - (rank(cx.diffs[i]) if i < n - 1 else 0)
            im = rank(cx.diffs[i - 1]) if i > 0 else 0
            out[("betti", i)] = self.harmonic_dims[i] == ker - im
        return out


def build_hodge(cx):
    """All derived Hodge operators; complex invariants were checked at
    construction, the derived identities are checked here."""
    h = HodgeData(cx)
    checks = h.check_identities()
    if not all(checks.values()):
        failing = [k for k, v in checks.items() if not v]
        raise InputError("Hodge identities failed: %s" % failing)
    return h


class _OperatorSolve:
    """Linear-solve adapter: apply a fixed matrix, test membership."""

    is_exact_inverse = False

    def __init__(self, matrix, image_test):
        self.matrix = matrix
        self.image_test = image_test

    def solve(self, v):
        return mat_vec(self.matrix, v)

    def in_image(self, v):
        return self.image_test(v)


def _as_hodge(cx_or_h):
    return cx_or_h if isinstance(cx_or_h, HodgeData) else build_hodge(cx_or_h)


def solve_laplace(cx_or_h, ops, b, order):
    """Tree solution of Delta(a) + sum O_{n,k}(a,..,a) L^(n+k-1) = b.

    b is given in degree-1 coordinates; requires vanishing degree-1
    harmonics, which makes Q an exact inverse of Delta on A^1.
    """
    h = _as_hodge(cx_or_h)
    cx = h.complex
    if h.harmonic_dims.get(1, 0) != 0:
        raise ConsistencyError("degree-1 harmonics obstruct the Laplace solve")
    b_full = cx.embed(1, b)
    space = RationalSpace(cx.total_dim)
    terms = dict(ops)
    terms[(0, 1)] = lambda args: h.apply_delta(args[0])
    ls = _OperatorSolve(h.q_full, lambda v: all(x == 0 for x in h.apply_pi(v)))
    family = OperatorFamily(space, terms, ls)
    return solve_tree_sum(family, b_full, order), family


def solve_d(cx_or_h, ops, b, order, check_ops=True, samples=12, seed=0):
    """Tree solution of d(a) + sum O_{n,k}(a,..,a) L^(n+k-1) = b.

    b is given in degree-2 coordinates and must be closed; requires
    vanishing degree-2 harmonics so that G is a right inverse of d
    there.  Unless waived, the operators are screened with the Leibnitz
    and quadratic-relation checks first.
    """
    h = _as_hodge(cx_or_h)
    cx = h.complex
    if h.harmonic_dims.get(2, 0) != 0:
        raise ConsistencyError("degree-2 harmonics obstruct the d-solve")
    b_full = cx.embed(2, b)
    if any(x != 0 for x in h.apply_d(b_full)):
        raise ConsistencyError("right-hand side is not closed")
    if check_ops:
        rep = check_leibnitz(h, ops, samples=samples, seed=seed)
        if not rep.ok:
            raise InputError("operators violate the Leibnitz rule (defect %s)"
                             % rep.max_defect)
        rep = check_quadratic(h, ops, samples=samples, seed=seed)
        if not rep.ok:
            raise InputError("operators violate the quadratic relations (defect %s)"
                             % rep.max_defect)
    space = RationalSpace(cx.total_dim)
    terms = dict(ops)
    terms[(0, 1)] = lambda args: h.apply_d(args[0])
    ls = _OperatorSolve(
        h.g_full,
        lambda v: all(x == 0 for x in h.apply_d(v))
        and all(x == 0 for x in h.apply_pi(v)),
    )
    family = OperatorFamily(space, terms, ls)
    return solve_tree_sum(family, b_full, order), family


class DefectReport:
    def __init__(self, max_defect, samples):
        self.max_defect = max_defect
        self.samples = samples

    @property
    def ok(self):
        return self.max_defect == 0

    def __repr__(self):
        return "DefectReport(max_defect=%s, samples=%d)" % (self.max_defect, self.samples)


def _random_homogeneous(cx, degree, rng):
    return cx.embed(degree, [Fraction(rng.randint(-3, 3)) for _ in range(cx.dims[degree])])


def _degree_of(cx, v):
    degs = [i for i in range(len(cx.dims))
            if any(x != 0 for x in cx.component(v, i))]
    return degs[0] if len(degs) == 1 else None


def check_leibnitz(cx_or_h, ops, samples=20, seed=0):
    """Defect of d O(a_1..a_k) - sum_i (-1)^(deg a_1+..+deg a_{i-1})
    O(a_1,..,d a_i,..,a_k) on random homogeneous tuples; 0 passes."""
    h = _as_hodge(cx_or_h)
    cx = h.complex
    rng = random.Random(seed)
    max_defect = Fraction(0)
    count = 0
    keys = sorted(ops.keys())
    if not keys:
        return DefectReport(Fraction(0), 0)
    for _ in range(samples):
        n, k = keys[rng.randrange(len(keys))]
        degrees = [rng.randrange(len(cx.dims)) for _ in range(k)]
        args = tuple(_random_homogeneous(cx, d, rng) for d in degrees)
        lhs = h.apply_d(ops[(n, k)](args))
        rhs = cx.zero()
        for i in range(k):
            sign = (-1) ** (sum(degrees[:i]) % 2)
            modified = args[:i] + (h.apply_d(args[i]),) + args[i + 1:]
            term = ops[(n, k)](modified)
            rhs = tuple(r + sign * t for r, t in zip(rhs, term))
        defect = max((abs(a - b) for a, b in zip(lhs, rhs)), default=Fraction(0))
        max_defect = max(max_defect, defect)
        count += 1
    return DefectReport(max_defect, count)


def check_quadratic(cx_or_h, ops, samples=20, seed=0, degrees=None):
    """Defect of the quadratic relations
    sum_{k+l=t+1} sum_i +- O_{n,k}(a_1,..,O_{m,l}(a_i,..),..,a_t) = 0
    on random homogeneous tuples (degree 1 by default, the degree the
    d-equation solver feeds them)."""
    h = _as_hodge(cx_or_h)
    cx = h.complex
    rng = random.Random(seed)
    labels = sorted({n for (n, _) in ops})
    arities = sorted({k for (_, k) in ops})
    if not arities:
        return DefectReport(Fraction(0), 0)
    max_defect = Fraction(0)
    count = 0
    t_values = sorted({k + l - 1 for k in arities for l in arities})
    for _ in range(samples):
        t = t_values[rng.randrange(len(t_values))]
        degs = list(degrees) if degrees is not None else [1] * t
        args = tuple(_random_homogeneous(cx, d, rng) for d in degs)
        for n in labels:
            for m in labels:
                acc = cx.zero()
                for k in arities:
                    l = t + 1 - k
                    if (n, k) not in ops or (m, l) not in ops:
                        continue
                    for i in range(t - l + 1):
                        inner = ops[(m, l)](args[i:i + l])
                        outer_args = args[:i] + (inner,) + args[i + l:]
                        sign = (-1) ** (sum(degs[:i]) % 2)
                        term = ops[(n, k)](outer_args)
                        acc = tuple(a + sign * x for a, x in zip(acc, term))
                defect = max((abs(x) for x in acc), default=Fraction(0))
                max_defect = max(max_defect, defect)
                count += 1
    return DefectReport(max_defect, count)


def cup_operator(cx):
    """The graded product of the complex as a bilinear full-space map."""
    if not cx.products:
        raise InputError("complex carries no product structure")

    def apply(args):
        u, v = args
        out = list(cx.zero())
        for (p, q) in cx.products:
            if p + q >= len(cx.dims):
                continue
            res = cx.apply_product(p, q, cx.component(u, p), cx.component(v, q))
            off = cx.offsets[p + q]
            for r, x in enumerate(res):
                out[off + r] += x
        return tuple(out)

    return apply


def simplicial_cochain_complex(top_simplices):
    """Cochain complex of a simplicial complex with the standard
    front/back cup product; simplices are given by vertex tuples."""
    by_dim = {}
    for s in top_simplices:
        s = tuple(sorted(s))
        if len(set(s)) != len(s):
            raise InputError("degenerate simplex %r" % (s,))
        for r in range(1, len(s) + 1):
            for face in combinations(s, r):
                by_dim.setdefault(r - 1, set()).add(face)
    max_dim = max(by_dim)
    simplices = [sorted(by_dim.get(d, ())) for d in range(max_dim + 1)]
    index = [{s: i for i, s in enumerate(level)} for level in simplices]
    dims = [len(level) for level in simplices]

    diffs = []
    for p in range(max_dim):
        d = zeros(dims[p + 1], dims[p])
        for r, tau in enumerate(simplices[p + 1]):
            for j in range(len(tau)):
                face = tau[:j] + tau[j + 1:]
                d[r][index[p][face]] = Fraction((-1) ** j)
        diffs.append(d)

    products = {}
    for p in range(max_dim + 1):
        for q in range(max_dim + 1 - p):
            c = [
                [[Fraction(0)] * dims[q] for _ in range(dims[p])]
                for _ in range(dims[p + q])
            ]
            for r, s in enumerate(simplices[p + q]):
                front = s[: p + 1]
                back = s[p:]
                a = index[p].get(front)
                b = index[q].get(back)
                if a is not None and b is not None:
                    c[r][a][b] = Fraction(1)
            products[(p, q)] = c
    return GradedComplex(dims, diffs, products=products)


def interval_complex():
    return simplicial_cochain_complex([(0, 1)])


def circle_complex(n=4):
    if n < 3:
        raise InputError("a simplicial circle needs at least 3 vertices")
    return simplicial_cochain_complex([(i, (i + 1) % n) for i in range(n)])


def triangle_complex():
    """The filled triangle: contractible with a nontrivial cup product."""
    return simplicial_cochain_complex([(0, 1, 2)])


def torus_complex():
    """Seven-vertex triangulation of the 2-torus."""
    faces = [(i, (i + 1) % 7, (i + 3) % 7) for i in range(7)]
    faces += [(i, (i + 2) % 7, (i + 3) % 7) for i in range(7)]
    return simplicial_cochain_complex(faces)

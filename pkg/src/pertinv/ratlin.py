"""Dense exact linear algebra over Fraction.

Matrices are lists of lists, vectors are tuples.  Everything here is
small (fixture-sized), so plain Gaussian elimination is fine; the point
is exactness, not speed.
"""

from fractions import Fraction

from .errors import InputError


def frac(x):
    return x if isinstance(x, Fraction) else Fraction(x)


def mat(rows):
    return [[frac(x) for x in row] for row in rows]


def identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(r, c):
    return [[Fraction(0)] * c for _ in range(r)]


def transpose(a):
    return [list(col) for col in zip(*a)] if a else []


def mat_mul(a, b):
    if not a or not b:
        return []
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(a, v):
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_eq(a, b):
    return len(a) == len(b) and all(ra == rb for ra, rb in zip(a, b))


def vadd(u, v):
    return tuple(x + y for x, y in zip(u, v))


def vsub(u, v):
    return tuple(x - y for x, y in zip(u, v))


def vneg(u):
    return tuple(-x for x in u)


def vscale(c, u):
    return tuple(c * x for x in u)


def vdot(u, v):
    return sum(x * y for x, y in zip(u, v))


def vzero(n):
    return (Fraction(0),) * n


def rref(a):
    """Reduced row echelon form; returns (matrix, pivot column list)."""
    m = [row[:] for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(a):
    return len(rref(a)[1])


def solve(a, b):
    """One exact solution of a x = b (free variables set to 0), or None."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    aug = [list(row) + [frac(x)] for row, x in zip(a, b)]
    m, pivots = rref(aug)
    if cols in pivots:  # pivot in the rhs column: inconsistent
        return None
    x = [Fraction(0)] * cols
    for r, c in enumerate(pivots):
        x[c] = m[r][cols]
    return tuple(x)


def solve_matrix(a, b):
    """Solve a X = b columnwise; raises if any column is inconsistent."""
    cols = transpose(b)
    xs = []
    for col in cols:
        x = solve(a, col)
        if x is None:
            raise InputError("linear system inconsistent")
        xs.append(list(x))
    return transpose(xs)


def inverse(a):
    n = len(a)
    aug = [list(row) + ident_row for row, ident_row in zip(mat(a), identity(n))]
    m, pivots = rref(aug)
    if pivots != list(range(n)):
        raise InputError("matrix is singular")
    return [row[n:] for row in m]


def nullspace(a):
    """Basis of the kernel as a list of tuples (free variables set to 1)."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    m, pivots = rref(a)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -m[r][f]
        basis.append(tuple(v))
    return basis


def in_image(a, b):
    return solve(a, b) is not None


def is_symmetric(a):
    return mat_eq(a, transpose(a))


def is_positive_definite(a):
    """Symmetric positive definiteness via exact pivots (no row swaps)."""
    if not is_symmetric(a):
        return False
    m = mat(a)
    n = len(m)
    for k in range(n):
        if m[k][k] <= 0:
            return False
        for i in range(k + 1, n):
            f = m[i][k] / m[k][k]
            m[i] = [x - f * y for x, y in zip(m[i], m[k])]
    return True

"""Discrete BF theory on configurations of points on the real line.

Fields are tuples of step functions f_1..f_n, the external data is a
configuration of n distinct points, and the action is

    sum_{i<j} integral f_i f_j' dx  -  sum_i f_i(x_i).

The stationarity condition reads A f = theta with A_{ij} = sg(j - i)
and theta_i the unit step at x_i; A is invertible exactly when n is
even.  The closed-form on-shell value

    sum_{i<j, k, s} (-1)^(|i-k| + |j-s|) theta_{x_s}(x_k)

depends only on order comparisons between the points, which is what
makes it invariant under strictly increasing reparametrizations of the
line.  The value of a step at its own jump is not canonical; the
midpoint convention is the default and the two one-sided conventions
stay selectable.
"""

from bisect import bisect_left
from fractions import Fraction

from .errors import InputError
from .ratlin import frac, identity, inverse, mat_mul, mat_vec, nullspace, solve, transpose, zeros


class Configuration:
    """Distinct marked points; order is not assumed."""

    def __init__(self, points):
        self.points = tuple(frac(x) for x in points)
        if len(set(self.points)) != len(self.points):
            raise InputError("configuration points must be pairwise distinct")

    @property
    def n(self):
        return len(self.points)

    def __repr__(self):
        return "Configuration(%s)" % (self.points,)


class StepFunction:
    """Piecewise-constant function with finitely many rational jumps.

    values[i] is the value between jumps[i-1] and jumps[i]; at a jump
    point the function takes the midpoint value (left + right) / 2.
    """

    __slots__ = ("jumps", "values")

    def __init__(self, jumps, values):
        jumps = tuple(frac(x) for x in jumps)
        values = tuple(frac(v) for v in values)
        if len(values) != len(jumps) + 1:
            raise InputError("need one more value than jump points")
        if any(a >= b for a, b in zip(jumps, jumps[1:])):
            raise InputError("jump points must be strictly increasing")
        # normalize: drop jumps with no actual value change
        keep_j, keep_v = [], [values[0]]
        for p, v in zip(jumps, values[1:]):
            if v != keep_v[-1]:
                keep_j.append(p)
                keep_v.append(v)
        self.jumps = tuple(keep_j)
        self.values = tuple(keep_v)

    @classmethod
    def theta(cls, x):
        """Unit step jumping at x."""
        return cls((x,), (0, 1))

    @classmethod
    def constant(cls, c):
        return cls((), (c,))

    def value_at(self, x):
        x = frac(x)
        i = bisect_left(self.jumps, x)
        if i < len(self.jumps) and self.jumps[i] == x:
            return (self.values[i] + self.values[i + 1]) / 2
        return self.values[i]

    def jump_list(self):
        """(point, jump magnitude) pairs; the derivative as a measure."""
        return [
            (p, self.values[i + 1] - self.values[i])
            for i, p in enumerate(self.jumps)
        ]

    def __add__(self, other):
        points = sorted(set(self.jumps) | set(other.jumps))
        vals = [self.values[0] + other.values[0]]
        for p in points:
            vals.append(self._right_value(p) + other._right_value(p))
        return StepFunction(points, vals)

    def _right_value(self, p):
        i = bisect_left(self.jumps, p)
        if i < len(self.jumps) and self.jumps[i] == p:
            return self.values[i + 1]
        return self.values[i]

    def scale(self, c):
        c = frac(c)
        return StepFunction(self.jumps, tuple(c * v for v in self.values))

    def __neg__(self):
        return self.scale(-1)

    def __eq__(self, other):
        return (
            isinstance(other, StepFunction)
            and self.jumps == other.jumps
            and self.values == other.values
        )

    def __repr__(self):
        return "StepFunction(jumps=%s, values=%s)" % (self.jumps, self.values)


def sg(x):
    return 1 if x > 0 else (-1 if x < 0 else 0)


def matrix_A(n):
    """A_{ij} = sg(j - i); the equation-of-motion matrix."""
    if n < 1:
        raise InputError("n must be positive")
    return [[Fraction(sg(j - i)) for j in range(n)] for i in range(n)]


def matrix_B(n):
    """B_{ij} = (-1)^|i - j|; the candidate inverse quoted for A."""
    if n < 1:
        raise InputError("n must be positive")
    return [[Fraction((-1) ** abs(i - j)) for j in range(n)] for i in range(n)]


_THETA_AT_JUMP = {
    "half": Fraction(1, 2),
    "zero": Fraction(0),
    "one": Fraction(1),
}


def _theta(x_jump, y, at_jump):
    if y > x_jump:
        return Fraction(1)
    if y < x_jump:
        return Fraction(0)
    return at_jump


def s_os_closed(config, theta_at_jump="half"):
    """Direct evaluation of the closed on-shell sum.

    Only the comparisons x_k vs x_s enter (plus the chosen convention on
    the diagonal k = s), so the value is an order invariant of the
    configuration.
    """
    at_jump = _THETA_AT_JUMP[theta_at_jump]
    x = config.points
    n = config.n
    total = Fraction(0)
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                for s in range(n):
                    sign = (-1) ** (abs(i - k) + abs(j - s))
                    total += sign * _theta(x[s], x[k], at_jump)
    return total


def integral_f_dg(f, g):
    """integral f g' as a sum over the jumps of g, with the midpoint
    value of f at coinciding jump locations."""
    return sum((delta * f.value_at(p) for p, delta in g.jump_list()), Fraction(0))


def action_eval(fs, config):
    """sum_{i<j} integral f_i f_j' - sum_i f_i(x_i)."""
    if len(fs) != config.n:
        raise InputError("need one field per marked point")
    total = Fraction(0)
    for i in range(config.n):
        for j in range(i + 1, config.n):
            total += integral_f_dg(fs[i], fs[j])
    for i, f in enumerate(fs):
        total -= f.value_at(config.points[i])
    return total


def fields_from_coeffs(config, coeff_matrix):
    """Fields f_i = sum_m C[i][m] * theta_{x_m} (integration constants 0)."""
    thetas = [StepFunction.theta(x) for x in config.points]
    fields = []
    for row in coeff_matrix:
        f = StepFunction.constant(0)
        for c, th in zip(row, thetas):
            f = f + th.scale(c)
        fields.append(f)
    return tuple(fields)


class EomSolution:
    """Best step-function solution of A f = theta and its obstruction.

    coeff_matrix C solves A C = S - R exactly, where S is the requested
    source and R is the orthogonal projection of S onto the cokernel
    (zero exactly when n is even, where A is invertible).
    """

    def __init__(self, config, coeff_matrix, residual_matrix, kernel):
        self.config = config
        self.coeff_matrix = coeff_matrix
        self.residual_matrix = residual_matrix
        self.kernel = kernel
        self.fields = fields_from_coeffs(config, coeff_matrix)

    @property
    def residual_zero(self):
        return all(x == 0 for row in self.residual_matrix for x in row)


def solve_eom(config, source=None):
    """Solve the stationarity system for coefficient matrices.

    source[i][m] is the theta_{x_m} coefficient demanded on the right of
    equation i; the default is the identity (the actual equations of
    motion).  Odd n leaves a rank-one unresolvable component, which is
    reported rather than hidden.
    """
    n = config.n
    a = matrix_A(n)
    s = identity(n) if source is None else [[frac(x) for x in row] for row in source]
    kernel = nullspace(a)
    if kernel:
        k = transpose([list(v) for v in kernel])
        gram = mat_mul(transpose(k), k)
        proj = mat_mul(k, mat_mul(inverse(gram), transpose(k)))
        residual = mat_mul(proj, s)
    else:
        residual = zeros(n, n)
    target = [[x - r for x, r in zip(row, rrow)] for row, rrow in zip(s, residual)]
    cols = []
    for col in transpose(target):
        x = solve(a, col)
        if x is None:
            raise InputError("projected source left the image of A")
        cols.append(list(x))
    coeff = transpose(cols)
    return EomSolution(config, coeff, residual, kernel)


class PiecewiseLinearMap:
    """Strictly increasing piecewise-linear map of the line.

    breakpoints are where the slope changes; anchor is the value taken
    at the first breakpoint.  All slopes must be positive.
    """

    def __init__(self, breakpoints, slopes, anchor=0):
        self.breakpoints = tuple(frac(b) for b in breakpoints)
        self.slopes = tuple(frac(s) for s in slopes)
        self.anchor = frac(anchor)
        if not self.breakpoints:
            raise InputError("need at least one breakpoint to anchor the map")
        if len(self.slopes) != len(self.breakpoints) + 1:
            raise InputError("need one more slope than breakpoints")
        if any(b >= c for b, c in zip(self.breakpoints, self.breakpoints[1:])):
            raise InputError("breakpoints must be strictly increasing")
        if any(s <= 0 for s in self.slopes):
            raise InputError("slopes must be positive for monotonicity")

    @classmethod
    def identity(cls):
        return cls((0,), (1, 1), 0)

    def __call__(self, x):
        x = frac(x)
        bs = self.breakpoints
        if x <= bs[0]:
            return self.anchor + self.slopes[0] * (x - bs[0])
        y = self.anchor
        for i in range(len(bs) - 1):
            if x <= bs[i + 1]:
                return y + self.slopes[i + 1] * (x - bs[i])
            y += self.slopes[i + 1] * (bs[i + 1] - bs[i])
        return y + self.slopes[-1] * (x - bs[-1])

    def apply_config(self, config):
        return Configuration([self(x) for x in config.points])


class InvarianceReport:
    def __init__(self, base_value, mapped_values):
        self.base_value = base_value
        self.mapped_values = tuple(mapped_values)

    @property
    def all_ok(self):
        return all(v == self.base_value for v in self.mapped_values)

    @property
    def violations(self):
        return [
            (i, v)
            for i, v in enumerate(self.mapped_values)
            if v != self.base_value
        ]

    def __repr__(self):
        return "InvarianceReport(base=%s, ok=%s)" % (self.base_value, self.all_ok)


def invariance_test(config, maps, theta_at_jump="half"):
    """Exact equality of the on-shell sum along the orbit of the maps."""
    base = s_os_closed(config, theta_at_jump)
    mapped = [
        s_os_closed(m.apply_config(config), theta_at_jump) for m in maps
    ]
    return InvarianceReport(base, mapped)


def random_increasing_map(rng, segments=5, span=10):
    """Random strictly increasing piecewise-linear map with rational data."""
    breaks = sorted(
        rng.sample(range(-span, span + 1), k=max(segments - 1, 1))
    )
    breaks = [Fraction(b) for b in breaks]
    slopes = [
        Fraction(rng.randint(1, 8), rng.randint(1, 8))
        for _ in range(len(breaks) + 1)
    ]
    anchor = Fraction(rng.randint(-span, span))
    return PiecewiseLinearMap(breaks, slopes, anchor)

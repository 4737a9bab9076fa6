"""Truncated formal power series over exact rationals.

Every value carries an explicit truncation order N and stores the
coefficients of L^0 .. L^N (L is the deformation parameter).  All
arithmetic is exact; floats never enter.  Mixing truncation orders is a
contract violation, not a silent truncation.
"""

from fractions import Fraction

from .errors import InputError
from .ratlin import frac


class FormalSeries:
    """Coefficients c_0..c_N of a series truncated at order N."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = tuple(frac(c) for c in coeffs)
        if not self.coeffs:
            raise InputError("series needs at least the constant term")

    @classmethod
    def zero(cls, order):
        return cls((Fraction(0),) * (order + 1))

    @classmethod
    def one(cls, order):
        return cls((Fraction(1),) + (Fraction(0),) * order)

    @classmethod
    def constant(cls, c, order):
        return cls((frac(c),) + (Fraction(0),) * order)

    @property
    def order(self):
        return len(self.coeffs) - 1

    def _same_order(self, other):
        if self.order != other.order:
            raise InputError(
                "truncation orders differ (%d vs %d)" % (self.order, other.order)
            )

    def __eq__(self, other):
        return isinstance(other, FormalSeries) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        self._same_order(other)
        return FormalSeries(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._same_order(other)
        return FormalSeries(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return FormalSeries(tuple(-a for a in self.coeffs))

    def scale(self, c):
        c = frac(c)
        return FormalSeries(tuple(c * a for a in self.coeffs))

    def __mul__(self, other):
        if not isinstance(other, FormalSeries):
            return self.scale(other)
        return series_mul(self, other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k):
        if k < 0:
            raise InputError("negative powers not supported")
        out = FormalSeries.one(self.order)
        for _ in range(k):
            out = out * self
        return out

    def shift(self, k):
        """Multiply by L^k, truncating at the same order."""
        n = self.order
        return FormalSeries(
            (Fraction(0),) * min(k, n + 1) + self.coeffs[: max(n + 1 - k, 0)]
        )

    def __getitem__(self, i):
        return self.coeffs[i]

    def __str__(self):
        parts = [str(self.coeffs[0])]
        for i, c in enumerate(self.coeffs[1:], start=1):
            parts.append("%s*L" % c if i == 1 else "%s*L^%d" % (c, i))
        return " + ".join(parts)

    def __repr__(self):
        return "FormalSeries(%r)" % (self.coeffs,)


def series_mul(a, b):
    """Cauchy product truncated at the common order."""
    a._same_order(b)
    n = a.order
    out = [Fraction(0)] * (n + 1)
    for i, ca in enumerate(a.coeffs):
        if ca == 0:
            continue
        for j in range(n + 1 - i):
            cb = b.coeffs[j]
            if cb != 0:
                out[i + j] += ca * cb
    return FormalSeries(out)


def fixed_point(update, order):
    """Unique series x = update(x) through the given order.

    update must gain at least one order of L-valuation per application
    (coefficient n of the output may depend only on coefficients < n of
    the input); iterating from 0 then converges in order+1 steps, and a
    non-converged result exposes a contract breach.
    """
    x = FormalSeries.zero(order)
    for _ in range(order + 2):
        x = update(x)
    if update(x) != x:
        raise InputError("update map is not an L-adic contraction")
    return x


def compositions(total, k):
    """All k-tuples of non-negative integers summing to total."""
    if k == 0:
        if total == 0:
            yield ()
        return
    if k == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, k - 1):
            yield (first,) + rest


class VectorSeries:
    """Series with coefficients in a caller-supplied vector space."""

    __slots__ = ("space", "coeffs")

    def __init__(self, space, coeffs):
        self.space = space
        self.coeffs = tuple(coeffs)

    @classmethod
    def zero(cls, space, order):
        return cls(space, (space.zero(),) * (order + 1))

    @property
    def order(self):
        return len(self.coeffs) - 1

    def __getitem__(self, i):
        return self.coeffs[i]

    def __eq__(self, other):
        return (
            isinstance(other, VectorSeries)
            and self.order == other.order
            and all(
                self.space.eq(a, b) for a, b in zip(self.coeffs, other.coeffs)
            )
        )

    def __repr__(self):
        return "VectorSeries(order=%d, coeffs=%r)" % (self.order, self.coeffs)


def substitute_series(ops, phi, order):
    """Left-hand side Sum O_{n,k}(phi,...,phi) L^{n+k-1} through `order`.

    Includes the linear term (0,1).  Coefficient m of the result collects
    all (n, k, i_1..i_k) with n + k - 1 + sum(i_s) = m.  This is the
    residual oracle: substituting a perturbative solution must return the
    source at L^0 and zero above.
    """
    if phi.order < order:
        raise InputError("phi truncated below the requested order")
    space = phi.space
    out = [space.zero() for _ in range(order + 1)]
    for n, k in ops.support():
        base = n + k - 1
        if base > order:
            continue
        for extra in range(order - base + 1):
            for idx in compositions(extra, k):
                args = tuple(phi[i] for i in idx)
                out[base + extra] = space.add(out[base + extra], ops.apply(n, k, args))
    return VectorSeries(space, out)

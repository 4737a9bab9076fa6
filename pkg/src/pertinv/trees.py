"""Labelled planar rooted trees indexing the perturbative expansions.

A tree is either the single leaf or an internal root carrying a natural
number label and an ordered tuple of subtrees.  The trees of order n
(every internal vertex of valence >= 2) are generated by the recursion

    T_n = { (T_1,...,T_k)_l : k >= 2, T_s in T_{i_s},
                              n = i_1 + ... + i_k + k + l - 1 }
    T_0 = { leaf }

which keeps everything finite even with unbounded labels and arities.
Root trees (the index set of the on-shell hierarchy) relax the valence
constraint at the root and grade by label + subtree orders only.

Counting doubles as a consistency oracle: the order-generating series of
the zero-label trees satisfies x = 1 + sum_{k>=2} x^k L^{k-1} (the
super-Catalan numbers 1, 1, 3, 11, 45, ...), and the labelled variants
satisfy the analogous equations with a geometric label factor.
"""

from fractions import Fraction
from functools import lru_cache
from itertools import product

from .errors import InputError, InternalConsistencyError
from .series import FormalSeries, compositions, fixed_point


class LabeledTree:
    """Planar rooted tree; leaf iff children == ().  Immutable."""

    __slots__ = ("label", "children", "enc", "order")

    def __init__(self, label=0, children=()):
        children = tuple(children)
        if label < 0:
            raise InputError("labels are natural numbers")
        if not children:
            if label != 0:
                raise InputError("a leaf carries no label")
            enc = b"*"
            order = 0
        else:
            enc = b"(%d: %s)" % (label, b" ".join(c.enc for c in children))
            order = sum(c.order for c in children) + len(children) + label - 1
        self.label = label
        self.children = children
        self.enc = enc
        self.order = order

    @property
    def is_leaf(self):
        return not self.children

    def __eq__(self, other):
        return isinstance(other, LabeledTree) and self.enc == other.enc

    def __hash__(self):
        return hash(self.enc)

    def __repr__(self):
        return "LabeledTree<%s>" % self.enc.decode()


LEAF = LabeledTree()


class RootTree:
    """Tree whose root valence may be 1 (when the root label is 0)."""

    __slots__ = ("label", "children", "enc", "order")

    def __init__(self, label, children):
        children = tuple(children)
        if label < 0:
            raise InputError("labels are natural numbers")
        if label == 0 and len(children) < 1:
            raise InputError("root with label 0 needs at least one subtree")
        if label >= 1 and len(children) < 2:
            raise InputError("root with label >= 1 needs at least two subtrees")
        self.label = label
        self.children = children
        self.enc = b"[%d: %s]" % (label, b" ".join(c.enc for c in children))
        self.order = sum(c.order for c in children) + label

    def __eq__(self, other):
        return isinstance(other, RootTree) and self.enc == other.enc

    def __hash__(self):
        return hash(self.enc)

    def __repr__(self):
        return "RootTree<%s>" % self.enc.decode()


def canonical_encode(t):
    """Injective byte encoding; also the serialization text form."""
    return t.enc


def tree_to_text(t):
    return t.enc.decode()


def tree_stats(t):
    """(vertex count, internal vertex count, leaf count)."""
    if t.is_leaf:
        return (1, 0, 1)
    nv, ni, nl = 1, 1, 0
    for c in t.children:
        cv, ci, cl = tree_stats(c)
        nv += cv
        ni += ci
        nl += cl
    return (nv, ni, nl)


def iter_internal(t):
    """Yield (valence, label) over internal vertices, preorder."""
    if not t.is_leaf:
        yield (len(t.children), t.label)
        for c in t.children:
            yield from iter_internal(c)


def order_from_definition(t):
    """sum over internal vertices of (val + label), minus their count."""
    total = 0
    count = 0
    for val, lbl in iter_internal(t):
        total += val + lbl
        count += 1
    return total - count


@lru_cache(maxsize=None)
def _enum_t(n, label_min, label_cap, arity_cap):
    found = []
    if n == 0:
        found.append(LEAF)
    max_k = n + 1 - label_min
    if arity_cap is not None:
        max_k = min(max_k, arity_cap)
    for k in range(2, max_k + 1):
        max_l = n + 1 - k
        if label_cap is not None:
            max_l = min(max_l, label_cap)
        for l in range(label_min, max_l + 1):
            rest = n - k - l + 1
            for idx in compositions(rest, k):
                pools = [_enum_t(i, label_min, label_cap, arity_cap) for i in idx]
                for combo in product(*pools):
                    found.append(LabeledTree(l, combo))
    found.sort(key=lambda t: t.enc)
    return tuple(found)


def enumerate_T(n, label_min=0, label_cap=None, arity_cap=None):
    """All order-n trees with labels in [label_min, label_cap] and
    valences bounded by arity_cap (None = unbounded), sorted by encoding."""
    if n < 0:
        raise InputError("order must be a natural number")
    if label_min < 0:
        raise InputError("label_min must be a natural number")
    return _enum_t(n, label_min, label_cap, arity_cap)


@lru_cache(maxsize=None)
def _enum_r(n, max_arity, label_min, label_cap, child_label_cap, child_arity_cap):
    found = []
    max_l = n
    if label_cap is not None:
        max_l = min(max_l, label_cap)
    for l in range(label_min, max_l + 1):
        k_min = 1 if l == 0 else 2
        for k in range(k_min, max_arity + 1):
            for idx in compositions(n - l, k):
                pools = [
                    _enum_t(i, label_min, child_label_cap, child_arity_cap)
                    for i in idx
                ]
                for combo in product(*pools):
                    found.append(RootTree(l, combo))
    found.sort(key=lambda t: t.enc)
    return tuple(found)


def enumerate_R(n, max_arity, label_min=0, label_cap=None,
                child_label_cap=None, child_arity_cap=None):
    """Root trees of grade n = label + sum of subtree orders.

    max_arity is required: without it the grade-0 set is already
    infinite (a label-0 root accepts any number of leaves).
    """
    if n < 0:
        raise InputError("grade must be a natural number")
    if max_arity < 1:
        raise InputError("max_arity must be at least 1")
    return _enum_r(n, max_arity, label_min, label_cap,
                   child_label_cap, child_arity_cap)


def gf_update_zero_labels(order):
    """Update map of x = 1 + sum_{k>=2} x^k L^(k-1)."""

    def update(x):
        acc = FormalSeries.one(order)
        xk = x
        for k in range(2, order + 2):
            xk = xk * x
            acc = acc + xk.shift(k - 1)
        return acc

    return update


def gf_update_labelled(label_min, order):
    """Update map of x = 1 + sum_{k>=2, l>=label_min} x^k L^(k+l-1)."""

    def update(x):
        acc = FormalSeries.one(order)
        xk = x
        for k in range(2, order + 2):
            xk = xk * x
            for l in range(label_min, order + 2 - k):
                acc = acc + xk.shift(k + l - 1)
        return acc

    return update


def gf_update_literal(order):
    """Update map of the equation sum_{n,k>=2} x^n L^(n+k-1) - x = -1,
    taken literally as printed (both summation indices start at 2)."""

    def update(x):
        acc = FormalSeries.one(order)
        xa = x
        for a in range(2, order + 2):
            xa = xa * x
            for b in range(2, order + 3 - a):
                acc = acc + xa.shift(a + b - 1)
        return acc

    return update


def count_via_series(n_max, label_min=None):
    """Tree counts 0..n_max from the generating-equation fixed point,
    cross-checked against explicit enumeration.

    label_min=None selects the zero-label variant; an integer selects
    the labelled variant with labels >= label_min.
    """
    if n_max < 0:
        raise InputError("n_max must be a natural number")
    if label_min is None:
        update = gf_update_zero_labels(n_max)
    else:
        update = gf_update_labelled(label_min, n_max)
    x = fixed_point(update, n_max)
    counts = []
    for c in x.coeffs:
        if c.denominator != 1:
            raise InternalConsistencyError("non-integer tree count %s" % c)
        counts.append(int(c))
    for n in range(n_max + 1):
        if label_min is None:
            trees = enumerate_T(n, label_min=0, label_cap=0)
        else:
            trees = enumerate_T(n, label_min=label_min)
        if len(trees) != counts[n]:
            raise InternalConsistencyError(
                "enumeration (%d) and series (%d) disagree at order %d"
                % (len(trees), counts[n], n)
            )
    return counts


class AuditEntry:
    """One row of the generating-equation audit."""

    def __init__(self, label_min, counts, literal_coeffs, matches):
        self.label_min = label_min
        self.counts = counts
        self.literal_coeffs = literal_coeffs
        self.matches = matches

    def __repr__(self):
        return "AuditEntry(label_min=%d, matches=%s)" % (self.label_min, self.matches)


def literal_equation_audit(n_max=8):
    """Compare labelled tree counts (labels >= 0, 1, 2) against the
    literal equation sum_{n,k>=2} x^n L^(n+k-1) - x = -1.

    The equation's first correction enters at L^3, so at most one of the
    conventions can satisfy it; the audit reports which, if any, does.
    """
    literal = fixed_point(gf_update_literal(n_max), n_max)
    literal_counts = [int(c) for c in literal.coeffs]
    entries = []
    for lm in (0, 1, 2):
        x = fixed_point(gf_update_labelled(lm, n_max), n_max)
        counts = [int(c) for c in x.coeffs]
        entries.append(AuditEntry(lm, counts, literal_counts, counts == literal_counts))
    return entries

"""Tree enumeration against an independent generate-and-filter oracle."""

import random
from fractions import Fraction

import pytest

from pertinv.errors import InputError
from pertinv.series import fixed_point
from pertinv.trees import (
    LEAF,
    LabeledTree,
    RootTree,
    canonical_encode,
    count_via_series,
    enumerate_R,
    enumerate_T,
    gf_update_labelled,
    gf_update_literal,
    literal_equation_audit,
    order_from_definition,
    tree_to_text,
)


# --- oracle: enumerate by vertex count, filter by the order formula ----

def brute_trees(max_vertices, max_label):
    """All planar rooted trees with internal valence >= 2, by vertex
    count and unconstrained label assignment; independent of the
    order-graded recursion under test."""
    by_size = {1: [LEAF]}
    for v in range(2, max_vertices + 1):
        out = []
        for k in range(2, v):  # root valence; k children, v-1 vertices below
            for sizes in _compositions_positive(v - 1, k):
                pools = [by_size[s] for s in sizes]
                for combo in _product(pools):
                    for l in range(max_label + 1):
                        out.append(LabeledTree(l, combo))
        by_size[v] = out
    return [t for trees in by_size.values() for t in trees]


def _compositions_positive(total, k):
    if k == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - k + 2):
        for rest in _compositions_positive(total - first, k - 1):
            yield (first,) + rest


def _product(pools):
    if not pools:
        yield ()
        return
    for head in pools[0]:
        for rest in _product(pools[1:]):
            yield (head,) + rest


def oracle_T(n, label_cap):
    # order-n trees have at most 2n+1 vertices and labels at most n
    allowed = brute_trees(2 * n + 1, min(label_cap, n) if n else 0)
    return sorted(
        {t.enc for t in allowed if order_from_definition(t) == n and
         all(l <= label_cap for _, l in _internal(t))}
    )


def _internal(t):
    if not t.is_leaf:
        yield (len(t.children), t.label)
        for c in t.children:
            yield from _internal(c)


def test_t0_is_leaf_only():
    assert enumerate_T(0) == (LEAF,)
    assert enumerate_T(0, label_cap=0) == (LEAF,)


def test_t1_single_corolla():
    trees = enumerate_T(1)
    assert len(trees) == 1
    t = trees[0]
    assert t.label == 0 and len(t.children) == 2
    assert all(c.is_leaf for c in t.children)


@pytest.mark.parametrize("n", [0, 1, 2, 3, 4])
def test_enumeration_matches_bruteforce_zero_labels(n):
    got = sorted(t.enc for t in enumerate_T(n, label_cap=0))
    assert got == oracle_T(n, 0)


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_enumeration_matches_bruteforce_labelled(n):
    got = sorted(t.enc for t in enumerate_T(n, label_cap=10))
    assert got == oracle_T(n, 10)


def test_zero_label_counts():
    assert [len(enumerate_T(n, label_cap=0)) for n in range(6)] == [1, 1, 3, 11, 45, 197]


def test_labelled_counts():
    assert [len(enumerate_T(n)) for n in range(4)] == [1, 1, 4, 17]


def test_count_via_series_zero_labels():
    assert count_via_series(7) == [1, 1, 3, 11, 45, 197, 903, 4279]


def test_count_via_series_labelled():
    assert count_via_series(5, label_min=0) == [1, 1, 4, 17, 79, 391]
    assert count_via_series(5, label_min=1) == [1, 0, 1, 2, 5, 13]


def test_count_constant_term():
    assert count_via_series(0) == [1]
    assert count_via_series(0, label_min=1) == [1]


def random_tree(rng, depth=0):
    if depth > 2 or rng.random() < 0.4:
        return LEAF
    k = rng.randint(2, 3)
    return LabeledTree(rng.randint(0, 2), tuple(random_tree(rng, depth + 1) for _ in range(k)))


def test_order_closure_property():
    # order((T_1..T_k)_l) = sum of child orders + k + l - 1, and the
    # recursive order agrees with the defining vertex sum
    rng = random.Random(7)
    for _ in range(200):
        t = random_tree(rng)
        assert t.order == order_from_definition(t)
        if not t.is_leaf:
            expect = sum(c.order for c in t.children) + len(t.children) + t.label - 1
            assert t.order == expect


def test_encodings_unique_and_deterministic():
    trees = enumerate_T(4, label_cap=0)
    encs = [canonical_encode(t) for t in trees]
    assert len(set(encs)) == len(encs)
    assert encs == sorted(encs)
    assert canonical_encode(LEAF) == b"*"
    again = [canonical_encode(t) for t in enumerate_T(4, label_cap=0)]
    assert encs == again


def test_encoding_respects_child_order():
    a = LabeledTree(0, (LabeledTree(0, (LEAF, LEAF)), LEAF))
    b = LabeledTree(0, (LEAF, LabeledTree(0, (LEAF, LEAF))))
    assert canonical_encode(a) != canonical_encode(b)


def test_tree_text_form():
    t = LabeledTree(2, (LEAF, LabeledTree(0, (LEAF, LEAF))))
    assert tree_to_text(t) == "(2: * (0: * *))"


def test_enumerate_r_grade_zero():
    trees = enumerate_R(0, 3)
    assert len(trees) == 3
    assert all(t.label == 0 for t in trees)
    assert sorted(len(t.children) for t in trees) == [1, 2, 3]
    assert enumerate_R(0, 1) == (RootTree(0, (LEAF,)),)


def test_enumerate_r_grade_one_bruteforce():
    # grade 1: label 0 roots with one order-1 subtree, or label 1 corollas
    got = {t.enc for t in enumerate_R(1, 3)}
    t1 = enumerate_T(1)[0]
    expect = set()
    for k in range(1, 4):
        for pos in range(k):
            children = [LEAF] * k
            children[pos] = t1
            expect.add(RootTree(0, tuple(children)).enc)
    for k in range(2, 4):
        expect.add(RootTree(1, (LEAF,) * k).enc)
    assert got == expect


def test_enumerate_r_arity_monotone():
    for n in range(4):
        smaller = set(t.enc for t in enumerate_R(n, 2))
        larger = set(t.enc for t in enumerate_R(n, 3))
        assert smaller <= larger


def test_root_tree_invariants():
    with pytest.raises(InputError):
        RootTree(1, (LEAF,))  # labelled root needs >= 2 subtrees
    with pytest.raises(InputError):
        RootTree(0, ())
    t = RootTree(2, (LEAF, enumerate_T(1)[0]))
    assert t.order == 3  # label + subtree orders, no arity term


def test_literal_equation_audit():
    entries = literal_equation_audit(8)
    assert [e.label_min for e in entries] == [0, 1, 2]
    for e in entries:
        assert e.matches == (e.counts == e.literal_coeffs)
    # the literal equation is exactly the labelled recursion with l >= 2
    lit = fixed_point(gf_update_literal(8), 8)
    lab2 = fixed_point(gf_update_labelled(2, 8), 8)
    assert lit == lab2
    by_min = {e.label_min: e for e in entries}
    assert by_min[2].matches
    assert not by_min[0].matches and not by_min[1].matches


def test_invalid_inputs():
    with pytest.raises(InputError):
        enumerate_T(-1)
    with pytest.raises(InputError):
        enumerate_R(2, 0)
    with pytest.raises(InputError):
        LabeledTree(3, ())  # labelled leaf

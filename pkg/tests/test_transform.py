import random

import pytest
from hypothesis import given, settings, strategies as st

from tetratag import treegen
from tetratag.transform import (
    TransformError,
    binarize_right,
    check_binary,
    collapse_unaries,
    expand_unaries,
    is_binary,
    unbinarize,
)
from tetratag.trees import Internal, Leaf, leaves, read_trees, sentence_of


def tree(text):
    (t,) = read_trees(text)
    return t


def L(word="w", tag="T"):
    return Leaf(word, tag)


def test_collapse_chain_above_leaf():
    # the canonical clause-over-verb-phrase case
    t = tree("(S (VP (VB Go)))")
    assert collapse_unaries(t) == Leaf("Go", "VB", ("S", "VP"))


def test_collapse_two_level_chain_over_preterminal():
    t = tree("(NP (NP (NN dog)))")
    assert collapse_unaries(t) == Leaf("dog", "NN", ("NP", "NP"))


def test_collapse_internal_chain():
    t = tree("(X (Y (A a) (B b)))")
    c = collapse_unaries(t)
    assert c == Internal("X::Y", (Leaf("a", "A"), Leaf("b", "B")))


def test_collapse_identity_without_chains():
    t = tree("(S (A a) (B b))")
    assert collapse_unaries(t) == t


def test_collapse_rejects_separator_in_labels():
    t = Internal("S::VP", (L("a"), L("b")))
    with pytest.raises(TransformError, match="::"):
        collapse_unaries(t)


def test_binarize_three_children():
    t = Internal("S", (L("a"), L("b"), L("c")))
    b = binarize_right(t)
    assert b == Internal("S", (L("a"), Internal(None, (L("b"), L("c")))))


def test_binarize_four_children_builds_right_spine():
    t = Internal("S", (L("a"), L("b"), L("c"), L("d")))
    b = binarize_right(t)
    expected = Internal(
        "S",
        (L("a"), Internal(None, (L("b"), Internal(None, (L("c"), L("d")))))),
    )
    assert b == expected


def test_binarize_identity_on_binary_trees():
    t = Internal("S", (Internal("A", (L("a"), L("b"))), L("c")))
    assert binarize_right(t) == t


def test_binarize_rejects_unary_nodes():
    t = Internal("S", (Internal("VP", (L("go"),)),))
    with pytest.raises(TransformError, match="unary"):
        binarize_right(t)


def test_binary_invariants(sample_trees):
    for t in sample_trees:
        b = binarize_right(collapse_unaries(t))
        check_binary(b)
        internal = sum(1 for _ in _internals(b))
        assert internal == len(leaves(b)) - 1


def _internals(t):
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, Internal):
            yield node
            stack.extend(node.children)


def test_unbinarize_inverts_binarize():
    for text in ("(S (A a) (B b) (C c))", "(S (A a) (B b) (C c) (D d))"):
        t = tree(text)
        assert unbinarize(binarize_right(t)) == t


def test_expand_inverts_collapse():
    t = tree("(S (VP (VB Go)))")
    assert expand_unaries(collapse_unaries(t)) == t
    t = tree("(X (Y (A a) (B b)))")
    assert expand_unaries(collapse_unaries(t)) == t


def test_dummy_root_gets_fallback_label():
    bt = Internal(None, (L("a"), L("b")))
    assert unbinarize(bt) == Internal("TOP", (L("a"), L("b")))
    assert unbinarize(bt, root_label="ROOT") == Internal("ROOT", (L("a"), L("b")))


def test_unbinarize_total_over_arbitrary_dummy_placement():
    # dummies as left children never come out of binarize_right, but the
    # decoder can produce them; splicing must still work
    bt = Internal(
        "S",
        (Internal(None, (L("a"), L("b"))), Internal(None, (L("c"), L("d")))),
    )
    assert unbinarize(bt) == Internal("S", (L("a"), L("b"), L("c"), L("d")))


def test_unbinarize_cascades_nested_dummies():
    bt = Internal(None, (Internal(None, (L("a"), L("b"))), L("c")))
    assert unbinarize(bt) == Internal("TOP", (L("a"), L("b"), L("c")))


def test_unbinarize_survives_deep_dummy_chains():
    # deeper than the recursion limit: must not overflow
    node = Internal(None, (L("w0"), L("w1")))
    for i in range(2, 5000):
        node = Internal(None, (node, L(f"w{i}")))
    result = unbinarize(node)
    assert result.label == "TOP"
    assert len(result.children) == 5000


def test_full_round_trip_on_sample(sample_trees):
    for t in sample_trees:
        assert expand_unaries(unbinarize(binarize_right(collapse_unaries(t)))) == t


@given(st.integers(0, 10_000), st.integers(1, 30))
@settings(max_examples=200, deadline=None)
def test_full_round_trip_random(seed, n_words):
    t = treegen.random_tree(random.Random(seed), n_words)
    assert expand_unaries(unbinarize(binarize_right(collapse_unaries(t)))) == t


@given(st.integers(0, 10_000), st.integers(1, 30))
@settings(max_examples=100, deadline=None)
def test_leaf_sequence_invariant(seed, n_words):
    t = treegen.random_tree(random.Random(seed), n_words)
    reference = sentence_of(t)
    c = collapse_unaries(t)
    b = binarize_right(c)
    assert sentence_of(c) == reference
    assert sentence_of(b) == reference
    assert sentence_of(unbinarize(b)) == reference


@given(st.integers(0, 10_000), st.integers(2, 12))
@settings(max_examples=100, deadline=None)
def test_unbinarize_totality_fuzz(seed, n_words):
    # random binary skeleton with random dummy assignments
    rng = random.Random(seed)
    t = binarize_right(collapse_unaries(treegen.random_tree(rng, n_words, unary_prob=0)))

    def randomize(node):
        if isinstance(node, Leaf):
            return node
        label = None if rng.random() < 0.4 else node.label
        return Internal(label, tuple(randomize(c) for c in node.children))

    mangled = randomize(t)
    result = unbinarize(mangled)
    assert sentence_of(result) == sentence_of(t)
    assert not any(n.label is None for n in _internals(result))


def test_is_binary(sample_trees):
    assert not all(is_binary(t) for t in sample_trees)
    assert all(is_binary(binarize_right(collapse_unaries(t))) for t in sample_trees)

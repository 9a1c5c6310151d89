"""Random and exhaustive tree generation for tests, benchmarks, and demos."""

from __future__ import annotations

import random
from typing import Iterator

from .trees import Internal, Leaf, Tree

LABELS = ("S", "NP", "VP", "PP", "ADJP", "ADVP", "SBAR", "PRN", "QP", "WHNP")
PRETERMINALS = ("DT", "NN", "NNS", "VBD", "VBZ", "IN", "JJ", "RB", "CC", "PRP")
WORDS = ("the", "cat", "dogs", "saw", "runs", "on", "big", "fast", "and", "it")


def random_tree(
    rng: random.Random,
    n_words: int,
    max_arity: int = 4,
    unary_prob: float = 0.12,
    max_chain: int = 2,
) -> Tree:
    """A random general tree over ``n_words`` leaves.

    Produces the phenomena the transforms must handle: n-ary nodes up to
    ``max_arity``, unary chains (above internal nodes and above leaves),
    and a plain binary skeleton otherwise. Labels come from a fixed pool
    and never contain the chain separator.
    """
    if n_words < 1:
        raise ValueError("n_words must be >= 1")
    counter = [0]

    def leaf() -> Tree:
        i = counter[0]
        counter[0] += 1
        return Leaf(f"{rng.choice(WORDS)}{i}", rng.choice(PRETERMINALS))

    def chain_over(node: Tree) -> Tree:
        for _ in range(rng.randint(1, max_chain)):
            node = Internal(rng.choice(LABELS), (node,))
        return node

    def build(n: int) -> Tree:
        if n == 1:
            node: Tree = leaf()
            if rng.random() < unary_prob:
                node = chain_over(node)
            return node
        arity = rng.randint(2, min(max_arity, n))
        cuts = sorted(rng.sample(range(1, n), arity - 1))
        sizes = [b - a for a, b in zip((0, *cuts), (*cuts, n))]
        node = Internal(rng.choice(LABELS), tuple(build(size) for size in sizes))
        if rng.random() < unary_prob:
            node = chain_over(node)
        return node

    tree = build(n_words)
    if isinstance(tree, Leaf):
        # keep a labeled root so the tree serializes as a constituent
        tree = Internal(rng.choice(LABELS), (tree,))
    return tree


def random_corpus(seed: int, count: int, max_words: int = 40) -> list[Tree]:
    rng = random.Random(seed)
    return [random_tree(rng, rng.randint(1, max_words)) for _ in range(count)]


def left_branching(n: int, label: str = "X", preterminal: str = "T") -> Tree:
    """(((w0 w1) w2) ... ) - the minimum-stack-depth family."""
    node: Tree = Leaf("w0", preterminal)
    for i in range(1, n):
        node = Internal(label, (node, Leaf(f"w{i}", preterminal)))
    return node


def right_branching(n: int, label: str = "X", preterminal: str = "T") -> Tree:
    """(w0 (w1 (w2 ...))) - depth 2 under the transition system."""
    node: Tree = Leaf(f"w{n - 1}", preterminal)
    for i in range(n - 2, -1, -1):
        node = Internal(label, (Leaf(f"w{i}", preterminal), node))
    return node


def enumerate_binary_trees(n: int, label: str = "X", preterminal: str = "T") -> Iterator[Tree]:
    """Every binary bracketing over n fixed leaves (Catalan(n-1) trees)."""

    def shapes(lo: int, hi: int) -> Iterator[Tree]:
        if hi - lo == 1:
            yield Leaf(f"w{lo}", preterminal)
            return
        for split in range(lo + 1, hi):
            for left in shapes(lo, split):
                for right in shapes(split, hi):
                    yield Internal(label, (left, right))

    yield from shapes(0, n)

"""Invertible conversion between treebank trees and labeled full-binary trees.

Two transforms bring an arbitrary tree into the shape the tag codec needs,
and two undo them:

* ``collapse_unaries``  — merge single-child chains into ``::``-joined labels
  (chains directly above a leaf are stored on the leaf itself);
* ``binarize_right``    — give every node exactly two children by building a
  right-leaning spine of dummy-labeled nodes;
* ``unbinarize``        — splice out every dummy node (total: it accepts any
  dummy placement the decoder can produce, not just spines);
* ``expand_unaries``    — split joined labels back into unary chains.

``expand_unaries(unbinarize(binarize_right(collapse_unaries(t))))`` is the
identity on any tree whose labels do not contain ``::``.
"""

from __future__ import annotations

from .trees import Internal, Leaf, Tree

SEPARATOR = "::"

# Dummy binarization nodes carry label None throughout.
DUMMY = None

DEFAULT_ROOT_LABEL = "TOP"


class TransformError(ValueError):
    pass


def join_chain(parts: tuple[str, ...]) -> str:
    return SEPARATOR.join(parts)


def split_chain(label: str) -> tuple[str, ...]:
    return tuple(label.split(SEPARATOR))


def _checked(label: str) -> str:
    if SEPARATOR in label:
        raise TransformError(
            f"label {label!r} contains the reserved chain separator {SEPARATOR!r}"
        )
    return label


def collapse_unaries(t: Tree) -> Tree:
    """Merge unary chains into single nodes with ``::``-joined labels.

    A chain X -> Y -> Z over one span becomes a node labeled ``X::Y::Z``.
    Chains sitting directly above a leaf are folded into the leaf's
    ``chain`` field; preterminals themselves are never collapsed.

    Rejects input whose internal labels contain ``::``.
    """
    if isinstance(t, Leaf):
        return t
    children = tuple(collapse_unaries(c) for c in t.children)
    label = _checked(t.label) if t.label is not None else t.label
    if len(children) == 1:
        only = children[0]
        if label is None:
            raise TransformError("cannot collapse a dummy-labeled unary node")
        if isinstance(only, Leaf):
            return Leaf(only.word, only.tag, (label,) + only.chain)
        return Internal(
            join_chain((label,) + split_chain(only.label)), only.children
        )
    return Internal(label, children)


def binarize_right(t: Tree) -> Tree:
    """Fully right-branching binarization.

    A node with children c1..ck (k > 2) becomes c1 paired with a spine of
    dummy-labeled nodes over c2..ck. Requires a unary-free input
    (``collapse_unaries`` first); leaf count and order are preserved.
    """
    if isinstance(t, Leaf):
        return t
    if len(t.children) == 1:
        raise TransformError(
            "unary internal node: run collapse_unaries before binarize_right"
        )
    children = tuple(binarize_right(c) for c in t.children)
    if len(children) == 2:
        return Internal(t.label, children)
    spine = Internal(DUMMY, children[-2:])
    for child in reversed(children[1:-2]):
        spine = Internal(DUMMY, (child, spine))
    return Internal(t.label, (children[0], spine))


def unbinarize(bt: Tree, root_label: str = DEFAULT_ROOT_LABEL) -> Tree:
    """Splice out every dummy node by promoting its children.

    Total over arbitrary dummy placement: decoding unconstrained tag scores
    can put dummies anywhere, including the root, in which case the root is
    relabeled with ``root_label``.
    """
    result = _splice_dummies(bt)
    if isinstance(result, Internal) and result.label is None:
        return Internal(root_label, result.children)
    return result


def _splice_dummies(t: Tree) -> Tree:
    # Iterative post-order rebuild: decoder output can nest dummies a full
    # sentence deep, which would overflow the recursion limit. Finished
    # subtrees accumulate on a result stack in reverse child order.
    results: list[Tree] = []
    stack: list[tuple[Tree, bool]] = [(t, False)]
    while stack:
        node, ready = stack.pop()
        if isinstance(node, Leaf):
            results.append(node)
            continue
        if not ready:
            stack.append((node, True))
            stack.extend((c, False) for c in node.children)
            continue
        children: list[Tree] = []
        for _ in node.children:
            rebuilt = results.pop()
            if isinstance(rebuilt, Internal) and rebuilt.label is None:
                children.extend(rebuilt.children)
            else:
                children.append(rebuilt)
        results.append(Internal(node.label, tuple(children)))
    return results[0]


def expand_unaries(t: Tree) -> Tree:
    """Split ``::``-joined labels and leaf chains back into unary chains."""
    results: list[Tree] = []
    stack: list[tuple[Tree, bool]] = [(t, False)]
    while stack:
        node, ready = stack.pop()
        if isinstance(node, Leaf):
            expanded: Tree = node if not node.chain else Leaf(node.word, node.tag)
            for label in reversed(node.chain):
                expanded = Internal(label, (expanded,))
            results.append(expanded)
            continue
        if not ready:
            stack.append((node, True))
            stack.extend((c, False) for c in node.children)
            continue
        children = tuple(results.pop() for _ in node.children)
        if node.label is None:
            raise TransformError("dummy node survived unbinarize")
        parts = split_chain(node.label)
        expanded = Internal(parts[-1], children)
        for label in reversed(parts[:-1]):
            expanded = Internal(label, (expanded,))
        results.append(expanded)
    return results[0]


def check_binary(t: Tree) -> None:
    """Validate the full-binary invariants.

    Every internal node must have exactly two children, and a tree over n
    leaves must contain exactly n - 1 internal nodes (a consequence checked
    independently as a sanity cross-count).
    """
    n_leaves = 0
    n_internal = 0
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, Leaf):
            n_leaves += 1
            continue
        if len(node.children) != 2:
            raise TransformError(
                f"node {node.label!r} has {len(node.children)} children; expected 2"
            )
        n_internal += 1
        stack.extend(node.children)
    if n_internal != n_leaves - 1:
        raise TransformError(
            f"{n_internal} internal nodes over {n_leaves} leaves; expected {n_leaves - 1}"
        )


def is_binary(t: Tree) -> bool:
    try:
        check_binary(t)
    except TransformError:
        return False
    return True

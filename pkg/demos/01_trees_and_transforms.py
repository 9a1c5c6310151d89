"""
Trees and the invertible transforms
===================================

A walk through the tree layer: reading bracketed treebank text, evalb-style
preprocessing, and the collapse/binarize transforms that put any tree into
the labeled full-binary form the tagger encodes.
"""

from tetratag import (
    binarize_right,
    collapse_unaries,
    expand_unaries,
    leaves,
    read_trees,
    spans,
    strip_annotations,
    unbinarize,
    write_tree,
)
from tetratag.data import load_sample_trees

# ---------------------------------------------------------------------------
# The bundled sample corpus: 50 hand-written PTB-style trees.

trees = load_sample_trees()
print(f"sample corpus: {len(trees)} trees")
print("first tree:", write_tree(trees[0]))
print("its words:", " ".join(l.word for l in leaves(trees[0])))
print()

# Labeled spans (brackets) of the first tree; preterminals are part of the
# leaves and contribute no spans.
print("spans:", spans(trees[0]))
print()

# ---------------------------------------------------------------------------
# Evaluation preprocessing: function tags go, trace subtrees go.

(traced,) = read_trees("(S (NP-SBJ (-NONE- *)) (VP (VB Go)) (. !))")
print("raw:      ", write_tree(traced))
print("stripped: ", write_tree(strip_annotations(traced)))
print()

# ---------------------------------------------------------------------------
# Unary collapse: chains become ::-joined labels; chains directly above a
# word live on the leaf itself.

(clause,) = read_trees("(S (VP (VB Go)))")
collapsed = collapse_unaries(clause)
print("collapsed single-word clause:", collapsed)

# Right-branching binarization introduces dummy (unlabeled) nodes.
(flat,) = read_trees("(NP (DT a) (JJ big) (JJ red) (NN ball))")
binary = binarize_right(collapse_unaries(flat))
print("4-ary NP binarized:", binary)

# Both transforms invert exactly.
restored = expand_unaries(unbinarize(binary))
assert restored == flat
print("restored:", write_tree(restored))

# The identity holds corpus-wide.
assert all(
    expand_unaries(unbinarize(binarize_right(collapse_unaries(t)))) == t
    for t in trees
)
print("\nround trip holds for all", len(trees), "sample trees")

"""
From trees to tags and back
===========================

The core codec: a full binary tree over n words becomes exactly 2n-1 tags,
one per word and one per fencepost. Replaying the tags as transitions over
a stack of partial trees rebuilds the tree; the stack stays remarkably
shallow on natural-language trees, which is what the decoder exploits.
"""

from tetratag import (
    Internal,
    Leaf,
    check_validity,
    count_valid_sequences,
    decode,
    depth_profile,
    derivation,
    encode,
    format_tag_line,
    sentence_of,
)
from tetratag.treegen import left_branching, right_branching

# ---------------------------------------------------------------------------
# A five-word example: ((A (B (C D))) E), nonterminals numbered in order.

leaf = lambda w: Leaf(w, "T")
tree = Internal(
    "4",
    (
        Internal("1", (leaf("A"), Internal("2", (leaf("B"), Internal("3", (leaf("C"), leaf("D"))))))),
        leaf("E"),
    ),
)

tags = encode(tree)
print("tags:", format_tag_line(tags))
print("lowercase = word positions (shift), uppercase = fenceposts (combine)")
print()

# ---------------------------------------------------------------------------
# The full derivation, one transition per tag. "?" marks the open slot of a
# partial tree on the stack.

print(f"{'step':4}  {'tag':6}  {'stack':42} buffer")
for i, step in enumerate(derivation(tags, sentence_of(tree)), 1):
    stack = "   ".join(step.stack)
    print(f"{i:4}  {step.action:6}  {stack:42} {' '.join(step.buffer)}")
print()

print("stack size after each action:", depth_profile(tags))
assert decode(tags, sentence_of(tree)) == tree
print("decoding reproduces the tree exactly\n")

# ---------------------------------------------------------------------------
# Stack depth depends on branching direction, not length: left-branching
# trees stay at depth 1 forever, right-branching trees at depth 2.

for n in (5, 50, 500):
    l_depth = max(depth_profile(encode(left_branching(n))))
    r_depth = max(depth_profile(encode(right_branching(n))))
    print(f"n={n:4}  left-branching depth {l_depth}, right-branching depth {r_depth}")
print()

# ---------------------------------------------------------------------------
# Not every tag sequence is executable; validity depends only on stack
# counts, and the number of valid sequences is the Catalan number of the
# corresponding binary bracketings.

from tetratag import parse_tag_line

bad = parse_tag_line("l R r")
violation = check_validity(bad)
print(f"'l R r' is invalid: position {violation.position}, {violation.reason}")

print("valid sequences for n=1..8:", [count_valid_sequences(n) for n in range(1, 9)])

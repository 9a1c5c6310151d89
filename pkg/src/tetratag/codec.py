"""The tree <-> tag-sequence bijection and its left-corner transition system.

A full binary tree over n words maps to 2n-1 tags, one per word and one per
fencepost, reading the sentence left to right. Word positions get a shift
tag ("l" if the leaf is a left child, "r" if a right child); fencepost
positions get a combine tag ("L"/"R") for the internal node owning the
shortest span that crosses the fencepost. The root counts as a left child.
Tags optionally carry a node label after a "/", e.g. ``L/S::VP``; a bare
combine tag denotes a dummy binarization node.

Decoding replays the tags as transitions over a stack of partial trees,
each with at most one open slot as its rightmost missing leaf:

* ``l`` pushes the next word as a new stack element;
* ``r`` puts the next word into the top element's open slot;
* ``L`` wraps the top element as the left child of a new node with an open
  right slot;
* ``R`` pops the top element, wraps it the same way, and puts the wrapped
  node into the open slot of the element below.

Sequence validity depends only on the stack size at each step, which is
what makes the score-based decoder in :mod:`tetratag.decoder` a small
dynamic program.
"""

from __future__ import annotations

from typing import Iterator, NamedTuple, Sequence

from .trees import Internal, Leaf, Tree
from .transform import join_chain, split_chain

SHIFT_LEFT = "l"
SHIFT_RIGHT = "r"
COMBINE_LEFT = "L"
COMBINE_RIGHT = "R"

# Index order used by deterministic tie-breaking.
ACTIONS = "lrLR"

Sentence = Sequence[tuple[str, str]]


class CodecError(ValueError):
    pass


class InvalidTagSequenceError(CodecError):
    """A tag sequence the transition system cannot execute."""

    def __init__(self, position: int, reason: str):
        super().__init__(f"invalid tag sequence at position {position}: {reason}")
        self.position = position
        self.reason = reason


class Violation(NamedTuple):
    position: int
    reason: str


class TetraTag(NamedTuple):
    """One structural action, optionally carrying a node label.

    ``label`` is a collapsed unary chain on shift tags and an internal node
    label on combine tags; ``None`` means no chain / a dummy node.
    A NamedTuple for speed: decoding churns through millions of these.
    ``parse`` validates; direct construction trusts its arguments.
    """

    action: str
    label: str | None = None

    @property
    def is_shift(self) -> bool:
        return self.action in (SHIFT_LEFT, SHIFT_RIGHT)

    @property
    def is_combine(self) -> bool:
        return self.action in (COMBINE_LEFT, COMBINE_RIGHT)

    def __str__(self) -> str:
        if self.label is None:
            return self.action
        return f"{self.action}/{self.label}"

    @classmethod
    def parse(cls, text: str) -> "TetraTag":
        """Inverse of ``str``: ``"L/S::VP"`` -> combine-left labeled S::VP."""
        if not text or text[0] not in ACTIONS:
            raise CodecError(f"malformed tag {text!r}")
        if len(text) == 1:
            return cls(text)
        if text[1] != "/" or len(text) == 2:
            raise CodecError(f"malformed tag {text!r}")
        return cls(text[0], text[2:])


TagSequence = list[TetraTag]


def split_tag_text(text: str) -> tuple[str, str | None]:
    """(action, label) of a serialized tag, without building a TetraTag."""
    if not text or text[0] not in ACTIONS:
        raise CodecError(f"malformed tag {text!r}")
    if len(text) == 1:
        return text, None
    if text[1] != "/" or len(text) == 2:
        raise CodecError(f"malformed tag {text!r}")
    return text[0], text[2:]


def format_tag_line(tags: Sequence[TetraTag]) -> str:
    return " ".join(str(t) for t in tags)


def parse_tag_line(line: str) -> TagSequence:
    return [TetraTag.parse(tok) for tok in line.split()]


# ---------------------------------------------------------------------------
# Encoding


def encode(bt: Tree) -> TagSequence:
    """Tag sequence of a full binary tree (2n-1 tags for n leaves).

    Implemented as an in-order traversal: leaves land on word positions and
    internal nodes land on fencepost positions in exactly the
    shortest-span-crossing order, so no span search is needed.
    """
    tags: list[TetraTag] = []
    # (node, node is a left child or the root, emit-now flag)
    stack: list[tuple[Tree, bool, bool]] = [(bt, True, False)]
    while stack:
        node, is_left, emit = stack.pop()
        if isinstance(node, Leaf):
            label = join_chain(node.chain) if node.chain else None
            tags.append(TetraTag(SHIFT_LEFT if is_left else SHIFT_RIGHT, label))
            continue
        if emit:
            tags.append(TetraTag(COMBINE_LEFT if is_left else COMBINE_RIGHT, node.label))
            continue
        if len(node.children) != 2:
            raise CodecError("encode requires a full binary tree; run binarize_right first")
        left, right = node.children
        stack.append((right, False, False))
        stack.append((node, is_left, True))
        stack.append((left, True, False))
    return tags


# ---------------------------------------------------------------------------
# Validity


def check_validity(tags: Sequence[TetraTag]) -> Violation | None:
    """First constraint violation of the transition system, or None.

    Validity depends only on the number of stack elements: shifts as a left
    child push one, combine-right pops one, the other actions keep the
    count, and a complete derivation ends with exactly one element.
    """
    if not tags:
        return Violation(0, "empty tag sequence")
    depth = 0
    for pos, tag in enumerate(tags):
        if pos % 2 == 0 and tag.is_combine:
            return Violation(pos, "combine tag at a word position")
        if pos % 2 == 1 and tag.is_shift:
            return Violation(pos, "shift tag at a fencepost position")
        if tag.action == SHIFT_LEFT:
            depth += 1
        elif tag.action == SHIFT_RIGHT:
            if depth < 1:
                return Violation(pos, "first action must shift onto the empty stack")
        elif tag.action == COMBINE_LEFT:
            if depth < 1:
                return Violation(pos, "combine-left requires a stack element")
        else:  # COMBINE_RIGHT
            if depth < 2:
                return Violation(pos, "combine-right requires at least two stack elements")
            depth -= 1
    if depth != 1:
        return Violation(
            len(tags) - 1, f"derivation ends with {depth} stack elements; expected 1"
        )
    return None


def depth_profile(tags: Sequence[TetraTag]) -> list[int]:
    """Stack size after each action. Raises on invalid sequences."""
    violation = check_validity(tags)
    if violation is not None:
        raise InvalidTagSequenceError(*violation)
    depth = 0
    profile = []
    for tag in tags:
        if tag.action == SHIFT_LEFT:
            depth += 1
        elif tag.action == COMBINE_RIGHT:
            depth -= 1
        profile.append(depth)
    return profile


def max_depth(tags: Sequence[TetraTag]) -> int:
    return max(depth_profile(tags))


# ---------------------------------------------------------------------------
# Decoding (the transition system proper)


class _Node:
    # Mutable node used while replaying transitions; the open slot is the
    # not-yet-assigned ``right`` field.
    __slots__ = ("label", "left", "right")

    def __init__(self, label: str | None, left):
        self.label = label
        self.left = left
        self.right = None


def decode(tags: Sequence[TetraTag], sentence: Sentence) -> Tree:
    """Run the transition system over a valid tag sequence.

    Returns the full binary tree whose encoding is ``tags``, with combine
    labels on internal nodes and shift labels as leaf chains. Raises
    :class:`InvalidTagSequenceError` (naming the violating position and
    constraint) on invalid input, and :class:`CodecError` if the sentence
    length does not match the tag count.
    """
    return _run(tags, sentence, trace=None)


class TransitionState(NamedTuple):
    """A snapshot of the transition system, for inspection and demos."""

    action: str
    stack: tuple[str, ...]
    buffer: tuple[str, ...]


def derivation(tags: Sequence[TetraTag], sentence: Sentence) -> list[TransitionState]:
    """Step-by-step derivation: one rendered state per action.

    Partial trees on the stack render their open slot as ``?``.
    """
    trace: list[TransitionState] = []
    _run(tags, sentence, trace=trace)
    return trace


def _run(tags, sentence, trace):
    violation = check_validity(tags)
    if violation is not None:
        raise InvalidTagSequenceError(*violation)
    n = (len(tags) + 1) // 2
    if len(sentence) != n:
        raise CodecError(f"sentence has {len(sentence)} words; tags require {n}")

    # stack entries: (root, open node or None); root is a Leaf or _Node
    stack: list[list] = []
    buffer = 0
    for tag in tags:
        if tag.action == SHIFT_LEFT:
            word, pre = sentence[buffer]
            chain = split_chain(tag.label) if tag.label is not None else ()
            stack.append([Leaf(word, pre, chain), None])
            buffer += 1
        elif tag.action == SHIFT_RIGHT:
            word, pre = sentence[buffer]
            chain = split_chain(tag.label) if tag.label is not None else ()
            top = stack[-1]
            top[1].right = Leaf(word, pre, chain)
            top[1] = None
            buffer += 1
        elif tag.action == COMBINE_LEFT:
            top = stack[-1]
            node = _Node(tag.label, top[0])
            top[0] = node
            top[1] = node
        else:  # COMBINE_RIGHT
            root, _ = stack.pop()
            node = _Node(tag.label, root)
            top = stack[-1]
            top[1].right = node
            top[1] = node
        if trace is not None:
            trace.append(
                TransitionState(
                    str(tag),
                    tuple(_render(root) for root, _ in stack),
                    tuple(w for w, _ in sentence[buffer:]),
                )
            )
    root, open_node = stack[0]
    assert open_node is None
    return _freeze(root)


def _freeze(node) -> Tree:
    # Iterative rebuild into immutable trees; decoded trees can be as deep
    # as the sentence is long.
    if isinstance(node, Leaf):
        return node
    results: list[Tree] = []
    stack = [(node, False)]
    while stack:
        current, ready = stack.pop()
        if isinstance(current, Leaf):
            results.append(current)
            continue
        if not ready:
            stack.append((current, True))
            stack.append((current.right, False))
            stack.append((current.left, False))
            continue
        right = results.pop()
        left = results.pop()
        results.append(Internal(current.label, (left, right)))
    return results[0]


def _render(node) -> str:
    if isinstance(node, Leaf):
        return node.word
    if node is None:
        return "?"
    label = node.label if node.label is not None else "_"
    return f"({label} {_render(node.left)} {_render(node.right)})"


# ---------------------------------------------------------------------------
# Enumeration (test oracle support and coverage counting)


def structural_candidates(n: int) -> Iterator[TagSequence]:
    """All 2^(2n-1) unlabeled tag sequences respecting position parity.

    Word positions choose between the two shift tags and fencepost
    positions between the two combine tags; no validity filtering.
    """
    seq: list[TetraTag] = []

    def options(pos: int):
        return (SHIFT_LEFT, SHIFT_RIGHT) if pos % 2 == 0 else (COMBINE_LEFT, COMBINE_RIGHT)

    def rec(pos: int):
        if pos == 2 * n - 1:
            yield list(seq)
            return
        for action in options(pos):
            seq.append(TetraTag(action))
            yield from rec(pos + 1)
            seq.pop()

    yield from rec(0)


def count_valid_sequences(n: int) -> int:
    """Number of valid structural sequences over n words, by brute force."""
    return sum(1 for seq in structural_candidates(n) if check_validity(seq) is None)

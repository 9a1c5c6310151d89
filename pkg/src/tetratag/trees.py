"""Parse-tree data model and bracketed (S-expression) treebank I/O.

Trees are immutable. A tree is either a ``Leaf`` (word plus preterminal) or
an ``Internal`` node with a label and one or more children. Labels are
opaque strings: no label grammar is assumed, and PTB escape tokens such as
``-LRB-`` are preserved verbatim so that round trips are bit-stable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Union


class TreebankParseError(ValueError):
    """Malformed bracketed input. ``offset`` is the 1-based byte offset of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class EmptyTreeError(ValueError):
    """Raised when an operation would leave a tree with no leaves."""


TRACE_TAG = "-NONE-"


@dataclass(frozen=True)
class Leaf:
    """A word with its preterminal tag.

    ``chain`` holds labels of a collapsed unary chain sitting directly above
    this leaf (outermost label first). It is empty for ordinary treebank
    trees and only populated by :func:`tetratag.transform.collapse_unaries`.
    """

    word: str
    tag: str
    chain: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.word:
            raise ValueError("leaf word must be a non-empty string")

    def __repr__(self):
        chain = f" chain={'::'.join(self.chain)}" if self.chain else ""
        return f"Leaf({self.tag} {self.word}{chain})"


@dataclass(frozen=True)
class Internal:
    """A labeled node with ordered children.

    ``label`` is ``None`` only for dummy nodes introduced by binarization;
    general treebank trees always carry a string label.
    """

    label: str | None
    children: tuple["Tree", ...] = field(default=())

    def __post_init__(self):
        if not self.children:
            raise ValueError("internal node must have at least one child")
        object.__setattr__(self, "children", tuple(self.children))

    def __repr__(self):
        label = self.label if self.label is not None else "<dummy>"
        return f"Internal({label}, {len(self.children)} children)"


Tree = Union[Leaf, Internal]


def leaves(t: Tree) -> list[Leaf]:
    """All leaves of ``t`` in sentence order."""
    out: list[Leaf] = []
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, Leaf):
            out.append(node)
        else:
            stack.extend(reversed(node.children))
    return out


def sentence_of(t: Tree) -> list[tuple[str, str]]:
    """The (word, preterminal) sequence under ``t``."""
    return [(leaf.word, leaf.tag) for leaf in leaves(t)]


def leaf_count(t: Tree) -> int:
    return len(leaves(t))


def iter_internal(t: Tree) -> Iterator[Internal]:
    """Preorder iteration over internal nodes."""
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, Internal):
            yield node
            stack.extend(reversed(node.children))


def spans(t: Tree) -> list[tuple[str | None, int, int]]:
    """(label, start, end) for every internal node, preterminals excluded.

    Spans are fencepost positions: the whole sentence is (0, n).
    """
    out: list[tuple[str | None, int, int]] = []

    def walk(node: Tree, start: int) -> int:
        if isinstance(node, Leaf):
            return start + 1
        end = start
        for child in node.children:
            end = walk(child, end)
        out.append((node.label, start, end))
        return end

    walk(t, 0)
    return out


# ---------------------------------------------------------------------------
# Bracketed treebank text


def read_trees(text: str) -> list[Tree]:
    """Parse bracketed treebank text into a list of trees.

    Accepts one or more balanced-parenthesis expressions separated by
    whitespace. An outermost *unlabeled* wrapper ``( ... )`` around a single
    tree (the PTB file convention) is stripped. ``(TAG word)`` pairs become
    leaves; everything else is an internal node.

    Raises :class:`TreebankParseError` on unbalanced input (with the byte
    offset where the problem was detected) and on structurally invalid
    nodes such as ``(NP)``.
    """
    tokens = _tokenize(text)
    trees: list[Tree] = []
    i = 0
    while i < len(tokens):
        kind, value, offset = tokens[i]
        if kind != "(":
            raise TreebankParseError(f"expected '(', found {value!r}", offset)
        tree, i = _parse_node(tokens, i, top_level=True)
        trees.append(tree)
    return trees


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    # (kind, value, 1-based byte offset); kind is "(", ")" or "tok"
    tokens = []
    i = 0
    n = len(text)
    # Byte offsets differ from char offsets only past the first non-ASCII
    # char, so track them incrementally instead of re-encoding prefixes.
    byte_pos = 1
    while i < n:
        c = text[i]
        if c in "()":
            tokens.append((c, c, byte_pos))
            i += 1
            byte_pos += 1
        elif c.isspace():
            i += 1
            byte_pos += len(c.encode("utf-8"))
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in "()":
                j += 1
            tokens.append(("tok", text[i:j], byte_pos))
            byte_pos += len(text[i:j].encode("utf-8"))
            i = j
    return tokens


def _parse_node(tokens, i, top_level=False):
    # tokens[i] is "(". Returns (tree, next index).
    open_offset = tokens[i][2]
    i += 1
    label: str | None = None
    if i < len(tokens) and tokens[i][0] == "tok":
        label = tokens[i][1]
        i += 1

    children: list[Tree] = []
    word: str | None = None
    while True:
        if i >= len(tokens):
            end = tokens[-1][2] + len(tokens[-1][1].encode("utf-8")) if tokens else 1
            raise TreebankParseError("unbalanced parentheses: unexpected end of input", end)
        kind, value, offset = tokens[i]
        if kind == ")":
            i += 1
            break
        if kind == "(":
            if word is not None:
                raise TreebankParseError("subtree after word in leaf node", offset)
            child, i = _parse_node(tokens, i)
            children.append(child)
        else:
            if word is not None or children:
                raise TreebankParseError(f"unexpected token {value!r} inside node", offset)
            word = value
            i += 1

    if word is not None:
        # the first token after "(" always parses as the label, so a word
        # here implies a label
        return Leaf(word=word, tag=label), i

    if not children:
        raise TreebankParseError("internal node with zero children", open_offset)

    if label is None:
        # PTB wrapper convention: strip a single-child unlabeled node.
        if top_level and len(children) == 1:
            return children[0], i
        raise TreebankParseError("unlabeled node with multiple children", open_offset)

    return Internal(label, tuple(children)), i


def write_tree(t: Tree) -> str:
    """Serialize a tree to its bracketed form (single spaces, no newline).

    Round-trips: ``read_trees(write_tree(t))[0]`` equals ``t`` structurally.
    Transform-internal trees (leaf chains, dummy labels) are rejected;
    run ``unbinarize``/``expand_unaries`` first.
    """
    parts: list[str] = []
    _write(t, parts)
    return "".join(parts)


def _write(t: Tree, parts: list[str]) -> None:
    if isinstance(t, Leaf):
        if t.chain:
            raise ValueError("cannot serialize a leaf carrying a collapsed unary chain")
        parts.append(f"({t.tag} {t.word})")
        return
    if t.label is None:
        raise ValueError("cannot serialize a dummy-labeled node")
    parts.append(f"({t.label}")
    for child in t.children:
        parts.append(" ")
        _write(child, parts)
    parts.append(")")


def write_trees(ts: list[Tree]) -> str:
    """One tree per line, trailing newline if non-empty."""
    return "".join(write_tree(t) + "\n" for t in ts)


# ---------------------------------------------------------------------------
# evalb-style preprocessing


def strip_label(label: str) -> str:
    """Drop function tags and coindexation: ``NP-SBJ-1`` -> ``NP``.

    Labels that themselves start with ``-`` (``-LRB-``, ``-NONE-``) are
    kept whole.
    """
    if label.startswith("-"):
        return label
    for sep in "-=":
        pos = label.find(sep)
        if pos != -1:
            label = label[:pos]
    return label


def strip_annotations(
    t: Tree,
    strip_function_tags: bool = True,
    drop_trace_subtrees: bool = True,
) -> Tree:
    """Standard evaluation preprocessing.

    With ``strip_function_tags``, internal labels lose everything from the
    first ``-`` or ``=`` (bracket-style labels like ``-LRB-`` excepted).
    With ``drop_trace_subtrees``, leaves tagged ``-NONE-`` are removed and
    ancestors left childless are removed recursively.

    Raises :class:`EmptyTreeError` if nothing remains.
    """
    stripped = _strip(t, strip_function_tags, drop_trace_subtrees)
    if stripped is None:
        raise EmptyTreeError("tree is empty after removing trace subtrees")
    return stripped


def _strip(t: Tree, strip_tags: bool, drop_traces: bool) -> Tree | None:
    if isinstance(t, Leaf):
        if drop_traces and t.tag == TRACE_TAG:
            return None
        return t
    children = []
    for child in t.children:
        kept = _strip(child, strip_tags, drop_traces)
        if kept is not None:
            children.append(kept)
    if not children:
        return None
    label = t.label
    if strip_tags and label is not None:
        label = strip_label(label)
    return Internal(label, tuple(children))

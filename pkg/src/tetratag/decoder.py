"""Optimal tag-sequence search over per-position scores.

``dp_decode`` finds the highest-scoring *valid* tag sequence for a sentence
under a stack-depth cap, by dynamic programming over (actions taken, stack
depth) states. Because validity depends only on the stack-element count,
the table has (2n) x (d+1) cells and each transition moves depth by at most
one, so decoding runs in O(n * d) time (the textbook bound for a lattice
with depth-crossing transitions would be O(n * d^2); this lattice has none).

Scores are additive log-domain values; no normalization is applied. Labels
never affect validity, so the per-position score of a structural action is
the maximum over its label variants, folded once before the sweep.

Ties are broken deterministically: among equal-score paths, prefer the one
that at the earliest differing step has the lower resulting depth, then the
smaller action in the order l < r < L < R, then the lexicographically
smallest label ("no label" sorts first). ``oracle_decode`` applies the same
rule by exhaustive enumeration and exists to cross-check optimality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .codec import (
    ACTIONS,
    TagSequence,
    TetraTag,
    Violation,
    check_validity,
    split_tag_text,
)

NEG_INF = float("-inf")

#: Scores at or below this value mark tags that are unavailable at a
#: position (e.g. combine tags in word rows of a dense score grid).
SCORE_SENTINEL = -1e30


class NoValidPathError(ValueError):
    """No valid sequence exists under the given depth cap."""


class OracleLimitError(ValueError):
    """Sentence too long for exhaustive enumeration."""


@dataclass(frozen=True)
class DecoderConfig:
    max_depth: int = 8
    tie_break: str = "depth-struct-label"

    def __post_init__(self):
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if self.tie_break != "depth-struct-label":
            raise ValueError(f"unknown tie-break rule {self.tie_break!r}")


@dataclass
class ScoreMatrix:
    """Per-position, per-tag scores for one sentence.

    Rows are in position order (word, fencepost, word, ...), columns follow
    ``vocabulary`` (serialized tag strings). All values must be finite;
    cells for tags that cannot occur at a row's position are ignored and
    conventionally hold :data:`SCORE_SENTINEL`.
    """

    vocabulary: tuple[str, ...]
    data: np.ndarray
    sentence_id: str = ""

    def __post_init__(self):
        self.vocabulary = tuple(self.vocabulary)
        self.data = np.asarray(self.data, dtype=np.float64)
        if self.data.ndim != 2 or self.data.shape[1] != len(self.vocabulary):
            raise ValueError(
                f"score grid shape {self.data.shape} does not match "
                f"vocabulary size {len(self.vocabulary)}"
            )
        rows = self.data.shape[0]
        if rows < 1 or rows % 2 == 0:
            raise ValueError(f"score grid must have 2n-1 rows, got {rows}")
        if not np.isfinite(self.data).all():
            raise ValueError("score grid contains non-finite values")

    @property
    def n(self) -> int:
        return (self.data.shape[0] + 1) // 2

    @property
    def positions(self) -> int:
        return self.data.shape[0]


class _FoldedScores(NamedTuple):
    # scores[t][a] / labels[t][a] for action index a in ACTIONS order;
    # unavailable actions score -inf.
    scores: list[tuple[float, float, float, float]]
    labels: list[tuple[str | None, str | None, str | None, str | None]]


def _label_key(label: str | None) -> str:
    return "" if label is None else label


def fold_scores(scores: ScoreMatrix) -> _FoldedScores:
    """Per-position best score and argmax label for each structural action.

    Label ties go to the lexicographically smallest label, with "no label"
    smallest of all. Only parity-appropriate entries are ever read by the
    decoders, so folds of out-of-position cells are harmless.
    """
    groups: list[list[tuple[str, str | None]]] = [[] for _ in ACTIONS]
    for col, text in enumerate(scores.vocabulary):
        action, label = split_tag_text(text)
        groups[ACTIONS.index(action)].append((col, label))
    for group in groups:
        group.sort(key=lambda item: _label_key(item[1]))

    T = scores.positions
    folded = np.full((T, 4), NEG_INF)
    argmax_labels: list[list[str | None]] = [[None] * 4 for _ in range(T)]
    for a, group in enumerate(groups):
        if not group:
            continue
        cols = [col for col, _ in group]
        if cols == list(range(cols[0], cols[-1] + 1)):
            sub = scores.data[:, cols[0] : cols[-1] + 1]  # view, no gather
        else:
            sub = scores.data[:, cols]
        best_idx = np.argmax(sub, axis=1)  # first max: smallest label wins ties
        folded[:, a] = sub[np.arange(T), best_idx]
        labels = [label for _, label in group]
        for t in range(T):
            argmax_labels[t][a] = labels[best_idx[t]]
    return _FoldedScores(
        [tuple(row) for row in folded.tolist()],
        [tuple(row) for row in argmax_labels],
    )


@dataclass
class Lattice:
    """The (actions taken) x (stack depth) dynamic-program table.

    ``best[t][k]`` is the best score for completing actions ``t..`` starting
    from depth ``k`` and ending at depth 1; the table is filled from the end
    so that ``choice[t][k]`` (an index into ``ACTIONS``, -1 when dead) reads
    forward and realizes the earliest-divergence tie-break directly.
    ``best[0][0]`` is the total score of the optimal sequence and
    ``best[-1]`` has 0 at depth 1, -inf elsewhere.
    """

    best: list[list[float]]
    choice: list[list[int]]
    folded: _FoldedScores = field(repr=False)


def _next_depth(action: int, k: int) -> int:
    if action == 0:  # l
        return k + 1
    if action == 3:  # R
        return k - 1
    return k  # r, L


def build_lattice(scores: ScoreMatrix, config: DecoderConfig = DecoderConfig()) -> Lattice:
    folded = fold_scores(scores)
    T = scores.positions
    d = config.max_depth
    best = [[NEG_INF] * (d + 1) for _ in range(T + 1)]
    choice = [[-1] * (d + 1) for _ in range(T)]
    best[T][1] = 0.0

    fences = T // 2
    for t in range(T - 1, -1, -1):
        nxt = best[t + 1]
        row_best = best[t]
        row_choice = choice[t]
        f = folded.scores[t]
        # reachability bounds: depth after t actions is at most the number
        # of word positions seen, and must get back to 1 using the
        # remaining fenceposts (one pop each)
        k_hi = min(d, (t + 1) // 2, 1 + fences - t // 2)
        # the preferred candidate (lower resulting depth) is evaluated
        # first; the other replaces it only on a strictly better score
        if t % 2 == 0:
            f_l, f_r = f[0], f[1]
            for k in range(k_hi + 1):
                score = NEG_INF
                action = -1
                if k >= 1:
                    cand = f_r + nxt[k]
                    if cand > NEG_INF:
                        score = cand
                        action = 1
                if k < d:
                    cand = f_l + nxt[k + 1]
                    if cand > score:
                        score = cand
                        action = 0
                row_best[k] = score
                row_choice[k] = action
        else:
            f_L, f_R = f[2], f[3]
            for k in range(k_hi + 1):
                score = NEG_INF
                action = -1
                if k >= 2:
                    cand = f_R + nxt[k - 1]
                    if cand > NEG_INF:
                        score = cand
                        action = 3
                if k >= 1:
                    cand = f_L + nxt[k]
                    if cand > score:
                        score = cand
                        action = 2
                row_best[k] = score
                row_choice[k] = action
    return Lattice(best, choice, folded)


class DecodeResult(NamedTuple):
    tags: TagSequence
    score: float


def dp_decode(scores: ScoreMatrix, config: DecoderConfig = DecoderConfig()) -> DecodeResult:
    """The highest-scoring valid tag sequence under the depth cap.

    The total score is the sum of the chosen per-position tag scores
    (exactly re-summable from the input matrix). Raises
    :class:`NoValidPathError` when no valid sequence exists; since the
    left-branching sequence keeps the stack at depth 1, that can only
    happen when the vocabulary is missing a needed action entirely.
    """
    lattice = build_lattice(scores, config)
    if lattice.best[0][0] == NEG_INF:
        raise NoValidPathError(
            f"no valid tag sequence for n={scores.n} under max_depth={config.max_depth}"
        )
    tags: TagSequence = []
    chosen: list[float] = []
    k = 0
    for t in range(scores.positions):
        a = lattice.choice[t][k]
        assert a >= 0
        tags.append(TetraTag(ACTIONS[a], lattice.folded.labels[t][a]))
        chosen.append(lattice.folded.scores[t][a])
        k = _next_depth(a, k)
    assert k == 1
    return DecodeResult(tags, math.fsum(chosen))


# ---------------------------------------------------------------------------
# Diagnostics


class GreedyResult(NamedTuple):
    tags: TagSequence | None
    violation: Violation | None
    argmax: TagSequence


def greedy_decode(scores: ScoreMatrix) -> GreedyResult:
    """Per-position independent argmax, then a validity check.

    Returns the argmax sequence when it happens to be valid; otherwise the
    first violation alongside the raw argmax. Position-level ties prefer
    the smaller action in ACTIONS order.
    """
    folded = fold_scores(scores)
    argmax: TagSequence = []
    for t in range(scores.positions):
        actions = (0, 1) if t % 2 == 0 else (2, 3)
        a = max(actions, key=lambda a: (folded.scores[t][a], -a))
        argmax.append(TetraTag(ACTIONS[a], folded.labels[t][a]))
    violation = check_validity(argmax)
    if violation is None:
        return GreedyResult(list(argmax), None, argmax)
    return GreedyResult(None, violation, argmax)


# ---------------------------------------------------------------------------
# Exhaustive oracle


DEFAULT_ORACLE_LIMIT = 12


@lru_cache(maxsize=32)
def _valid_paths(n: int, d: int) -> tuple[np.ndarray, np.ndarray]:
    """(actions, depths) arrays for every valid sequence over n words.

    Depth-first search applying exactly the validity rules; rows are in
    DFS order. Shapes are (count, 2n-1).
    """
    T = 2 * n - 1
    actions_out: list[list[int]] = []
    depths_out: list[list[int]] = []
    path: list[int] = []
    depths: list[int] = []

    def rec(t: int, depth: int):
        if t == T:
            if depth == 1:
                actions_out.append(path.copy())
                depths_out.append(depths.copy())
            return
        # prune: even popping at every remaining fencepost cannot get back
        # to 1, or even pushing at every remaining word position cannot
        f_left = T // 2 - t // 2
        w_left = T - t - f_left
        if depth - f_left > 1 or depth + w_left < 1:
            return
        if t % 2 == 0:
            if depth + 1 <= d:
                path.append(0)
                depths.append(depth + 1)
                rec(t + 1, depth + 1)
                path.pop()
                depths.pop()
            if depth >= 1:
                path.append(1)
                depths.append(depth)
                rec(t + 1, depth)
                path.pop()
                depths.pop()
        else:
            if depth >= 1:
                path.append(2)
                depths.append(depth)
                rec(t + 1, depth)
                path.pop()
                depths.pop()
            if depth >= 2:
                path.append(3)
                depths.append(depth - 1)
                rec(t + 1, depth - 1)
                path.pop()
                depths.pop()

    rec(0, 0)
    if not actions_out:
        return np.empty((0, T), dtype=np.int8), np.empty((0, T), dtype=np.int8)
    return np.array(actions_out, dtype=np.int8), np.array(depths_out, dtype=np.int8)


def oracle_decode(
    scores: ScoreMatrix,
    config: DecoderConfig = DecoderConfig(),
    limit: int = DEFAULT_ORACLE_LIMIT,
) -> DecodeResult:
    """Exhaustive maximum over all valid sequences; dp_decode's test oracle.

    Applies the same label folding and the same tie-break rule as
    ``dp_decode``. Refuses sentences longer than ``limit`` words (the
    candidate space grows exponentially).
    """
    n = scores.n
    if n > limit:
        raise OracleLimitError(f"n={n} exceeds the enumeration limit of {limit}")
    actions, depths = _valid_paths(n, config.max_depth)
    if len(actions) == 0:
        raise NoValidPathError(
            f"no valid tag sequence for n={n} under max_depth={config.max_depth}"
        )
    folded = fold_scores(scores)
    T = scores.positions
    grid = np.array(folded.scores)  # (T, 4)
    totals = grid[np.arange(T), actions].sum(axis=1)
    top = totals.max()
    if top == NEG_INF:
        raise NoValidPathError(
            f"no finite-scoring valid sequence for n={n} under max_depth={config.max_depth}"
        )
    tied = np.flatnonzero(totals == top)
    best_row = min(
        tied,
        key=lambda i: tuple(
            (int(depths[i][t]), int(actions[i][t]), _label_key(folded.labels[t][actions[i][t]]))
            for t in range(T)
        ),
    )
    seq = [TetraTag(ACTIONS[a], folded.labels[t][a]) for t, a in enumerate(actions[best_row])]
    total = math.fsum(folded.scores[t][a] for t, a in enumerate(actions[best_row]))
    return DecodeResult(seq, total)

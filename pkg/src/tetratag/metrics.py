"""Labeled bracket F1, tag accuracy, and stack-depth coverage analysis."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from . import transform
from .codec import TagSequence, depth_profile, encode, decode
from .decoder import DecoderConfig, NoValidPathError, dp_decode
from .scores_io import DEFAULT_MARGIN, induce_vocabulary, one_hot_scores
from .trees import EmptyTreeError, Tree, leaves, spans, strip_annotations


def brackets(t: Tree) -> Counter:
    """Multiset of (label, start, end) over internal nodes.

    Preterminals live on leaves and contribute nothing; every element of an
    expanded unary chain contributes its own bracket over the same span,
    which is why this is a multiset. The root bracket is included.
    """
    return Counter((label, start, end) for label, start, end in spans(t))


@dataclass
class SentenceScore:
    index: int
    matched: int
    gold_count: int
    pred_count: int

    @property
    def f1(self) -> float:
        return _f1(self.matched, self.gold_count, self.pred_count)[2]


@dataclass
class F1Report:
    precision: float
    recall: float
    f1: float
    matched: int
    gold_total: int
    pred_total: int
    sentences: list[SentenceScore] = field(default_factory=list)
    skipped: list[tuple[int, str]] = field(default_factory=list)

    def to_table(self) -> str:
        lines = [
            f"precision  {self.precision:6.2f}",
            f"recall     {self.recall:6.2f}",
            f"F1         {self.f1:6.2f}",
            f"matched/gold/predicted brackets  "
            f"{self.matched}/{self.gold_total}/{self.pred_total}",
            f"sentences scored  {len(self.sentences)}",
        ]
        if self.skipped:
            lines.append(f"sentences skipped {len(self.skipped)}")
            for index, reason in self.skipped:
                lines.append(f"  sentence {index}: {reason}")
        return "\n".join(lines)


def _f1(matched: int, gold: int, pred: int) -> tuple[float, float, float]:
    # Zero denominators are defined as 0, per the usual evalb convention.
    precision = 100.0 * matched / pred if pred else 0.0
    recall = 100.0 * matched / gold if gold else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


def bracket_f1(
    gold: Sequence[Tree],
    pred: Sequence[Tree | None],
    strip_function_tags: bool = True,
    drop_traces: bool = True,
    include_root: bool = True,
) -> F1Report:
    """Corpus-level labeled bracket F1 with per-sentence breakdown.

    Both sides get the same evaluation preprocessing (function-tag
    stripping and trace removal by default). Sentence pairs whose leaf
    counts disagree after preprocessing are excluded and reported in
    ``skipped``; a ``None`` prediction counts as an empty parse (its gold
    brackets go unmatched). Scores are percentages.
    """
    if len(gold) != len(pred):
        raise ValueError(f"{len(gold)} gold trees vs {len(pred)} predictions")
    matched_total = gold_total = pred_total = 0
    sentences: list[SentenceScore] = []
    skipped: list[tuple[int, str]] = []
    for index, (g, p) in enumerate(zip(gold, pred)):
        try:
            g = strip_annotations(g, strip_function_tags, drop_traces)
        except EmptyTreeError:
            skipped.append((index, "gold tree empty after preprocessing"))
            continue
        g_brackets = _eval_brackets(g, include_root)
        if p is None:
            p_brackets: Counter = Counter()
        else:
            try:
                p = strip_annotations(p, strip_function_tags, drop_traces)
            except EmptyTreeError:
                skipped.append((index, "predicted tree empty after preprocessing"))
                continue
            if len(leaves(p)) != len(leaves(g)):
                skipped.append(
                    (index, f"leaf counts differ: gold {len(leaves(g))}, predicted {len(leaves(p))}")
                )
                continue
            p_brackets = _eval_brackets(p, include_root)
        matched = sum(min(count, p_brackets[b]) for b, count in g_brackets.items())
        sentences.append(
            SentenceScore(index, matched, sum(g_brackets.values()), sum(p_brackets.values()))
        )
        matched_total += matched
        gold_total += sum(g_brackets.values())
        pred_total += sum(p_brackets.values())
    precision, recall, f1 = _f1(matched_total, gold_total, pred_total)
    return F1Report(precision, recall, f1, matched_total, gold_total, pred_total, sentences, skipped)


def _eval_brackets(t: Tree, include_root: bool) -> Counter:
    result = brackets(t)
    if not include_root:
        n = len(leaves(t))
        for label, start, end in list(result):
            if (start, end) == (0, n):
                del result[(label, start, end)]
                break
    return result


# ---------------------------------------------------------------------------
# Tag accuracy


def tag_accuracy(
    gold: Sequence[TagSequence], pred: Sequence[TagSequence]
) -> tuple[float, float]:
    """(structural accuracy, structural+label accuracy) over all positions."""
    if len(gold) != len(pred):
        raise ValueError(f"{len(gold)} gold sequences vs {len(pred)} predictions")
    positions = structural = labeled = 0
    for index, (g, p) in enumerate(zip(gold, pred)):
        if len(g) != len(p):
            raise ValueError(
                f"sentence {index}: gold has {len(g)} tags, prediction has {len(p)}"
            )
        for gt, pt in zip(g, p):
            positions += 1
            if gt.action == pt.action:
                structural += 1
                if gt.label == pt.label:
                    labeled += 1
    if positions == 0:
        return 0.0, 0.0
    return structural / positions, labeled / positions


# ---------------------------------------------------------------------------
# Coverage under depth caps


@dataclass
class CoverageEntry:
    cap: int
    representable_fraction: float
    f1_under_cap: float


@dataclass
class CoverageReport:
    entries: list[CoverageEntry]
    depth_histogram: dict[int, int]
    max_depth: int
    n_trees: int

    def to_table(self) -> str:
        lines = [
            f"trees analyzed: {self.n_trees}; max gold stack depth: {self.max_depth}",
            "depth histogram (max stack depth -> tree count):",
        ]
        for depth in sorted(self.depth_histogram):
            lines.append(f"  {depth:3d}  {self.depth_histogram[depth]}")
        lines.append("")
        lines.append("cap  representable  F1(gold one-hot decode under cap)")
        for e in self.entries:
            lines.append(
                f"{e.cap:3d}  {e.representable_fraction:13.4f}  {e.f1_under_cap:10.2f}"
            )
        return "\n".join(lines)

    def to_records(self) -> str:
        lines = ["cap\trepresentable_fraction\tf1_under_cap"]
        for e in self.entries:
            lines.append(f"{e.cap}\t{e.representable_fraction:.6f}\t{e.f1_under_cap:.4f}")
        return "\n".join(lines) + "\n"


def gold_tags(t: Tree) -> TagSequence:
    """The tag sequence of a tree (collapse, binarize, encode)."""
    return encode(transform.binarize_right(transform.collapse_unaries(t)))


def coverage_analysis(
    corpus: Sequence[Tree],
    caps: Sequence[int],
    margin: float = DEFAULT_MARGIN,
) -> CoverageReport:
    """Fraction of representable trees and capped-decode F1 per depth cap.

    For each tree the gold tag sequence gives its maximum stack depth; for
    each cap, one-hot gold scores are decoded under that cap and scored
    against the original corpus. Sentences with no valid sequence under a
    cap count as unparsed. F1 here measures decoding fidelity, not any
    model: scores are synthetic one-hot, so with cap >= corpus max depth it
    is exactly 100.
    """
    sequences = [gold_tags(t) for t in corpus]
    depths = [max(depth_profile(seq)) for seq in sequences]
    vocabulary = induce_vocabulary(sequences)
    sentences = [[(leaf.word, leaf.tag) for leaf in leaves(t)] for t in corpus]

    entries = []
    for cap in caps:
        config = DecoderConfig(max_depth=cap)
        preds: list[Tree | None] = []
        for seq, sentence in zip(sequences, sentences):
            matrix = one_hot_scores(seq, vocabulary, margin)
            try:
                result = dp_decode(matrix, config)
            except NoValidPathError:
                preds.append(None)
                continue
            tree = transform.expand_unaries(
                transform.unbinarize(decode(result.tags, sentence))
            )
            preds.append(tree)
        report = bracket_f1(list(corpus), preds)
        fraction = sum(1 for d in depths if d <= cap) / len(corpus) if corpus else 0.0
        entries.append(CoverageEntry(cap, fraction, report.f1))
    return CoverageReport(
        entries,
        dict(sorted(Counter(depths).items())),
        max(depths, default=0),
        len(corpus),
    )

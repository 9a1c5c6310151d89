"""Command-line surface for batch encoding, decoding, evaluation, coverage,
and decode-throughput benchmarks.

Exit codes are a stable scripting contract: 0 success, 1 usage error,
2 data error.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import transform, treegen
from .codec import (
    CodecError,
    InvalidTagSequenceError,
    decode,
    depth_profile,
    format_tag_line,
    parse_tag_line,
)
from .decoder import DecoderConfig, NoValidPathError, dp_decode
from .metrics import bracket_f1, coverage_analysis, gold_tags
from .scores_io import (
    ScoreFileError,
    induce_vocabulary,
    load_scores,
    read_vocab,
    save_scores,
    synth_scores,
    write_vocab,
)
from .trees import TreebankParseError, leaves, read_trees, write_tree

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

DATA_ERRORS = (
    TreebankParseError,
    CodecError,
    ScoreFileError,
    NoValidPathError,
    transform.TransformError,
    OSError,
    ValueError,
)


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the documented contract is 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_corpus(path):
    with open(path, encoding="utf-8") as handle:
        return read_trees(handle.read())


def _read_sentences(path):
    """One sentence per line, space-separated ``word/TAG`` tokens.

    The split is at the last slash, so words may contain slashes as long
    as preterminal tags do not.
    """
    sentences = []
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, 1):
            if not line.strip():
                continue
            pairs = []
            for token in line.split():
                word, sep, tag = token.rpartition("/")
                if not sep or not word or not tag:
                    raise ValueError(
                        f"{path}:{lineno}: token {token!r} is not word/TAG"
                    )
                pairs.append((word, tag))
            sentences.append(pairs)
    return sentences


def _format_sentence(tree) -> str:
    return " ".join(f"{leaf.word}/{leaf.tag}" for leaf in leaves(tree))


# ---------------------------------------------------------------------------
# Subcommands


def cmd_encode(args) -> int:
    trees = _read_corpus(args.trees)
    sequences = []
    for i, tree in enumerate(trees):
        try:
            sequences.append(gold_tags(tree))
        except (transform.TransformError, CodecError) as exc:
            raise ValueError(f"tree {i}: {exc}") from exc
    with open(args.tags, "w", encoding="utf-8") as handle:
        for seq in sequences:
            handle.write(format_tag_line(seq) + "\n")
    write_vocab(induce_vocabulary(sequences), args.vocab)
    if args.sentences:
        with open(args.sentences, "w", encoding="utf-8") as handle:
            for tree in trees:
                handle.write(_format_sentence(tree) + "\n")

    lengths = Counter(len(leaves(t)) for t in trees)
    print(f"encoded {len(trees)} trees -> {args.tags}")
    if trees:
        sizes = sorted(lengths)
        print(
            f"sentence lengths: min {sizes[0]}, median "
            f"{sorted(lengths.elements())[len(trees) // 2]}, max {sizes[-1]}"
        )
        print(f"max stack depth: {max(max(depth_profile(seq)) for seq in sequences)}")
    return EXIT_OK


def _decode_one(item):
    index, matrix, sentence, config, root_label = item
    if len(sentence) != matrix.n:
        raise ValueError(
            f"record {matrix.sentence_id or index!r}: scores are for {matrix.n} "
            f"words but sentence {index} has {len(sentence)}"
        )
    result = dp_decode(matrix, config)
    tree = transform.expand_unaries(
        transform.unbinarize(decode(result.tags, sentence), root_label)
    )
    return write_tree(tree)


def cmd_decode(args) -> int:
    sentences = _read_sentences(args.sentences)
    config = DecoderConfig(max_depth=args.max_depth, tie_break=args.tie_break)

    if args.tags:
        lines = []
        with open(args.tags, encoding="utf-8") as handle:
            tag_lines = [parse_tag_line(line) for line in handle if line.strip()]
        if len(tag_lines) != len(sentences):
            raise ValueError(
                f"{len(tag_lines)} tag lines vs {len(sentences)} sentences"
            )
        for index, (tags, sentence) in enumerate(zip(tag_lines, sentences)):
            try:
                tree = transform.expand_unaries(
                    transform.unbinarize(decode(tags, sentence), args.root_label)
                )
            except (InvalidTagSequenceError, CodecError) as exc:
                raise ValueError(f"sentence {index}: {exc}") from exc
            lines.append(write_tree(tree))
    else:
        matrices = load_scores(args.scores)
        if len(matrices) != len(sentences):
            raise ValueError(
                f"{len(matrices)} score records vs {len(sentences)} sentences"
            )
        work = [
            (i, m, s, config, args.root_label)
            for i, (m, s) in enumerate(zip(matrices, sentences))
        ]
        failures = []
        lines = []
        if args.threads > 1:
            with ThreadPoolExecutor(max_workers=args.threads) as pool:
                results = pool.map(_guarded_decode, work)
        else:
            results = map(_guarded_decode, work)
        for index, outcome in enumerate(results):
            if isinstance(outcome, Exception):
                failures.append((index, outcome))
            else:
                lines.append(outcome)
        if failures:
            for index, exc in failures:
                record = matrices[index].sentence_id or str(index)
                print(f"record {record}: {exc}", file=sys.stderr)
            return EXIT_DATA

    with open(args.out, "w", encoding="utf-8") as handle:
        for line in lines:
            handle.write(line + "\n")
    print(f"decoded {len(lines)} sentences -> {args.out}")
    return EXIT_OK


def _guarded_decode(item):
    try:
        return _decode_one(item)
    except (NoValidPathError, InvalidTagSequenceError, ValueError) as exc:
        return exc


def cmd_eval(args) -> int:
    gold = _read_corpus(args.gold)
    pred = _read_corpus(args.pred)
    report = bracket_f1(
        gold,
        pred,
        strip_function_tags=args.strip_function_tags,
        drop_traces=not args.keep_traces,
    )
    print(report.to_table())
    if args.per_sentence:
        print("sentence\tmatched\tgold\tpredicted\tf1")
        for s in report.sentences:
            print(f"{s.index}\t{s.matched}\t{s.gold_count}\t{s.pred_count}\t{s.f1:.2f}")
    return EXIT_OK


def cmd_coverage(args) -> int:
    trees = _read_corpus(args.trees)
    if not trees:
        raise ValueError("coverage requires a non-empty corpus")
    report = coverage_analysis(trees, args.caps)
    print(report.to_table())
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(report.to_records())
        print(f"records -> {args.out}")
    return EXIT_OK


def cmd_synth(args) -> int:
    trees = _read_corpus(args.trees)
    sequences = [gold_tags(t) for t in trees]
    vocabulary = read_vocab(args.vocab) if args.vocab else None
    matrices = synth_scores(
        sequences, noise_sigma=args.sigma, seed=args.seed, vocabulary=vocabulary
    )
    save_scores(matrices, args.out, format=args.format)
    if args.sentences:
        with open(args.sentences, "w", encoding="utf-8") as handle:
            for tree in trees:
                handle.write(_format_sentence(tree) + "\n")
    print(f"wrote {len(matrices)} score records -> {args.out}")
    return EXIT_OK


def cmd_bench(args) -> int:
    rng = random.Random(args.seed)
    config = DecoderConfig(max_depth=args.max_depth)

    if args.trees:
        corpus = _read_corpus(args.trees)
        sequences = [gold_tags(t) for t in corpus]
        vocabulary = induce_vocabulary(sequences)
        matrices = synth_scores(sequences, noise_sigma=args.sigma,
                                seed=args.seed, vocabulary=vocabulary)
        sentences = [[(l.word, l.tag) for l in leaves(t)] for t in corpus]
        start = time.perf_counter()
        for matrix, sentence in zip(matrices, sentences):
            result = dp_decode(matrix, config)
            transform.expand_unaries(
                transform.unbinarize(decode(result.tags, sentence))
            )
        elapsed = time.perf_counter() - start
        print(f"corpus: {len(corpus)} sentences decoded in {elapsed:.3f}s "
              f"({len(corpus) / elapsed:.1f} sents/s, scoring excluded)")

    trees = [treegen.random_tree(rng, n) for n in args.sizes]
    sequences = [gold_tags(t) for t in trees]
    # one shared vocabulary, so only n varies across timing rows
    vocabulary = induce_vocabulary(sequences)
    matrices = synth_scores(sequences, noise_sigma=args.sigma, seed=args.seed,
                            vocabulary=vocabulary)
    rows = []
    for n, tree, matrix in zip(args.sizes, trees, matrices):
        sentence = [(leaf.word, leaf.tag) for leaf in leaves(tree)]
        timings = []
        for _ in range(args.repeats):
            start = time.perf_counter()
            result = dp_decode(matrix, config)
            transform.expand_unaries(
                transform.unbinarize(decode(result.tags, sentence))
            )
            timings.append(time.perf_counter() - start)
        rows.append((n, min(timings)))

    print("n\tseconds\tsents/s")
    for n, seconds in rows:
        print(f"{n}\t{seconds:.6f}\t{1.0 / seconds:.1f}")
    if len(rows) >= 3:
        r2 = linear_fit_r2([n for n, _ in rows], [s for _, s in rows])
        print(f"linear fit R^2: {r2:.5f}")
    return EXIT_OK


def linear_fit_r2(xs, ys) -> float:
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    slope, intercept = np.polyfit(x, y, 1)
    residuals = y - (slope * x + intercept)
    total = float(((y - y.mean()) ** 2).sum())
    if total == 0.0:
        return 1.0
    return 1.0 - float((residuals**2).sum()) / total


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="tetratag",
        description="Constituency parsing as tagging: tree/tag conversion, "
        "depth-bounded decoding, evaluation, and benchmarks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    encode = sub.add_parser("encode", help="trees -> tag lines + vocabulary")
    encode.add_argument("trees", help="bracketed treebank file")
    encode.add_argument("--tags", required=True, help="output tag-line file")
    encode.add_argument("--vocab", required=True, help="output vocabulary file")
    encode.add_argument("--sentences", help="also write word/TAG lines here")
    encode.set_defaults(func=cmd_encode)

    dec = sub.add_parser("decode", help="scores (or tag lines) + sentences -> trees")
    src = dec.add_mutually_exclusive_group(required=True)
    src.add_argument("--scores", help="score file (text or binary)")
    src.add_argument("--tags", help="tag-line file (bypasses the score decoder)")
    dec.add_argument("--sentences", required=True, help="word/TAG lines")
    dec.add_argument("--out", required=True, help="output treebank file")
    dec.add_argument("--max-depth", type=int, default=8,
                     help="stack depth cap for decoding (default: 8)")
    dec.add_argument("--tie-break", default="depth-struct-label",
                     help="tie-breaking rule (default: depth-struct-label)")
    dec.add_argument("--threads", type=int, default=1,
                     help="decode sentences in parallel; output order is "
                     "always input order (default: 1)")
    dec.add_argument("--root-label", default=transform.DEFAULT_ROOT_LABEL,
                     help="label for a dummy root produced by decoding "
                     "(default: TOP)")
    dec.set_defaults(func=cmd_decode)

    ev = sub.add_parser("eval", help="labeled bracket F1 of predictions vs gold")
    ev.add_argument("gold")
    ev.add_argument("pred")
    ev.add_argument("--strip-function-tags", action=argparse.BooleanOptionalAction,
                    default=True, help="strip -SBJ etc. before scoring (default: on)")
    ev.add_argument("--keep-traces", action="store_true",
                    help="keep -NONE- subtrees instead of deleting them")
    ev.add_argument("--per-sentence", action="store_true",
                    help="also print a per-sentence TSV breakdown")
    ev.set_defaults(func=cmd_eval)

    cov = sub.add_parser("coverage", help="representable fraction and capped-decode "
                         "F1 per stack-depth cap")
    cov.add_argument("trees")
    cov.add_argument("--caps", type=int, nargs="+", default=list(range(1, 11)),
                     help="depth caps to analyze (default: 1..10)")
    cov.add_argument("--out", help="write machine-readable TSV records here")
    cov.set_defaults(func=cmd_coverage)

    synth = sub.add_parser("synth", help="gold one-hot scores (plus optional noise) "
                           "from a treebank")
    synth.add_argument("trees")
    synth.add_argument("--out", required=True, help="output score file")
    synth.add_argument("--sigma", type=float, default=0.0,
                       help="Gaussian noise sigma (default: 0)")
    synth.add_argument("--seed", type=int, default=0, help="noise seed (default: 0)")
    synth.add_argument("--format", choices=("text", "binary"), default="text",
                       help="score file encoding (default: text)")
    synth.add_argument("--vocab", help="use this vocabulary file instead of "
                       "inducing one from the corpus")
    synth.add_argument("--sentences", help="also write word/TAG lines here")
    synth.set_defaults(func=cmd_synth)

    bench = sub.add_parser("bench", help="decode-only throughput on synthetic "
                           "sentences (scoring excluded)")
    bench.add_argument("trees", nargs="?", default=None,
                       help="optional treebank; decoding it is timed first")
    bench.add_argument("--sizes", type=int, nargs="+",
                       default=[10, 100, 1000, 10000],
                       help="sentence lengths (default: 10 100 1000 10000)")
    bench.add_argument("--repeats", type=int, default=3,
                       help="timed repetitions per size; best is kept (default: 3)")
    bench.add_argument("--seed", type=int, default=0, help="tree/noise seed")
    bench.add_argument("--sigma", type=float, default=1.0,
                       help="score noise sigma (default: 1)")
    bench.add_argument("--max-depth", type=int, default=8,
                       help="stack depth cap (default: 8)")
    bench.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DATA_ERRORS as exc:
        print(f"tetratag: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())

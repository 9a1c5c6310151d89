"""Score-file formats and synthetic score generation.

This is the boundary between external taggers and the decoder: a model
writes one score grid per sentence (2n-1 rows in position order, one column
per vocabulary tag) and the toolkit decodes them into trees. Two encodings
are supported:

* text — human-readable, tab-separated, scores at 9 significant digits:

      tetratag-scores v1
      vocab <tab-separated tags>
      id <id> n <n>
      <2n-1 score lines, one value per vocabulary entry>
      ...

* binary — length-prefixed little-endian (magic ``TTSC``), bit-exact and
  suitable for throughput benchmarks; see the README for the byte layout.

Cells for tags that cannot occur at a row's position must be present; they
are ignored, and should hold the sentinel minimum value
(:data:`tetratag.decoder.SCORE_SENTINEL`) - anything else draws a warning.

``synth_scores`` produces score files without a neural model: gold tags
score 0, every other in-position tag scores ``-margin``, and optional
Gaussian noise (numpy PCG64 generator, seeded, ziggurat normals) makes the
output reproducibly imperfect.
"""

from __future__ import annotations

import struct
import warnings
from typing import Iterable, Sequence

import numpy as np

from .codec import ACTIONS, TagSequence, split_tag_text
from .decoder import SCORE_SENTINEL, ScoreMatrix

TEXT_HEADER = "tetratag-scores v1"
BINARY_MAGIC = b"TTSC"
BINARY_VERSION = 1

DEFAULT_MARGIN = 4.0


class ScoreFileError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Vocabulary


def vocab_sort_key(tag_text: str):
    action, label = split_tag_text(tag_text)
    return (ACTIONS.index(action), label if label is not None else "")


def induce_vocabulary(sequences: Iterable[TagSequence]) -> tuple[str, ...]:
    """The set of serialized tags occurring in ``sequences``, stably ordered
    (action in l < r < L < R order, then label, unlabeled first)."""
    seen = {str(tag) for seq in sequences for tag in seq}
    return tuple(sorted(seen, key=vocab_sort_key))


def write_vocab(vocabulary: Sequence[str], path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for tag in vocabulary:
            handle.write(tag + "\n")


def read_vocab(path) -> tuple[str, ...]:
    with open(path, encoding="utf-8") as handle:
        vocab = tuple(line.strip() for line in handle if line.strip())
    _check_vocab(vocab)
    return vocab


def _check_vocab(vocab: Sequence[str]) -> None:
    seen = set()
    for text in vocab:
        try:
            split_tag_text(text)
        except ValueError as exc:
            raise ScoreFileError(f"unknown tag {text!r} in vocabulary") from exc
        if text in seen:
            raise ScoreFileError(f"duplicate tag {text!r} in vocabulary")
        seen.add(text)
    if not vocab:
        raise ScoreFileError("empty vocabulary")


def _positions_mask(vocab: Sequence[str], T: int) -> np.ndarray:
    """Boolean (T, V): True where a tag's action parity matches the row."""
    is_shift = np.fromiter((t[0] in "lr" for t in vocab), bool, count=len(vocab))
    word_row = (np.arange(T) % 2 == 0)[:, None]
    return np.where(word_row, is_shift[None, :], ~is_shift[None, :])


# ---------------------------------------------------------------------------
# Synthetic scores


def one_hot_scores(
    gold: TagSequence,
    vocabulary: Sequence[str],
    margin: float = DEFAULT_MARGIN,
    sentence_id: str = "",
) -> ScoreMatrix:
    """Gold tags at 0, every other in-position tag at ``-margin``."""
    T = len(gold)
    V = len(vocabulary)
    index = {tag: col for col, tag in enumerate(vocabulary)}
    data = np.full((T, V), SCORE_SENTINEL)
    mask = _positions_mask(vocabulary, T)
    data[mask] = -margin
    for t, tag in enumerate(gold):
        try:
            data[t, index[str(tag)]] = 0.0
        except KeyError:
            raise ScoreFileError(f"gold tag {tag} missing from vocabulary") from None
    return ScoreMatrix(tuple(vocabulary), data, sentence_id)


def synth_scores(
    gold: Sequence[TagSequence],
    noise_sigma: float = 0.0,
    seed: int = 0,
    margin: float = DEFAULT_MARGIN,
    vocabulary: Sequence[str] | None = None,
) -> list[ScoreMatrix]:
    """One-hot gold scores plus seeded Gaussian noise on in-position cells.

    Identical (gold, sigma, seed) inputs give identical outputs; the noise
    stream is numpy's PCG64 with the given seed.
    """
    if noise_sigma < 0:
        raise ValueError("noise_sigma must be >= 0")
    if vocabulary is None:
        vocabulary = induce_vocabulary(gold)
    rng = np.random.Generator(np.random.PCG64(seed))
    matrices = []
    for i, seq in enumerate(gold):
        matrix = one_hot_scores(seq, vocabulary, margin, sentence_id=str(i))
        if noise_sigma > 0:
            mask = _positions_mask(vocabulary, len(seq))
            matrix.data[mask] += rng.normal(0.0, noise_sigma, int(mask.sum()))
        matrices.append(matrix)
    return matrices


# ---------------------------------------------------------------------------
# Text encoding


def _shared_vocabulary(matrices: Sequence[ScoreMatrix]) -> tuple[str, ...]:
    if not matrices:
        raise ScoreFileError("cannot save an empty score list")
    vocab = matrices[0].vocabulary
    for m in matrices:
        if m.vocabulary != vocab:
            raise ScoreFileError("all records in one file must share a vocabulary")
    return vocab


def save_scores(matrices: Sequence[ScoreMatrix], path, format: str = "text") -> None:
    if format == "text":
        _save_text(matrices, path)
    elif format == "binary":
        _save_binary(matrices, path)
    else:
        raise ValueError(f"unknown score format {format!r}")


def load_scores(path) -> list[ScoreMatrix]:
    """Load a score file, sniffing text vs binary from the leading bytes."""
    with open(path, "rb") as handle:
        magic = handle.read(4)
    if magic == BINARY_MAGIC:
        return _load_binary(path)
    return _load_text(path)


def _save_text(matrices: Sequence[ScoreMatrix], path) -> None:
    vocab = _shared_vocabulary(matrices)
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(TEXT_HEADER + "\n")
        handle.write("vocab\t" + "\t".join(vocab) + "\n")
        for i, m in enumerate(matrices):
            record_id = m.sentence_id or str(i)
            handle.write(f"id {record_id} n {m.n}\n")
            for row in m.data:
                handle.write("\t".join(f"{x:.9g}" for x in row) + "\n")


def _load_text(path) -> list[ScoreMatrix]:
    with open(path, encoding="utf-8") as handle:
        lines = [line.rstrip("\n") for line in handle]
    if not lines or lines[0].strip() != TEXT_HEADER:
        found = lines[0].strip() if lines else "<empty file>"
        raise ScoreFileError(f"bad header {found!r}; expected {TEXT_HEADER!r}")
    if len(lines) < 2 or not lines[1].startswith("vocab\t"):
        raise ScoreFileError("missing vocab line")
    vocab = tuple(lines[1].split("\t")[1:])
    _check_vocab(vocab)

    matrices = []
    i = 2
    while i < len(lines):
        if not lines[i].strip():
            i += 1
            continue
        fields = lines[i].split()
        if len(fields) != 4 or fields[0] != "id" or fields[2] != "n":
            raise ScoreFileError(f"malformed record header at line {i + 1}: {lines[i]!r}")
        record_id, n = fields[1], int(fields[3])
        if n < 1:
            raise ScoreFileError(f"record {record_id!r}: n must be >= 1")
        i += 1
        rows = []
        for r in range(2 * n - 1):
            if i >= len(lines) or lines[i].startswith("id "):
                raise ScoreFileError(
                    f"record {record_id!r}: expected {2 * n - 1} score rows, found {r}"
                )
            values = lines[i].split("\t")
            if len(values) != len(vocab):
                raise ScoreFileError(
                    f"record {record_id!r}, row {r}: {len(values)} values for "
                    f"{len(vocab)} vocabulary tags"
                )
            rows.append([float(v) for v in values])
            i += 1
        if i < len(lines) and lines[i].strip() and not lines[i].startswith("id "):
            raise ScoreFileError(f"record {record_id!r}: more than {2 * n - 1} score rows")
        data = np.array(rows)
        _validate_record(record_id, n, data, vocab)
        matrices.append(ScoreMatrix(vocab, data, record_id))
    return matrices


def _validate_record(record_id: str, n: int, data: np.ndarray, vocab) -> None:
    if not np.isfinite(data).all():
        raise ScoreFileError(f"record {record_id!r} contains non-finite scores")
    mask = _positions_mask(vocab, 2 * n - 1)
    stray = data[~mask] > SCORE_SENTINEL
    if stray.any():
        warnings.warn(
            f"record {record_id!r}: {int(stray.sum())} out-of-position score(s) ignored",
            stacklevel=3,
        )


# ---------------------------------------------------------------------------
# Binary encoding


def _save_binary(matrices: Sequence[ScoreMatrix], path) -> None:
    vocab = _shared_vocabulary(matrices)
    with open(path, "wb") as handle:
        handle.write(BINARY_MAGIC)
        handle.write(struct.pack("<I", BINARY_VERSION))
        handle.write(struct.pack("<I", len(vocab)))
        for tag in vocab:
            raw = tag.encode("utf-8")
            handle.write(struct.pack("<I", len(raw)))
            handle.write(raw)
        handle.write(struct.pack("<I", len(matrices)))
        for i, m in enumerate(matrices):
            raw = (m.sentence_id or str(i)).encode("utf-8")
            handle.write(struct.pack("<I", len(raw)))
            handle.write(raw)
            handle.write(struct.pack("<I", m.n))
            handle.write(np.ascontiguousarray(m.data, dtype="<f8").tobytes())


class _Reader:
    def __init__(self, blob: bytes):
        self.blob = blob
        self.pos = 0

    def take(self, count: int) -> bytes:
        if self.pos + count > len(self.blob):
            raise ScoreFileError("truncated binary score file")
        out = self.blob[self.pos : self.pos + count]
        self.pos += count
        return out

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    def string(self) -> str:
        return self.take(self.u32()).decode("utf-8")


def _load_binary(path) -> list[ScoreMatrix]:
    with open(path, "rb") as handle:
        reader = _Reader(handle.read())
    if reader.take(4) != BINARY_MAGIC:
        raise ScoreFileError("bad magic bytes; not a binary score file")
    version = reader.u32()
    if version != BINARY_VERSION:
        raise ScoreFileError(f"unsupported binary version {version}")
    vocab = tuple(reader.string() for _ in range(reader.u32()))
    _check_vocab(vocab)
    matrices = []
    for _ in range(reader.u32()):
        record_id = reader.string()
        n = reader.u32()
        if n < 1:
            raise ScoreFileError(f"record {record_id!r}: n must be >= 1")
        count = (2 * n - 1) * len(vocab)
        data = np.frombuffer(reader.take(count * 8), dtype="<f8").reshape(
            2 * n - 1, len(vocab)
        )
        data = data.astype(np.float64)  # writable copy in native order
        _validate_record(record_id, n, data, vocab)
        matrices.append(ScoreMatrix(vocab, data, record_id))
    if reader.pos != len(reader.blob):
        raise ScoreFileError("trailing bytes after final record")
    return matrices

"""Constituency parsing as tagging.

A toolkit for the four-action tree/tag-sequence codec: lossless conversion
between parse trees and linear tag sequences, optimal linear-time decoding
of per-position tag scores into trees, bracket F1 evaluation, stack-depth
coverage analysis, and a file-based score interface so any external model
can do the scoring.
"""

from .trees import (
    EmptyTreeError,
    Internal,
    Leaf,
    Tree,
    TreebankParseError,
    leaves,
    read_trees,
    sentence_of,
    spans,
    strip_annotations,
    write_tree,
    write_trees,
)
from .transform import (
    DEFAULT_ROOT_LABEL,
    SEPARATOR,
    TransformError,
    binarize_right,
    check_binary,
    collapse_unaries,
    expand_unaries,
    is_binary,
    unbinarize,
)
from .codec import (
    ACTIONS,
    CodecError,
    InvalidTagSequenceError,
    Sentence,
    TagSequence,
    TetraTag,
    TransitionState,
    Violation,
    check_validity,
    count_valid_sequences,
    decode,
    depth_profile,
    derivation,
    encode,
    format_tag_line,
    max_depth,
    parse_tag_line,
    structural_candidates,
)
from .decoder import (
    SCORE_SENTINEL,
    DecodeResult,
    DecoderConfig,
    GreedyResult,
    Lattice,
    NoValidPathError,
    OracleLimitError,
    ScoreMatrix,
    build_lattice,
    dp_decode,
    greedy_decode,
    oracle_decode,
)
from .metrics import (
    CoverageReport,
    F1Report,
    bracket_f1,
    brackets,
    coverage_analysis,
    gold_tags,
    tag_accuracy,
)
from .scores_io import (
    ScoreFileError,
    induce_vocabulary,
    load_scores,
    one_hot_scores,
    read_vocab,
    save_scores,
    synth_scores,
    write_vocab,
)

__version__ = "0.1.0"

__all__ = [
    "ACTIONS",
    "CodecError",
    "CoverageReport",
    "DEFAULT_ROOT_LABEL",
    "DecodeResult",
    "DecoderConfig",
    "EmptyTreeError",
    "F1Report",
    "GreedyResult",
    "Internal",
    "InvalidTagSequenceError",
    "Lattice",
    "Leaf",
    "NoValidPathError",
    "OracleLimitError",
    "SCORE_SENTINEL",
    "SEPARATOR",
    "ScoreFileError",
    "ScoreMatrix",
    "Sentence",
    "TagSequence",
    "TetraTag",
    "TransformError",
    "TransitionState",
    "Tree",
    "TreebankParseError",
    "Violation",
    "binarize_right",
    "bracket_f1",
    "brackets",
    "build_lattice",
    "check_binary",
    "check_validity",
    "collapse_unaries",
    "count_valid_sequences",
    "coverage_analysis",
    "decode",
    "depth_profile",
    "derivation",
    "dp_decode",
    "encode",
    "expand_unaries",
    "format_tag_line",
    "gold_tags",
    "greedy_decode",
    "induce_vocabulary",
    "is_binary",
    "leaves",
    "load_scores",
    "max_depth",
    "one_hot_scores",
    "oracle_decode",
    "parse_tag_line",
    "read_trees",
    "read_vocab",
    "save_scores",
    "sentence_of",
    "spans",
    "strip_annotations",
    "structural_candidates",
    "synth_scores",
    "tag_accuracy",
    "unbinarize",
    "write_tree",
    "write_trees",
    "write_vocab",
]

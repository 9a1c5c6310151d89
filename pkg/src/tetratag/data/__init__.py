"""Bundled sample treebank: a small hand-written corpus in PTB style.

The sentences are original compositions covering the phenomena the
transforms must handle: n-ary nodes, unary chains, trace subtrees,
function tags and coindexation, escaped brackets, and single-word trees.
"""

from importlib import resources

from ..trees import Tree, read_trees


def sample_treebank_path():
    return resources.files(__name__).joinpath("sample.treebank")


def sample_treebank_text() -> str:
    return sample_treebank_path().read_text(encoding="utf-8")


def load_sample_trees() -> list[Tree]:
    return read_trees(sample_treebank_text())

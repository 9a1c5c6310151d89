import pytest

from tetratag.data import load_sample_trees, sample_treebank_text
from tetratag.metrics import gold_tags
from tetratag.scores_io import induce_vocabulary


def pytest_runtest_logreport(report):
    # one pass/fail line per acceptance criterion; PASS lines are printed
    # by the tests themselves
    if report.when == "call" and report.failed and "test_acceptance" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        print(f"\n[acceptance] {name}: FAIL")


@pytest.fixture(scope="session")
def sample_trees():
    return load_sample_trees()


@pytest.fixture(scope="session")
def sample_text():
    return sample_treebank_text()


@pytest.fixture(scope="session")
def sample_sequences(sample_trees):
    return [gold_tags(t) for t in sample_trees]


@pytest.fixture(scope="session")
def sample_vocab(sample_sequences):
    return induce_vocabulary(sample_sequences)

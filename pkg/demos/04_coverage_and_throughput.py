"""
Stack-depth coverage and decoding throughput
============================================

Capping the decoder's stack depth trades coverage for a hard complexity
bound. The coverage analysis shows how quickly the representable fraction
(and the F1 of decoding gold one-hot scores under the cap) saturates; the
timing sweep shows the decode step growing linearly with sentence length.
"""

import random
import time

import numpy as np

from tetratag import (
    DecoderConfig,
    decode,
    dp_decode,
    expand_unaries,
    induce_vocabulary,
    sentence_of,
    synth_scores,
    unbinarize,
)
from tetratag.data import load_sample_trees
from tetratag.metrics import coverage_analysis, gold_tags
from tetratag.treegen import random_tree

# ---------------------------------------------------------------------------
# Coverage: the sample corpus needs at most a stack of 4.

trees = load_sample_trees()
report = coverage_analysis(trees, caps=list(range(1, 9)))
print(report.to_table())
print()

# ---------------------------------------------------------------------------
# Throughput: decode-only timing (scoring excluded) over growing sentence
# lengths, with the depth cap fixed at 8.

rng = random.Random(0)
sizes = [10, 100, 1000, 10000]
synthetic = [random_tree(rng, n) for n in sizes]
sequences = [gold_tags(t) for t in synthetic]
vocabulary = induce_vocabulary(sequences)
matrices = synth_scores(sequences, noise_sigma=1.0, seed=0, vocabulary=vocabulary)

config = DecoderConfig(max_depth=8)
timings = []
print(f"{'n':>6}  {'seconds':>9}  {'sents/s':>8}")
for n, tree, matrix in zip(sizes, synthetic, matrices):
    sentence = sentence_of(tree)
    best = float("inf")
    for _ in range(3):
        start = time.perf_counter()
        tags, _ = dp_decode(matrix, config)
        expand_unaries(unbinarize(decode(tags, sentence)))
        best = min(best, time.perf_counter() - start)
    timings.append(best)
    print(f"{n:6}  {best:9.6f}  {1 / best:8.1f}")

x = np.array(sizes, float)
y = np.array(timings)
slope, intercept = np.polyfit(x, y, 1)
residuals = y - (slope * x + intercept)
r2 = 1 - float((residuals**2).sum()) / float(((y - y.mean()) ** 2).sum())
print(f"\nlinear fit: time = {slope:.3e} * n + {intercept:.3e}   (R^2 = {r2:.5f})")
print("each added word costs a constant amount of decode time")

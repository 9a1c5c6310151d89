"""
Decoding tag scores into trees
==============================

A neural tagger's job ends at a score grid: 2n-1 rows (word, fencepost,
word, ...), one column per vocabulary tag. The depth-bounded dynamic
program finds the best *valid* sequence; a per-position argmax usually
does not even produce one. Synthetic scores stand in for the model here.
"""

from tetratag import (
    bracket_f1,
    decode,
    dp_decode,
    expand_unaries,
    greedy_decode,
    induce_vocabulary,
    one_hot_scores,
    oracle_decode,
    sentence_of,
    synth_scores,
    unbinarize,
)
from tetratag.data import load_sample_trees
from tetratag.metrics import gold_tags

trees = load_sample_trees()
sequences = [gold_tags(t) for t in trees]
vocabulary = induce_vocabulary(sequences)
print(f"corpus tag vocabulary: {len(vocabulary)} entries")
print("first few:", ", ".join(vocabulary[:6]))
print()

# ---------------------------------------------------------------------------
# Gold one-hot scores decode back to the exact gold trees.

matrix = one_hot_scores(sequences[0], vocabulary)
tags, score = dp_decode(matrix)
assert tags == sequences[0] and score == 0.0
print("one-hot scores recover the gold sequence, total score", score)

# The exhaustive oracle agrees (it exists to prove the DP optimal).
assert oracle_decode(matrix).score == score
print("exhaustive enumeration agrees with the dynamic program")
print()

# ---------------------------------------------------------------------------
# Noise sweep: watch bracket F1 degrade as scores get less confident, and
# how often the independent per-position argmax stops being a valid
# sequence at all.

sentences = [sentence_of(t) for t in trees]
print(f"{'sigma':>5}  {'bracket F1':>10}  {'greedy valid':>12}")
for sigma in (0.0, 0.5, 1.0, 2.0, 4.0):
    matrices = synth_scores(sequences, noise_sigma=sigma, seed=13,
                            vocabulary=vocabulary)
    predictions = []
    greedy_ok = 0
    for m, sentence in zip(matrices, sentences):
        result, _ = dp_decode(m)
        predictions.append(expand_unaries(unbinarize(decode(result, sentence))))
        greedy_ok += greedy_decode(m).violation is None
    f1 = bracket_f1(trees, predictions).f1
    print(f"{sigma:5.1f}  {f1:10.2f}  {greedy_ok:9}/{len(trees)}")
print()
print("the DP always returns a valid sequence; greedy argmax often cannot")

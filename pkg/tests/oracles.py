"""Independent reference implementations used as test oracles.

Nothing here imports the alignment code under test.
"""
from itertools import combinations

import numpy as np


def brute_force_cost(a, b, sub=1, ins=1, dele=1):
    """Exhaustive minimum edit cost.

    Every edit script corresponds to a set of aligned (ref, hyp) position pairs
    that is strictly increasing in both coordinates; unpaired ref tokens are
    deletions and unpaired hyp tokens are insertions.  All such sets are
    enumerated, with no dynamic programming involved.
    """
    a = np.asarray([hash(x) for x in a], dtype=np.int64)
    b = np.asarray([hash(x) for x in b], dtype=np.int64)
    n, m = len(a), len(b)
    best = n * dele + m * ins
    for k in range(1, min(n, m) + 1):
        rc = np.array(list(combinations(range(n), k)), dtype=np.int64)
        hc = np.array(list(combinations(range(m), k)), dtype=np.int64)
        # mismatches for every (ref subset, hyp subset) combination
        mism = (a[rc][:, None, :] != b[hc][None, :, :]).sum(axis=2)
        cost = int(mism.min()) * sub + (n - k) * dele + (m - k) * ins
        best = min(best, cost)
    return best


def random_pair(rng, max_len=8, vocab=4):
    words = [chr(ord("a") + i) for i in range(vocab)]
    a = [words[i] for i in rng.integers(0, vocab, rng.integers(0, max_len + 1))]
    b = [words[i] for i in rng.integers(0, vocab, rng.integers(0, max_len + 1))]
    return a, b


def hand_wer(n_ref, s, d, i):
    return (s + d + i) / n_ref

"""Hand-checked fixture matrices shared by tests, docs and the CLI examples."""

from .core import ConnectionMatrix

# Zero matrix on a three-step chain: one generator per index.
FIX_ZERO = ConnectionMatrix(3, [{1}, {2}, {3}], {})

# Minimal sphere: two wells, one saddle, one source.
FIX_SPHERE = ConnectionMatrix(4, [{1, 2}, {3}, {4}],
                              {(1, 3): 1, (2, 3): -1})

# One block, unit entries; the second column cancels against the first.
FIX_TUCB = ConnectionMatrix(4, [{1, 2}, {3, 4}],
                            {(1, 3): 1, (2, 3): -1, (1, 4): 1, (2, 4): -1})

# Like FIX_TUCB but with entries 2 and 3: not totally unimodular, and the
# cancellation needs a genuine integer-minimization step.
FIX_CB = ConnectionMatrix(4, [{1, 2}, {3, 4}],
                          {(1, 3): 2, (2, 3): -2, (1, 4): 3, (2, 4): -3})

# Grouped and scattered partitions of twelve indices into four subsets
# (same cardinalities 3/5/2/2); entries unspecified, hence zero.
FIX_FIG3L = ConnectionMatrix(
    12,
    [set(range(1, 4)), set(range(4, 9)), {9, 10}, {11, 12}],
    {})

FIX_FIG3R = ConnectionMatrix(
    12,
    [{2, 4, 7}, {1, 6, 9, 10, 12}, {3, 8}, {5, 11}],
    {})

"""Walkthrough: the Theil index and its exact within/between split.

Run with: python demos/decomposition_walkthrough.py
"""

import numpy as np

from wageineq import Partition, decompose, smoothed_distribution, theil_index

# A tiny wage vector split into a low-wage pair and a high-wage triple.
wages = [1, 3, 5, 7, 3]
part = Partition.from_sizes([2, 3])

print("wages:", wages)
print("total index I(y) =", theil_index(wages))

smoothed = smoothed_distribution(wages, part)
print("smoothed distribution (each wage -> its group mean):", smoothed)
print("between term = I(smoothed) =", theil_index(smoothed))

res = decompose(wages, part)
for term in res.groups:
    print(
        f"group {term.group}: wage share {term.weight:.4f}, "
        f"own index {term.index:.7f}, contribution {term.contribution:.7f}"
    )
print("within + between =", res.within + res.between)
print("identity residual =", res.identity_residual())

# The index only sees wage shares: rescaling or replicating changes nothing.
print("\nscale invariance:", theil_index(np.multiply(wages, 1000.0)) - res.total)
print("replication invariance:", theil_index(wages * 3) - res.total)

# Transferring wages downward strictly reduces inequality.
more_equal = [2, 3, 5, 6, 3]  # moved 1 from the highest to the lowest wage
print("after a progressive transfer:", theil_index(more_equal), "<", res.total)

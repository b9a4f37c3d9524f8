"""Walk through the antecedent estimation and the fuzzy feature mapping.

The IF-part of every rule is found deterministically: variance
partitioning picks the cluster centers, and each rule's width on a
feature is its share of the total scatter around all centers. The data
then moves into a K*(d+1)-dimensional space where every block is a
firing-weighted copy of [1, x].
"""

import numpy as np

from mvfuzzy import (Standardizer, estimate_widths, firing_levels,
                     fuzzy_map, varpart_centers)
from mvfuzzy.antecedent import AntecedentBank

rng = np.random.default_rng(0)

# Three 2-D blobs standing in for one view of a multi-view dataset.
x = np.vstack([
    rng.normal((0, 0), 0.4, size=(30, 2)),
    rng.normal((5, 0), 0.4, size=(30, 2)),
    rng.normal((0, 5), 0.4, size=(30, 2)),
])

# Standardize first: Gaussian widths are scale-sensitive.
scaler = Standardizer.fit(x)
xs = scaler.transform(x)

centers = varpart_centers(xs, 3)
widths = estimate_widths(xs, centers)
bank = AntecedentBank(centers=centers, widths=widths)

print("rule centers (standardized space):")
print(np.round(centers, 3))
print("widths per feature sum to:", widths.sum(axis=0))

# Firing levels are a soft, normalized assignment of a point to rules.
probe = xs[[0, 30, 60]]
print("\nfiring levels of one point per blob:")
print(np.round(firing_levels(probe, bank), 4))

# The fuzzy design matrix stacks mu_k(x) * [1, x] over the three rules.
xg = fuzzy_map(xs, bank)
print("\nfuzzy design matrix shape:", xg.shape, "= (N, K*(d+1))")
print("constant slots of row 0:", np.round(xg[0, [0, 3, 6]], 4),
      "-> sum", xg[0, [0, 3, 6]].sum())

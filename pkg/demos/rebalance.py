"""
Rebalancing a skewed class distribution
=======================================

Undersample the large classes, then grow the small ones with SMOTE.
"""

import numpy as np

from medqual import Dataset, FEATURE_NAMES
from medqual.sampling import BENCHMARK_SMOTE_PERCENT, BENCHMARK_UNDERSAMPLE_TARGETS, SmoteConfig, rebalance

# class sizes with the same skew as a real medical-article dump
sizes = {"Stub": 9267, "Start": 9900, "C": 3263, "B": 1894, "GA": 153, "FA": 58}
rng = np.random.default_rng(0)
labels = [c for c, n in sizes.items() for _ in range(n)]
X = rng.gamma(2.0, 3.0, size=(len(labels), len(FEATURE_NAMES)))
X[:, FEATURE_NAMES.index("category")] = rng.integers(0, 5, len(labels))
data = Dataset(X, labels)

print("targets:", BENCHMARK_UNDERSAMPLE_TARGETS)
print("smote % :", BENCHMARK_SMOTE_PERCENT)
out = rebalance(data, BENCHMARK_UNDERSAMPLE_TARGETS, SmoteConfig(BENCHMARK_SMOTE_PERCENT, k=5, seed=0), seed=0)

print(f"\n{'class':6} {'before':>7} {'after':>6}")
for c in sizes:
    print(f"{c:6} {data.class_counts[c]:7d} {out.class_counts[c]:6d}")
print("synthetic rows:", int(out.synthetic.sum()))

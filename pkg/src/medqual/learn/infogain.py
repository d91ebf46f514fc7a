"""Information gain of single features, with MDL discretisation for numeric ones."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from ..corpus import QUALITY_CLASSES
from ..dataset import Dataset


def entropy(counts) -> float:
    """Shannon entropy in bits of a vector of class counts."""
    counts = np.asarray(counts, dtype=float)
    n = counts.sum()
    if n <= 0:
        return 0.0
    p = counts[counts > 0] / n
    return float(abs(-(p * np.log2(p)).sum()))


def _row_entropies(counts: np.ndarray) -> np.ndarray:
    n = counts.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.where(counts > 0, counts / n, 1.0)
        return -(np.where(counts > 0, p * np.log2(p), 0.0)).sum(axis=1)


def mdl_cut_points(values: Sequence[float], classes: Sequence[int], n_classes: int) -> list[float]:
    """Recursive entropy-minimising binary cuts with the Fayyad-Irani MDL stop.

    Cuts sit at midpoints between adjacent distinct values.
    """
    values = np.asarray(values, dtype=float)
    classes = np.asarray(classes, dtype=np.intp)
    order = np.argsort(values, kind="stable")
    v, c = values[order], classes[order]
    onehot = np.eye(n_classes, dtype=float)[c]
    cuts: list[float] = []

    def split(lo: int, hi: int) -> None:
        n = hi - lo
        if n < 2:
            return
        seg = v[lo:hi]
        boundaries = np.flatnonzero(seg[:-1] < seg[1:])
        if boundaries.size == 0:
            return
        cum = np.cumsum(onehot[lo:hi], axis=0)
        total = cum[-1]
        left = cum[boundaries]
        right = total - left
        n_left = (boundaries + 1).astype(float)
        n_right = n - n_left
        weighted = (n_left * _row_entropies(left) + n_right * _row_entropies(right)) / n
        best = int(np.argmin(weighted))
        h_all = entropy(total)
        gain = h_all - weighted[best]
        h_left = entropy(left[best])
        h_right = entropy(right[best])
        k = int(np.count_nonzero(total))
        k1 = np.count_nonzero(left[best])
        k2 = np.count_nonzero(right[best])
        delta = math.log2(3**k - 2) - (k * h_all - k1 * h_left - k2 * h_right)
        if gain <= (math.log2(n - 1) + delta) / n:
            return
        b = int(boundaries[best])
        cuts.append((seg[b] + seg[b + 1]) / 2.0)
        split(lo, lo + b + 1)
        split(lo + b + 1, hi)

    split(0, len(v))
    return sorted(cuts)


def conditional_entropy(bins: np.ndarray, classes: np.ndarray, n_classes: int) -> float:
    n = len(classes)
    total = 0.0
    for b in np.unique(bins):
        mask = bins == b
        total += float(mask.sum()) / n * entropy(np.bincount(classes[mask], minlength=n_classes))
    return total


def info_gain_arrays(values, classes, n_classes: int, nominal: bool = False) -> float:
    values = np.asarray(values, dtype=float)
    classes = np.asarray(classes, dtype=np.intp)
    if len(classes) < 2:
        return 0.0
    h_class = entropy(np.bincount(classes, minlength=n_classes))
    if h_class == 0.0:
        return 0.0
    if nominal:
        bins = values
    else:
        bins = np.digitize(values, mdl_cut_points(values, classes, n_classes))
    return float(max(0.0, h_class - conditional_entropy(bins, classes, n_classes)))


def info_gain(data: Dataset, feature: str) -> float:
    """H(class) - H(class | feature), in bits."""
    j = data.feature_names.index(feature)
    return info_gain_arrays(
        data.X[:, j], data.class_codes(), len(QUALITY_CLASSES), nominal=data.nominal[j]
    )


def rank_features(data: Dataset) -> list[tuple[str, float]]:
    """All features sorted by decreasing information gain (stable on ties)."""
    gains = [(name, info_gain(data, name)) for name in data.feature_names]
    return sorted(gains, key=lambda kv: -kv[1])

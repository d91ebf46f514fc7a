"""Per-class F-measure and one-vs-rest ROC area."""

from __future__ import annotations

from typing import Sequence

import numpy as np
from scipy.stats import rankdata


def confusion_matrix(actual: Sequence[int], predicted: Sequence[int], n_classes: int) -> np.ndarray:
    """Rows are true classes, columns predicted classes."""
    cm = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(cm, (np.asarray(actual, dtype=np.intp), np.asarray(predicted, dtype=np.intp)), 1)
    return cm


def f_measure(confusion: np.ndarray, cls: int) -> float:
    """F1 of class index ``cls``; 0 whenever precision or recall is undefined or zero.

    >>> round(f_measure(np.array([[6, 4], [2, 0]]), 0), 6)
    0.666667
    """
    confusion = np.asarray(confusion)
    tp = confusion[cls, cls]
    fp = confusion[:, cls].sum() - tp
    fn = confusion[cls, :].sum() - tp
    if tp == 0 or tp + fp == 0 or tp + fn == 0:
        return 0.0
    precision = tp / (tp + fp)
    recall = tp / (tp + fn)
    return float(2 * precision * recall / (precision + recall))


def roc_auc(scores: Sequence[float], positive: Sequence[bool]) -> float:
    """Area under the ROC curve via the Mann-Whitney rank statistic.

    Tied scores get mid-ranks. Returns 0.5 if either side is empty.

    >>> roc_auc([0.9, 0.4, 0.6, 0.1], [True, True, False, False])
    0.75
    """
    scores = np.asarray(scores, dtype=float)
    positive = np.asarray(positive, dtype=bool)
    n_pos = int(positive.sum())
    n_neg = len(positive) - n_pos
    if n_pos == 0 or n_neg == 0:
        return 0.5
    ranks = rankdata(scores, method="average")
    u = ranks[positive].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))

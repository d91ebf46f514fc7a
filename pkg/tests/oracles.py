"""Slow, direct reference implementations used only to cross-check the package."""

import math


def f_measure_direct(confusion, cls):
    n = len(confusion)
    tp = confusion[cls][cls]
    fp = sum(confusion[r][cls] for r in range(n) if r != cls)
    fn = sum(confusion[cls][c] for c in range(n) if c != cls)
    if tp + fp == 0 or tp + fn == 0:
        return 0.0
    p = tp / (tp + fp)
    r = tp / (tp + fn)
    if p + r == 0:
        return 0.0
    return 2 * p * r / (p + r)


def auc_all_pairs(scores, positive):
    pos = [s for s, y in zip(scores, positive) if y]
    neg = [s for s, y in zip(scores, positive) if not y]
    if not pos or not neg:
        return 0.5
    wins = 0.0
    for a in pos:
        for b in neg:
            if a > b:
                wins += 1.0
            elif a == b:
                wins += 0.5
    return wins / (len(pos) * len(neg))


def entropy_bits(labels):
    n = len(labels)
    out = 0.0
    for c in set(labels):
        p = labels.count(c) / n
        out -= p * math.log2(p)
    return out


def scaled_distance(X, nominal, members, a, b):
    """Distance between rows ``a`` and ``b`` with numeric columns min-max
    scaled over ``members`` and nominal columns scored 0/1."""
    total = 0.0
    for j in range(len(nominal)):
        if nominal[j]:
            total += 1.0 if X[a][j] != X[b][j] else 0.0
            continue
        col = [X[m][j] for m in members]
        span = max(col) - min(col)
        if span > 0:
            total += ((X[a][j] - X[b][j]) / span) ** 2
    return math.sqrt(total)


def is_k_nearest(X, nominal, members, seed, other, k, tol=1e-9):
    """True when ``other`` is among the ``k`` members nearest to ``seed``
    (a tie with the k-th distance counts)."""
    dists = sorted(scaled_distance(X, nominal, members, seed, m) for m in members if m != seed)
    if not dists:
        return False
    kth = dists[min(k, len(dists)) - 1]
    return other != seed and other in members and scaled_distance(X, nominal, members, seed, other) <= kth + tol

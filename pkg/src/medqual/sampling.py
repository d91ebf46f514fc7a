"""Class rebalancing: random undersampling and SMOTE oversampling."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .corpus import QUALITY_CLASSES
from .dataset import Dataset

# Rebalancing used on the full medical-article dump: four large classes cut
# to 1015 rows each, the two small ones grown with SMOTE.
BENCHMARK_UNDERSAMPLE_TARGETS = {"Stub": 1015, "Start": 1015, "C": 1015, "B": 1015}
BENCHMARK_SMOTE_PERCENT = {"GA": 40, "FA": 180}


class SamplingError(ValueError):
    pass


@dataclass
class SmoteConfig:
    """SMOTE settings.

    Each synthetic vector interpolates every numeric attribute with its own
    uniform gap in [0, 1] between the seed and one of its ``k`` nearest
    same-class neighbours; nominal attributes are copied from the seed.
    """

    percent: Mapping[str, int] = field(default_factory=dict)
    k: int = 5
    seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise SamplingError(f"k must be >= 1, got {self.k}")
        for cls, p in self.percent.items():
            if cls not in QUALITY_CLASSES:
                raise SamplingError(f"unknown class {cls!r}")
            if p < 0:
                raise SamplingError(f"percentage for {cls} must be >= 0, got {p}")


def undersample(data: Dataset, targets: Mapping[str, int], seed: int = 0) -> Dataset:
    """Keep a uniform random subset of ``targets[c]`` rows for each targeted class.

    Surviving rows keep their original relative order.
    """
    unknown = set(targets) - set(QUALITY_CLASSES)
    if unknown:
        raise SamplingError(f"unknown classes {sorted(unknown)}")
    rng = np.random.default_rng(seed)
    keep = np.ones(len(data), dtype=bool)
    for cls in QUALITY_CLASSES:
        if cls not in targets:
            continue
        members = np.flatnonzero(data.labels == cls)
        target = targets[cls]
        if target < 0 or target > len(members):
            raise SamplingError(
                f"cannot undersample class {cls} to {target}: it has {len(members)} members"
            )
        chosen = rng.choice(members, size=target, replace=False)
        keep[members] = False
        keep[chosen] = True
    return data.subset(np.flatnonzero(keep))


def _scaled(X: np.ndarray, nominal: np.ndarray) -> np.ndarray:
    """Min-max scale numeric columns over the rows given."""
    Z = X.astype(float).copy()
    num = ~nominal
    lo = Z[:, num].min(axis=0)
    span = Z[:, num].max(axis=0) - lo
    span[span == 0] = 1.0
    Z[:, num] = (Z[:, num] - lo) / span
    return Z


def _distance_matrix(X: np.ndarray, nominal: np.ndarray) -> np.ndarray:
    Z = _scaled(X, nominal)
    num = Z[:, ~nominal]
    d2 = ((num[:, None, :] - num[None, :, :]) ** 2).sum(axis=2)
    if nominal.any():
        nom = Z[:, nominal]
        d2 += (nom[:, None, :] != nom[None, :, :]).sum(axis=2)
    return np.sqrt(d2)


def _neighbours_from_row(dist_row: np.ndarray, self_pos: int, k: int) -> np.ndarray:
    order = np.argsort(dist_row, kind="stable")
    return order[order != self_pos][:k]


def nearest_neighbors(data: Dataset, member: int, k: int) -> list[int]:
    """Row indices of the ``k`` nearest real rows sharing ``member``'s class.

    Distances are Euclidean over numeric columns min-max scaled within the
    class, plus 1 for every nominal mismatch. Ties go to the earlier row.
    """
    members = np.flatnonzero((data.labels == data.labels[member]) & ~data.synthetic)
    pos = int(np.flatnonzero(members == member)[0])
    nominal = np.array(data.nominal)
    Z = _scaled(data.X[members], nominal)
    diff = Z[:, ~nominal] - Z[pos, ~nominal]
    d2 = (diff**2).sum(axis=1) + (Z[:, nominal] != Z[pos, nominal]).sum(axis=1)
    return [int(members[j]) for j in _neighbours_from_row(np.sqrt(d2), pos, k)]


def smote(data: Dataset, cfg: SmoteConfig) -> Dataset:
    """Append SMOTE vectors for every class with a positive percentage.

    Class ``c`` with ``n`` real members receives ``floor(percent * n / 100)``
    synthetic rows. Seeds cycle through the members in dataset order, or
    through a random permutation of them when the percentage is below 100.
    """
    return smote_with_provenance(data, cfg)[0]


def smote_with_provenance(data: Dataset, cfg: SmoteConfig) -> tuple[Dataset, list[tuple[int, int]]]:
    """:func:`smote`, plus the (seed row, neighbour row) pair behind each
    synthetic row, as row indices into ``data``."""
    rng = np.random.default_rng(cfg.seed)
    nominal = np.array(data.nominal)
    numeric = ~nominal
    new_X, new_labels, new_titles, pairs = [], [], [], []
    for cls in QUALITY_CLASSES:
        percent = cfg.percent.get(cls, 0)
        if percent <= 0:
            continue
        members = np.flatnonzero((data.labels == cls) & ~data.synthetic)
        n = len(members)
        if n < cfg.k + 1:
            raise SamplingError(f"class {cls} has {n} members; SMOTE with k={cfg.k} needs at least {cfg.k + 1}")
        n_new = percent * n // 100
        Xc = data.X[members]
        dist = _distance_matrix(Xc, nominal)
        neighbours = [_neighbours_from_row(dist[p], p, cfg.k) for p in range(n)]
        seeds = np.arange(n) if percent >= 100 else rng.permutation(n)
        for j in range(n_new):
            p = int(seeds[j % n])
            q = int(neighbours[p][rng.integers(len(neighbours[p]))])
            seed_row, nb_row = Xc[p], Xc[q]
            gap = rng.random(int(numeric.sum()))
            row = seed_row.copy()
            lo = np.minimum(seed_row[numeric], nb_row[numeric])
            hi = np.maximum(seed_row[numeric], nb_row[numeric])
            # clipping only absorbs rounding in seed + gap * (nb - seed)
            row[numeric] = np.clip(seed_row[numeric] + gap * (nb_row[numeric] - seed_row[numeric]), lo, hi)
            new_X.append(row)
            new_labels.append(cls)
            new_titles.append(f"smote:{cls}:{j}")
            pairs.append((int(members[p]), int(members[q])))
    if not new_X:
        return data.subset(np.arange(len(data))), []
    extra = Dataset(np.array(new_X), new_labels, data.feature_names, new_titles, np.ones(len(new_X), bool))
    return data.concat(extra), pairs


def rebalance(
    data: Dataset,
    targets: Mapping[str, int] | None = None,
    cfg: SmoteConfig | None = None,
    seed: int = 0,
) -> Dataset:
    """Undersample, then oversample. ``None`` skips a step."""
    if targets:
        data = undersample(data, targets, seed)
    if cfg is not None and cfg.percent:
        data = smote(data, cfg)
    return data

"""Labelled feature matrix shared by the sampling and learning code."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .corpus import QUALITY_CLASSES
from .features import CATEGORIES, FEATURE_NAMES, NOMINAL_FEATURES, FeatureVector


@dataclass
class Dataset:
    """Feature matrix with string labels.

    Nominal columns (``category``) hold the integer code of the value in
    :data:`~medqual.features.CATEGORIES`.
    """

    X: np.ndarray
    labels: np.ndarray
    feature_names: tuple[str, ...] = FEATURE_NAMES
    titles: list[str] = field(default_factory=list)
    synthetic: np.ndarray | None = None

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=float).reshape(len(self.labels), len(self.feature_names))
        self.labels = np.asarray(self.labels, dtype=object)
        if not self.titles:
            self.titles = [f"row{i}" for i in range(len(self.labels))]
        if self.synthetic is None:
            self.synthetic = np.zeros(len(self.labels), dtype=bool)
        self.synthetic = np.asarray(self.synthetic, dtype=bool)
        if not (len(self.titles) == len(self.labels) == len(self.synthetic)):
            raise ValueError("titles, labels and synthetic flags must have one entry per row")

    def __len__(self):
        return len(self.labels)

    @property
    def nominal(self) -> tuple[bool, ...]:
        return tuple(name in NOMINAL_FEATURES for name in self.feature_names)

    @property
    def class_counts(self) -> dict[str, int]:
        return {c: int(np.sum(self.labels == c)) for c in QUALITY_CLASSES}

    def class_codes(self, class_list: Sequence[str] = QUALITY_CLASSES) -> np.ndarray:
        lookup = {c: i for i, c in enumerate(class_list)}
        return np.array([lookup[c] for c in self.labels], dtype=np.intp)

    def subset(self, idx) -> "Dataset":
        idx = np.asarray(idx, dtype=np.intp)
        return Dataset(
            self.X[idx],
            self.labels[idx],
            self.feature_names,
            [self.titles[i] for i in idx],
            self.synthetic[idx],
        )

    def select(self, names: Sequence[str]) -> "Dataset":
        """Keep only the named feature columns, in the given order."""
        cols = [self.feature_names.index(n) for n in names]
        return Dataset(self.X[:, cols], self.labels, tuple(names), list(self.titles), self.synthetic)

    def concat(self, other: "Dataset") -> "Dataset":
        if other.feature_names != self.feature_names:
            raise ValueError("feature columns differ")
        return Dataset(
            np.vstack([self.X, other.X]),
            np.concatenate([self.labels, other.labels]),
            self.feature_names,
            self.titles + other.titles,
            np.concatenate([self.synthetic, other.synthetic]),
        )

    @classmethod
    def from_vectors(cls, vectors: Sequence[FeatureVector], synthetic: Sequence[bool] | None = None) -> "Dataset":
        rows = []
        for v in vectors:
            row = list(v.values())
            row[FEATURE_NAMES.index("category")] = CATEGORIES.index(v.category)
            rows.append(row)
        X = np.array(rows, dtype=float).reshape(len(vectors), len(FEATURE_NAMES))
        return cls(X, [v.label for v in vectors], FEATURE_NAMES, [v.title for v in vectors], synthetic)

    def to_vectors(self) -> list[FeatureVector]:
        if self.feature_names != FEATURE_NAMES:
            raise ValueError("only full feature matrices convert back to vectors")
        out = []
        cat = FEATURE_NAMES.index("category")
        for title, row, label in zip(self.titles, self.X, self.labels):
            values = [float(x) for x in row]
            values[cat] = CATEGORIES[int(round(values[cat]))]
            out.append(FeatureVector(title, *values, label=label))
        return out

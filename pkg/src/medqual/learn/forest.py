"""
Random forest of information-gain decision trees.

Trees split numeric features with ``x <= threshold`` (thresholds at
midpoints between adjacent distinct training values) and the nominal
category feature with one-vs-rest equality tests. Every tree draws its
bootstrap sample and per-node feature subsets from its own generator,
seeded by ``(seed, tree_index)``, so the forest is the same whether the
trees are grown serially or on a thread pool.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Mapping, Sequence

import numpy as np

from ..corpus import QUALITY_CLASSES
from ..dataset import Dataset
from ..features import CATEGORIES, FeatureVector
from .infogain import entropy

MODEL_FORMAT_VERSION = 1
_MIN_GAIN = 1e-12


class ForestConfigError(ValueError):
    pass


class ModelFormatError(ValueError):
    pass


@dataclass
class ForestConfig:
    num_trees: int = 100
    features_per_split: int | None = None
    min_leaf: int = 1
    max_depth: int | None = None
    seed: int = 0
    n_jobs: int = 1

    def resolve_features_per_split(self, n_features: int) -> int:
        """Validate against ``n_features`` and return the per-node feature count."""
        if self.num_trees < 1:
            raise ForestConfigError(f"num_trees must be >= 1, got {self.num_trees}")
        if self.min_leaf < 1:
            raise ForestConfigError(f"min_leaf must be >= 1, got {self.min_leaf}")
        if self.max_depth is not None and self.max_depth < 0:
            raise ForestConfigError(f"max_depth must be >= 0, got {self.max_depth}")
        if self.seed < 0:
            raise ForestConfigError(f"seed must be >= 0, got {self.seed}")
        m = self.features_per_split
        if m is None:
            m = max(1, int(math.floor(math.sqrt(n_features))))
        if not 1 <= m <= n_features:
            raise ForestConfigError(f"features_per_split must be in [1, {n_features}], got {m}")
        return m


@dataclass
class Tree:
    """Flat node arrays; ``left[i] == -1`` marks a leaf."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    counts: np.ndarray

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    def apply(self, X: np.ndarray, nominal: np.ndarray) -> np.ndarray:
        """Leaf index reached by every row of ``X``."""
        nodes = np.zeros(len(X), dtype=np.intp)
        while True:
            active = np.flatnonzero(self.left[nodes] >= 0)
            if active.size == 0:
                return nodes
            nd = nodes[active]
            f = self.feature[nd]
            x = X[active, f]
            go_left = np.where(nominal[f], x == self.threshold[nd], x <= self.threshold[nd])
            nodes[active] = np.where(go_left, self.left[nd], self.right[nd])

    def leaf_distributions(self) -> np.ndarray:
        totals = self.counts.sum(axis=1, keepdims=True)
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(totals > 0, self.counts / np.maximum(totals, 1), 0.0)

    def to_dict(self) -> dict:
        nodes = []
        for i in range(self.n_nodes):
            if self.left[i] < 0:
                nodes.append({"leaf": [int(c) for c in self.counts[i]]})
            else:
                nodes.append(
                    {
                        "feature": int(self.feature[i]),
                        "threshold": float(self.threshold[i]),
                        "left": int(self.left[i]),
                        "right": int(self.right[i]),
                    }
                )
        return {"nodes": nodes}

    @classmethod
    def from_dict(cls, obj: Mapping, n_classes: int) -> "Tree":
        nodes = obj["nodes"]
        n = len(nodes)
        feature = np.zeros(n, dtype=np.intp)
        threshold = np.zeros(n)
        left = np.full(n, -1, dtype=np.intp)
        right = np.full(n, -1, dtype=np.intp)
        counts = np.zeros((n, n_classes), dtype=np.int64)
        for i, node in enumerate(nodes):
            if "leaf" in node:
                if len(node["leaf"]) != n_classes:
                    raise ModelFormatError("leaf histogram has the wrong number of classes")
                counts[i] = node["leaf"]
            else:
                feature[i] = node["feature"]
                threshold[i] = node["threshold"]
                left[i] = node["left"]
                right[i] = node["right"]
                if not (0 <= left[i] < n and 0 <= right[i] < n):
                    raise ModelFormatError("child reference out of range")
        return cls(feature, threshold, left, right, counts)


def _xlogx_table(n: int) -> np.ndarray:
    """``c * log2(c)`` for integer counts 0..n (0 at 0)."""
    c = np.arange(n + 1, dtype=float)
    table = np.zeros(n + 1)
    table[1:] = c[1:] * np.log2(c[1:])
    return table


def _best_numeric_split(x, y_onehot, parent_h, min_leaf, xlogx):
    # n * weighted child entropy = sum over children of xlogx(size) - sum xlogx(counts)
    n = len(x)
    order = np.argsort(x, kind="stable")
    xs = x[order]
    boundaries = np.flatnonzero(xs[:-1] < xs[1:])
    n_left = boundaries + 1
    valid = (n_left >= min_leaf) & (n - n_left >= min_leaf)
    boundaries = boundaries[valid]
    if boundaries.size == 0:
        return None
    cum = np.cumsum(y_onehot[order], axis=0)
    left = cum[boundaries]
    right = cum[-1] - left
    nl = boundaries + 1
    scaled = xlogx[nl] + xlogx[n - nl] - xlogx[left].sum(axis=1) - xlogx[right].sum(axis=1)
    best = int(np.argmin(scaled))
    b = int(boundaries[best])
    lo, hi = xs[b], xs[b + 1]
    thr = (lo + hi) / 2.0
    if not lo <= thr < hi:
        thr = lo
    return parent_h - scaled[best] / n, thr


def _best_nominal_split(x, y_onehot, parent_h, min_leaf, xlogx):
    n = len(x)
    best = None
    total = y_onehot.sum(axis=0)
    for value in np.unique(x):
        mask = x == value
        nl = int(mask.sum())
        if nl < min_leaf or n - nl < min_leaf:
            continue
        left = y_onehot[mask].sum(axis=0)
        right = total - left
        scaled = xlogx[nl] + xlogx[n - nl] - xlogx[left].sum() - xlogx[right].sum()
        gain = parent_h - scaled / n
        if best is None or gain > best[0]:
            best = (gain, float(value))
    return best


def grow_tree(
    X: np.ndarray,
    y: np.ndarray,
    n_classes: int,
    nominal: np.ndarray,
    features_per_split: int,
    min_leaf: int,
    max_depth: int | None,
    rng: np.random.Generator,
) -> Tree:
    """Grow one unpruned tree on the rows given (no bootstrap here)."""
    onehot = np.eye(n_classes, dtype=np.int64)[y]
    xlogx = _xlogx_table(len(y))
    n_features = X.shape[1]
    feature, threshold, left, right, counts = [], [], [], [], []

    def new_node() -> int:
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        counts.append(np.zeros(n_classes, dtype=np.int64))
        return len(feature) - 1

    stack = [(np.arange(len(y)), 0, new_node())]
    while stack:
        idx, depth, node = stack.pop()
        hist = np.bincount(y[idx], minlength=n_classes)
        counts[node] = hist
        n = len(idx)
        if (
            np.count_nonzero(hist) <= 1
            or n < 2 * min_leaf
            or (max_depth is not None and depth >= max_depth)
        ):
            continue
        parent_h = entropy(hist)
        best = None
        for f in rng.choice(n_features, size=features_per_split, replace=False):
            finder = _best_nominal_split if nominal[f] else _best_numeric_split
            found = finder(X[idx, f], onehot[idx], parent_h, min_leaf, xlogx)
            if found is not None and found[0] > _MIN_GAIN and (best is None or found[0] > best[0]):
                best = (found[0], found[1], int(f))
        if best is None:
            continue
        _, thr, f = best
        x = X[idx, f]
        go_left = x == thr if nominal[f] else x <= thr
        feature[node] = f
        threshold[node] = thr
        left[node] = new_node()
        right[node] = new_node()
        stack.append((idx[~go_left], depth + 1, right[node]))
        stack.append((idx[go_left], depth + 1, left[node]))
    return Tree(
        np.array(feature, dtype=np.intp),
        np.array(threshold, dtype=float),
        np.array(left, dtype=np.intp),
        np.array(right, dtype=np.intp),
        np.array(counts, dtype=np.int64).reshape(len(feature), n_classes),
    )


@dataclass
class ForestModel:
    trees: list[Tree]
    feature_names: tuple[str, ...]
    nominal: tuple[bool, ...]
    class_list: tuple[str, ...] = QUALITY_CLASSES
    config: ForestConfig = field(default_factory=ForestConfig)
    metadata: dict = field(default_factory=dict)

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        """Mean of the leaf class-frequency distributions, one row per input."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != len(self.feature_names):
            raise ValueError(f"expected {len(self.feature_names)} features, got {X.shape[1]}")
        nominal = np.array(self.nominal)
        total = np.zeros((len(X), len(self.class_list)))
        for tree in self.trees:
            total += tree.leaf_distributions()[tree.apply(X, nominal)]
        return total / len(self.trees)

    def predict(self, X: np.ndarray) -> np.ndarray:
        """Class indices; ties go to the earlier class in ``class_list``."""
        return np.argmax(self.predict_proba(X), axis=1)

    def to_json(self) -> str:
        doc = {
            "format_version": MODEL_FORMAT_VERSION,
            "class_list": list(self.class_list),
            "feature_names": list(self.feature_names),
            "nominal": list(self.nominal),
            "config": asdict(self.config),
            "metadata": self.metadata,
            "trees": [t.to_dict() for t in self.trees],
        }
        return json.dumps(doc, indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ForestModel":
        try:
            doc = json.loads(text)
            if doc.get("format_version") != MODEL_FORMAT_VERSION:
                raise ModelFormatError(f"unsupported model format {doc.get('format_version')!r}")
            class_list = tuple(doc["class_list"])
            feature_names = tuple(doc["feature_names"])
            nominal = tuple(bool(b) for b in doc["nominal"])
            if len(nominal) != len(feature_names):
                raise ModelFormatError("nominal flags do not match features")
            trees = [Tree.from_dict(t, len(class_list)) for t in doc["trees"]]
            for t in trees:
                if t.n_nodes == 0 or np.any(t.feature[t.left >= 0] >= len(feature_names)):
                    raise ModelFormatError("tree references an unknown feature")
            if not trees:
                raise ModelFormatError("model has no trees")
            return cls(trees, feature_names, nominal, class_list, ForestConfig(**doc["config"]), doc.get("metadata", {}))
        except ModelFormatError:
            raise
        except (ValueError, KeyError, TypeError, AttributeError) as exc:
            raise ModelFormatError(f"corrupted model: {exc}") from exc


def train_forest(data: Dataset, cfg: ForestConfig, class_list: Sequence[str] = QUALITY_CLASSES) -> ForestModel:
    """Train ``cfg.num_trees`` trees, each on a bootstrap sample of ``data``."""
    if len(data) == 0:
        raise ForestConfigError("cannot train on an empty dataset")
    y = data.class_codes(class_list)
    if len(np.unique(y)) < 2:
        raise ForestConfigError("training data needs at least two classes")
    m = cfg.resolve_features_per_split(len(data.feature_names))
    nominal = np.array(data.nominal)
    X = data.X
    n = len(y)

    def build(t: int) -> Tree:
        rng = np.random.default_rng([cfg.seed, t])
        boot = rng.integers(0, n, size=n)
        return grow_tree(X[boot], y[boot], len(class_list), nominal, m, cfg.min_leaf, cfg.max_depth, rng)

    if cfg.n_jobs > 1:
        with ThreadPoolExecutor(max_workers=cfg.n_jobs) as pool:
            trees = list(pool.map(build, range(cfg.num_trees)))
    else:
        trees = [build(t) for t in range(cfg.num_trees)]
    return ForestModel(trees, tuple(data.feature_names), tuple(data.nominal), tuple(class_list), cfg)


def encode_vector(v: FeatureVector, feature_names: Sequence[str]) -> np.ndarray:
    row = []
    for name in feature_names:
        value = getattr(v, name)
        row.append(CATEGORIES.index(value) if name == "category" else float(value))
    return np.array(row, dtype=float)


def predict_proba(model: ForestModel, v: FeatureVector) -> dict[str, float]:
    """Class distribution for a single feature vector."""
    probs = model.predict_proba(encode_vector(v, model.feature_names)[None, :])[0]
    return {c: float(p) for c, p in zip(model.class_list, probs)}

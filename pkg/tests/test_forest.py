import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from medqual.corpus import QUALITY_CLASSES
from medqual.dataset import Dataset
from medqual.features import FEATURE_NAMES, FeatureVector
from medqual.learn.forest import (
    ForestConfig,
    ForestConfigError,
    ForestModel,
    ModelFormatError,
    Tree,
    grow_tree,
    predict_proba,
    train_forest,
)

F = len(FEATURE_NAMES)
CAT = FEATURE_NAMES.index("category")


def noisy_data(per_class=12, seed=0, signal=0):
    rng = np.random.default_rng(seed)
    labels = [c for c in QUALITY_CLASSES for _ in range(per_class)]
    X = rng.integers(0, 40, size=(len(labels), F)).astype(float)
    X[:, CAT] = rng.integers(0, 5, len(labels))
    X[:, signal] += 30 * np.array([QUALITY_CLASSES.index(c) for c in labels])
    return Dataset(X, labels)


def one_dim(xs, labels):
    X = np.zeros((len(xs), F))
    X[:, 0] = xs
    return Dataset(X, labels)


@pytest.mark.parametrize("seed", range(5))
def test_single_tree_fits_separable_data(seed):
    data = noisy_data(seed=seed)
    # one value per class, so the bootstrap sample holds every distinct training point
    data.X[:, 0] = 7.0 * data.class_codes()
    model = train_forest(data, ForestConfig(num_trees=1, features_per_split=F, seed=seed))
    assert np.array_equal(model.predict(data.X), data.class_codes())


def test_two_class_margin():
    xs = np.linspace(-1, 1, 40)
    xs = xs[xs != 0]
    data = one_dim(xs, ["Stub" if x < 0 else "Start" for x in xs])
    model = train_forest(data, ForestConfig(num_trees=100, seed=1))
    far = np.zeros((2, F))
    far[:, 0] = [-10, 10]
    assert model.predict(far).tolist() == [0, 1]


def _leaf(counts):
    return Tree(np.array([-1]), np.array([0.0]), np.array([-1]), np.array([-1]), np.array([counts]))


def test_pure_leaf_and_disagreeing_trees():
    fa = [0, 0, 0, 0, 0, 3]
    model = ForestModel([_leaf(fa)], FEATURE_NAMES, tuple(n == "category" for n in FEATURE_NAMES))
    v = FeatureVector("x", 0, 0, 0, 0, 0, 0, 0, "O", label=None)
    assert predict_proba(model, v) == {c: (1.0 if c == "FA" else 0.0) for c in QUALITY_CLASSES}
    model.trees = [_leaf([2, 0, 0, 0, 0, 0]), _leaf([0, 5, 0, 0, 0, 0])]
    probs = predict_proba(model, v)
    assert probs["Stub"] == probs["Start"] == 0.5
    assert model.predict(np.zeros((1, F))).tolist() == [0]


def test_same_seed_same_forest():
    data = noisy_data(seed=4)
    cfg = ForestConfig(num_trees=5, seed=11)
    assert train_forest(data, cfg).to_json() == train_forest(data, cfg).to_json()
    other = ForestConfig(num_trees=5, seed=12)
    assert train_forest(data, other).to_json() != train_forest(data, cfg).to_json()


def test_parallel_equals_serial():
    data = noisy_data(seed=5)
    serial = train_forest(data, ForestConfig(num_trees=12, seed=2, n_jobs=1))
    parallel = train_forest(data, ForestConfig(num_trees=12, seed=2, n_jobs=4))
    assert [t.to_dict() for t in serial.trees] == [t.to_dict() for t in parallel.trees]


def test_probabilities_sum_to_one():
    data = noisy_data(seed=6, signal=2)
    model = train_forest(data, ForestConfig(num_trees=15, seed=0))
    probs = model.predict_proba(np.random.default_rng(1).integers(0, 200, size=(30, F)).astype(float))
    assert np.all(probs >= 0)
    assert np.allclose(probs.sum(axis=1), 1.0, atol=1e-9)


def test_json_round_trip():
    data = noisy_data(seed=7)
    model = train_forest(data, ForestConfig(num_trees=4, seed=0, max_depth=3))
    model.metadata["variant"] = "FullMedicalDomain"
    back = ForestModel.from_json(model.to_json())
    assert back.to_json() == model.to_json()
    assert np.array_equal(back.predict_proba(data.X), model.predict_proba(data.X))


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.update(format_version=99),
        lambda d: d.pop("trees"),
        lambda d: d.update(trees=[]),
        lambda d: d["trees"][0]["nodes"][0].update(left=999),
        lambda d: d["trees"][0]["nodes"][0].update(feature=42),
        lambda d: d.update(nominal=[True]),
        lambda d: d["config"].update(bogus=1),
    ],
)
def test_corrupt_models_are_rejected(mutate):
    doc = json.loads(train_forest(noisy_data(), ForestConfig(num_trees=2, seed=0)).to_json())
    mutate(doc)
    with pytest.raises(ModelFormatError):
        ForestModel.from_json(json.dumps(doc))


def test_garbage_model_text():
    with pytest.raises(ModelFormatError):
        ForestModel.from_json("{not json")


@pytest.mark.parametrize(
    "cfg",
    [ForestConfig(num_trees=0), ForestConfig(features_per_split=0), ForestConfig(features_per_split=F + 1),
     ForestConfig(min_leaf=0), ForestConfig(max_depth=-1), ForestConfig(seed=-1)],
)
def test_invalid_config(cfg):
    with pytest.raises(ForestConfigError):
        train_forest(noisy_data(), cfg)


def test_training_preconditions():
    with pytest.raises(ForestConfigError):
        train_forest(one_dim([], []), ForestConfig())
    with pytest.raises(ForestConfigError):
        train_forest(one_dim([1, 2], ["GA", "GA"]), ForestConfig())


def test_depth_and_leaf_limits():
    data = noisy_data(seed=8)
    stump = train_forest(data, ForestConfig(num_trees=3, max_depth=0, seed=0))
    assert all(t.n_nodes == 1 for t in stump.trees)
    big_leaves = train_forest(data, ForestConfig(num_trees=3, min_leaf=10, seed=0))
    for t in big_leaves.trees:
        sizes = t.counts[t.left < 0].sum(axis=1)
        assert sizes.min() >= 10


def _warp(data, column):
    warped = Dataset(data.X.copy(), data.labels)
    x = warped.X[:, column]
    # integer inputs keep x**3 + 7x exact, so order is preserved bit for bit
    warped.X[:, column] = x**3 + 7 * x
    return warped


columns = st.integers(0, F - 1).filter(lambda j: j != CAT)


@settings(max_examples=30)
@given(st.integers(0, 10_000), columns)
def test_monotone_transform_keeps_tree_predictions(seed, column):
    data = noisy_data(per_class=8, seed=seed, signal=column)
    warped = _warp(data, column)
    nominal = np.array(data.nominal)
    y = data.class_codes()
    a = grow_tree(data.X, y, 6, nominal, 3, 1, None, np.random.default_rng(seed))
    b = grow_tree(warped.X, y, 6, nominal, 3, 1, None, np.random.default_rng(seed))
    assert np.array_equal(a.apply(data.X, nominal), b.apply(warped.X, nominal))


@settings(max_examples=30)
@given(st.integers(0, 10_000), columns, st.integers(1, 6))
def test_monotone_transform_keeps_forest_structure(seed, column, trees):
    data = noisy_data(per_class=8, seed=seed, signal=column)
    cfg = ForestConfig(num_trees=trees, seed=seed)
    a, b = train_forest(data, cfg), train_forest(_warp(data, column), cfg)
    for s, t in zip(a.trees, b.trees):
        assert np.array_equal(s.feature, t.feature)
        assert np.array_equal(s.left, t.left)
        assert np.array_equal(s.counts, t.counts)
        assert np.array_equal(s.threshold[s.feature != column], t.threshold[t.feature != column])

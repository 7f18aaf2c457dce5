"""Nearest-neighbor exactness against linear scan; CART split oracles."""
import numpy as np
import pytest

from mammocad.classifiers import CartTree, KnnConfig, NearestNeighbor, TreeConfig


def test_kd_tree_matches_a_linear_scan_exactly():
    rng = np.random.default_rng(0)
    Xtr = rng.uniform(size=(500, 6))
    ytr = rng.integers(0, 3, size=500)
    Xte = rng.uniform(size=(120, 6))
    model = NearestNeighbor(KnnConfig(leaf_size=8)).fit(Xtr, ytr)
    d2 = ((Xte[:, None, :] - Xtr[None, :, :]) ** 2).sum(axis=2)
    expected = ytr[np.argmin(d2, axis=1)]
    np.testing.assert_array_equal(model.predict(Xte), expected)


def test_leaf_size_does_not_change_answers():
    rng = np.random.default_rng(1)
    Xtr = rng.normal(size=(200, 4))
    ytr = rng.integers(0, 3, size=200)
    Xte = rng.normal(size=(50, 4))
    preds = [
        NearestNeighbor(KnnConfig(leaf_size=ls)).fit(Xtr, ytr).predict(Xte) for ls in (1, 7, 50, 500)
    ]
    for p in preds[1:]:
        np.testing.assert_array_equal(p, preds[0])


def test_nearest_neighbor_memorizes_training_points():
    rng = np.random.default_rng(2)
    X = rng.uniform(size=(80, 3))
    y = rng.integers(0, 3, size=80)
    model = NearestNeighbor().fit(X, y)
    np.testing.assert_array_equal(model.predict(X), y)


def test_equidistant_tie_resolves_to_the_lowest_training_index():
    X = np.array([[0.0], [2.0]])
    y = np.array([3, 8])
    model = NearestNeighbor().fit(X, y)
    assert model.predict(np.array([[1.0]]))[0] == 3
    # order flipped: the tie now belongs to the other label
    model = NearestNeighbor().fit(X[::-1], y[::-1])
    assert model.predict(np.array([[1.0]]))[0] == 8


def test_tree_finds_the_single_obvious_split():
    X = np.array([[0.0], [1.0], [2.0], [3.0]])
    y = np.array([0, 0, 1, 1])
    model = CartTree().fit(X, y)
    assert model.n_splits_ == 1
    t = model._root.threshold
    assert 1.0 < t < 2.0
    np.testing.assert_array_equal(model.predict(np.array([[0.5], [1.4], [1.6], [9.0]])), [0, 0, 1, 1])


def test_pure_nodes_are_never_split():
    X = np.arange(10, dtype=float).reshape(-1, 1)
    y = np.zeros(10, dtype=int)
    model = CartTree().fit(X, y)
    assert model.n_splits_ == 0
    np.testing.assert_array_equal(model.predict(X), np.zeros(10, dtype=int))


def test_split_budget_is_bounded_by_sample_count():
    rng = np.random.default_rng(3)
    X = rng.uniform(size=(40, 5))
    y = rng.integers(0, 3, size=40)  # noise forces many splits
    model = CartTree().fit(X, y)
    assert model.n_splits_ <= len(X) - 1
    assert (model.predict(X) == y).mean() == 1.0  # distinct rows memorize


def test_max_splits_caps_growth():
    rng = np.random.default_rng(4)
    X = rng.uniform(size=(60, 4))
    y = rng.integers(0, 3, size=60)
    model = CartTree(TreeConfig(max_splits=2)).fit(X, y)
    assert model.n_splits_ <= 2


def test_min_leaf_admits_only_balanced_cuts():
    X = np.array([[0.0], [1.0], [2.0], [3.0], [4.0], [5.0]])
    y = np.array([0, 1, 0, 1, 0, 1])
    model = CartTree(TreeConfig(min_leaf=3)).fit(X, y)
    # only the 3/3 cut keeps both children at the floor, and the resulting
    # tri-sample children cannot split again
    assert model.n_splits_ == 1
    assert 2.0 < model._root.threshold < 3.0
    np.testing.assert_array_equal(model.predict(np.array([[0.2], [4.8]])), [0, 1])


def test_tree_separates_interleaved_bands():
    # axis-aligned bands need several splits; predictions stay exact on train
    xs = np.linspace(0, 1, 30)
    X = np.c_[xs, np.zeros_like(xs)]
    y = (xs * 4).astype(int) % 2
    model = CartTree().fit(X, y)
    np.testing.assert_array_equal(model.predict(X), y)
    assert model.n_splits_ >= 3


def test_config_and_shape_validation():
    with pytest.raises(ValueError, match="leaf_size"):
        KnnConfig(leaf_size=0)
    with pytest.raises(ValueError, match="min_leaf"):
        TreeConfig(min_leaf=0)
    with pytest.raises(ValueError, match="max_splits"):
        TreeConfig(max_splits=-1)
    X = np.arange(8, dtype=float).reshape(4, 2)
    y = np.array([0, 1, 0, 1])
    for model in (NearestNeighbor().fit(X, y), CartTree().fit(X, y)):
        with pytest.raises(ValueError, match="feature dimension"):
            model.predict(np.zeros((2, 3)))

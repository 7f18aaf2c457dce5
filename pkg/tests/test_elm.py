"""Extreme learning machine: pseudoinverse solution quality and kernel behavior."""
import numpy as np
import pytest

from mammocad.classifiers import ELM_KERNELS, ElmConfig, ExtremeLearningMachine


def _blobs(seed=0, n_per=40, spread=0.05):
    rng = np.random.default_rng(seed)
    centers = np.array([[0.2, 0.2], [0.8, 0.2], [0.5, 0.9]])
    X = np.vstack([c + rng.normal(scale=spread, size=(n_per, 2)) for c in centers])
    y = np.repeat([0, 1, 2], n_per)
    return X, y


def test_output_weights_solve_the_least_squares_problem():
    X, y = _blobs(1)
    model = ExtremeLearningMachine(ElmConfig(kernel="sigmoid", hidden_neurons=25, weight_seed=3))
    model.fit(X, y)
    H = model._hidden(X)
    T = np.eye(3)[y]
    beta, *_ = np.linalg.lstsq(H, T, rcond=None)
    np.testing.assert_allclose(model.beta_, beta, atol=1e-6)
    # Penrose condition: the residual is orthogonal to the column space,
    # up to roundoff amplified by the conditioning of H
    residual = H @ model.beta_ - T
    bound = 50 * np.finfo(float).eps * np.linalg.cond(H) * np.linalg.norm(H, 2) * np.linalg.norm(residual)
    assert np.abs(H.T @ residual).max() < bound


def test_pinv_takes_the_minimum_norm_solution_when_underdetermined():
    # more neurons than samples: infinitely many interpolants, pinv picks
    # the one with the smallest Frobenius norm
    X, y = _blobs(2, n_per=5)
    model = ExtremeLearningMachine(ElmConfig(hidden_neurons=60, weight_seed=0)).fit(X, y)
    H = model._hidden(X)
    T = np.eye(3)[y]
    np.testing.assert_allclose(H @ model.beta_, T, atol=1e-8)  # exact interpolation
    general, *_ = np.linalg.lstsq(H, T, rcond=None)
    assert np.linalg.norm(model.beta_) <= np.linalg.norm(general) + 1e-8


def test_xor_is_learned_with_a_nonlinear_kernel():
    X = np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]])
    y = np.array([0, 1, 1, 0])
    model = ExtremeLearningMachine(ElmConfig(kernel="sigmoid", hidden_neurons=20, weight_seed=1))
    np.testing.assert_array_equal(model.fit(X, y).predict(X), y)


def test_separated_blobs_generalize_to_held_out_points():
    Xtr, ytr = _blobs(3)
    Xte, yte = _blobs(4)
    model = ExtremeLearningMachine(ElmConfig(kernel="sigmoid", hidden_neurons=50, weight_seed=0))
    pred = model.fit(Xtr, ytr).predict(Xte)
    assert (pred == yte).mean() >= 0.99


def test_fit_is_deterministic_in_the_weight_seed():
    X, y = _blobs(5)
    a = ExtremeLearningMachine(ElmConfig(hidden_neurons=30, weight_seed=7)).fit(X, y)
    b = ExtremeLearningMachine(ElmConfig(hidden_neurons=30, weight_seed=7)).fit(X, y)
    np.testing.assert_array_equal(a.beta_, b.beta_)
    c = ExtremeLearningMachine(ElmConfig(hidden_neurons=30, weight_seed=8)).fit(X, y)
    assert not np.allclose(a.beta_, c.beta_)


@pytest.mark.parametrize("kernel", ELM_KERNELS)
def test_every_kernel_fits_and_predicts(kernel):
    X, y = _blobs(6, n_per=20)
    model = ExtremeLearningMachine(ElmConfig(kernel=kernel, hidden_neurons=40, weight_seed=2))
    pred = model.fit(X, y).predict(X)
    assert pred.shape == y.shape
    assert set(pred) <= {0, 1, 2}
    # every kernel separates three tight blobs on the training points
    assert (pred == y).mean() >= 0.95


def test_wavelet_kernel_is_the_morlet_window():
    from mammocad.classifiers.elm import _activation

    z = np.linspace(-3, 3, 13)
    np.testing.assert_allclose(
        _activation("wavelet", z), np.cos(1.75 * z) * np.exp(-0.5 * z * z), atol=0
    )


def test_labels_survive_arbitrary_integer_coding():
    X, y = _blobs(7, n_per=15)
    relabeled = np.array([10, 40, 20])[y]
    model = ExtremeLearningMachine(ElmConfig(hidden_neurons=30)).fit(X, relabeled)
    assert set(model.predict(X)) <= {10, 20, 40}
    assert (model.predict(X) == relabeled).mean() >= 0.95


def test_config_and_shape_validation():
    with pytest.raises(ValueError, match="unknown ELM kernel"):
        ElmConfig(kernel="relu")
    with pytest.raises(ValueError, match="hidden_neurons"):
        ElmConfig(hidden_neurons=0)
    X, y = _blobs(8, n_per=5)
    model = ExtremeLearningMachine(ElmConfig()).fit(X, y)
    with pytest.raises(ValueError, match="feature dimension"):
        model.predict(np.zeros((2, 3)))

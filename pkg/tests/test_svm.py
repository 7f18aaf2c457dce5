"""SMO solver: closed-form oracles, KKT certificates, dual ascent, multiclass votes."""
import numpy as np
import pytest

from mammocad.classifiers import SVM_KERNELS, SupportVectorMachine, SvmConfig
from mammocad.classifiers.svm import _BinarySvm, _kernel_matrix


def test_two_point_problem_matches_the_closed_form():
    # two points at x = -1 and x = +1: alpha = 0.5 saturates neither box,
    # w = 1, b = 0, and the margin touches both points
    X = np.array([[-1.0], [1.0]])
    y = np.array([-1.0, 1.0])
    m = _BinarySvm(SvmConfig(kernel="linear", C=10.0), gamma=1.0).fit(X, y)
    np.testing.assert_allclose(np.sort(m.alpha_), [0.5, 0.5], atol=1e-9)
    assert m.b == pytest.approx(0.0, abs=1e-9)
    np.testing.assert_allclose(m.decision(X), y, atol=1e-9)


def test_decision_is_the_kernel_expansion_over_support_vectors():
    rng = np.random.default_rng(0)
    X = np.vstack([rng.normal(-1.0, 0.3, size=(20, 3)), rng.normal(1.0, 0.3, size=(20, 3))])
    y = np.r_[-np.ones(20), np.ones(20)]
    m = _BinarySvm(SvmConfig(kernel="rbf"), gamma=0.5).fit(X, y)
    K = _kernel_matrix(SvmConfig(kernel="rbf"), 0.5, X, X)
    manual = K[:, m.support_] @ m.dual_coef_ + m.b
    np.testing.assert_allclose(m.decision(X), manual, atol=1e-10)


@pytest.mark.parametrize("kernel", SVM_KERNELS)
def test_solution_satisfies_the_kkt_conditions(kernel):
    rng = np.random.default_rng(1)
    X = np.vstack([rng.normal(-0.8, 0.5, size=(30, 4)), rng.normal(0.8, 0.5, size=(30, 4))])
    y = np.r_[-np.ones(30), np.ones(30)]
    cfg = SvmConfig(kernel=kernel, C=1.0, coef0=1.0 if kernel == "sigmoid" else 0.0)
    m = _BinarySvm(cfg, gamma=1.0 / X.shape[1]).fit(X, y)
    margins = y * m.decision(X)
    C, tol = cfg.C, 5e-3
    at_zero = m.alpha_ <= 1e-9
    at_cap = m.alpha_ >= C - 1e-9
    free = ~(at_zero | at_cap)
    assert np.all(margins[at_zero] >= 1.0 - tol)
    assert np.all(np.abs(margins[free] - 1.0) <= tol)
    assert np.all(margins[at_cap] <= 1.0 + tol)
    # dual feasibility: box and the equality constraint
    assert np.all(m.alpha_ >= -1e-12) and np.all(m.alpha_ <= C + 1e-12)
    assert float(m.alpha_ @ y) == pytest.approx(0.0, abs=1e-9)


def test_dual_objective_never_decreases():
    rng = np.random.default_rng(2)
    X = rng.uniform(size=(40, 5))
    y = np.where(X[:, 0] + X[:, 1] > 1.0, 1.0, -1.0)
    if len(set(y)) < 2:
        pytest.skip("degenerate draw")
    m = _BinarySvm(SvmConfig(kernel="rbf", C=2.0), gamma=1.0, track_objective=True).fit(X, y)
    hist = np.asarray(m.objective_history)
    assert len(hist) >= 2
    assert np.all(np.diff(hist) >= -1e-9)


def test_multiclass_one_vs_one_separates_three_blobs():
    rng = np.random.default_rng(3)
    centers = np.array([[0.0, 0.0], [4.0, 0.0], [2.0, 4.0]])
    X = np.vstack([c + rng.normal(scale=0.4, size=(25, 2)) for c in centers])
    y = np.repeat([5, 9, 7], 25)
    model = SupportVectorMachine(SvmConfig(kernel="linear", C=1.0)).fit(X, y)
    assert len(model.machines_) == 3
    np.testing.assert_array_equal(model.predict(X), y)
    np.testing.assert_array_equal(model.classes_, [5, 7, 9])


def test_high_dimensional_training_converges():
    # wide feature matrices once stalled the working-set selection when a
    # dual coefficient landed a rounding error above zero; keep this fast
    # regression against sparse high-dimensional inputs
    rng = np.random.default_rng(4)
    X = rng.uniform(size=(60, 416)) * (rng.uniform(size=(60, 416)) > 0.8)
    y = np.where(X[:, :200].sum(1) > X[:, 200:400].sum(1), 1, 2)
    if len(set(y.tolist())) < 2:
        pytest.skip("degenerate draw")
    model = SupportVectorMachine(SvmConfig(kernel="linear", C=1.0)).fit(X, y)
    assert (model.predict(X) == y).mean() >= 0.9


def test_config_and_input_validation():
    with pytest.raises(ValueError, match="unknown SVM kernel"):
        SvmConfig(kernel="laplacian")
    with pytest.raises(ValueError, match="C must be positive"):
        SvmConfig(C=0.0)
    X = np.zeros((4, 2))
    with pytest.raises(ValueError, match="two classes"):
        SupportVectorMachine(SvmConfig()).fit(X, np.zeros(4, dtype=int))
    model = SupportVectorMachine(SvmConfig()).fit(X + np.arange(4)[:, None], np.array([0, 0, 1, 1]))
    with pytest.raises(ValueError, match="feature dimension"):
        model.predict(np.zeros((1, 5)))

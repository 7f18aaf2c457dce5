"""Acceptance suite: twelve structural, oracle, and end-to-end criteria.

Each test covers one numbered criterion and prints a single PASS line after
its assertions (visible with -s; pytest -v reports pass/fail per criterion).
The end-to-end benchmark (criterion 10) generates its own 180-image phantom
corpus and runs both extractors plus the cross-validation protocol; expect
roughly a minute of wall time for the whole file.
"""
import json
import time

import numpy as np
import pytest
from scipy import ndimage

from mammocad.classifiers import (
    CartTree,
    ElmConfig,
    ExtremeLearningMachine,
    KnnConfig,
    MlpConfig,
    MultilayerPerceptron,
    NearestNeighbor,
    SupportVectorMachine,
    SvmConfig,
)
from mammocad.classifiers.base import one_hot
from mammocad.classifiers.mlp import _init_params, _loss, _loss_and_grads
from mammocad.classifiers.svm import _BinarySvm
from mammocad.dataio import FeatureMatrix, balance_dataset, load_manifest
from mammocad.evaluation import (
    ProtocolConfig,
    emit_report,
    load_report,
    make_fold_plan,
    report_core,
    run_protocol,
    t_test,
)
from mammocad.features import extract_from_manifest, extract_wavelet_zernike
from mammocad.morphology import disc, pattern_spectrum
from mammocad.phantoms import PhantomConfig, generate_phantom_dataset
from mammocad.wavelets import FAMILIES, decompose, filter_bank, synthesize_level
from mammocad.zernike import MOMENT_INDICES, basis, moments, radial_polynomial


def _blobs(seed=0, n_per=10, extractor_id="wavelet-zernike[family=sym8,levels=4]"):
    rng = np.random.default_rng(seed)
    centers = np.array([[0.1, 0.1], [0.9, 0.1], [0.5, 0.9]])
    X = np.vstack([c + rng.normal(scale=0.05, size=(n_per, 2)) for c in centers])
    return FeatureMatrix(X=X, y=np.repeat([0, 1, 2], n_per), extractor_id=extractor_id)


def test_criterion_01_pipeline_arithmetic_13_components_416_features():
    rng = np.random.default_rng(0)
    img = rng.uniform(size=(128, 128))
    decomp = decompose(img, filter_bank("sym8"), levels=4, mode="symmetric")
    assert len(decomp.components()) == 13
    start = time.perf_counter()
    vec = extract_wavelet_zernike(img, family="sym8")
    elapsed = time.perf_counter() - start
    assert vec.shape == (416,)
    assert elapsed < 1.0
    print(f"ACCEPTANCE 01 PASS: 128x128 -> 13 components -> 416 features in {elapsed:.3f} s")


def test_criterion_02_balancing_reproduces_the_headline_counts():
    rng = np.random.default_rng(1)
    X = rng.uniform(size=(233 + 72 + 83, 6))
    y = np.repeat([0, 1, 2], [233, 72, 83])
    balanced = balance_dataset(FeatureMatrix(X=X, y=y), seed=0)
    assert len(balanced) == 699
    counts = {c: int((balanced.y == c).sum()) for c in (0, 1, 2)}
    assert counts == {0: 233, 1: 233, 2: 233}
    synth_per_class = {c: int(balanced.synthetic[balanced.y == c].sum()) for c in (0, 1, 2)}
    assert synth_per_class == {0: 0, 1: 161, 2: 150}
    print("ACCEPTANCE 02 PASS: (233, 72, 83) -> 699 with 161 + 150 synthetic rows")


def test_criterion_03_fold_sizes_for_699_samples():
    plan = make_fold_plan(699, 10, seed=1)
    assert plan.fold_sizes() == [69] * 9 + [78]
    print("ACCEPTANCE 03 PASS: 699 samples -> nine folds of 69 plus one of 78")


def test_criterion_04_protocol_run_counts_scale_with_seeds(tmp_path):
    matrix = _blobs(2)
    expected = {
        "svm": (ProtocolConfig(classifier="svm", kernel="linear", seeds=3), 30),
        "knn": (ProtocolConfig(classifier="knn", seeds=3), 30),
        "tree": (ProtocolConfig(classifier="tree", seeds=3), 30),
        "elm": (ProtocolConfig(classifier="elm", kernel="sigmoid", seeds=3, hidden_neurons=10), 90),
        "mlp": (ProtocolConfig(classifier="mlp", kernel="gd", seeds=3, max_epochs=3), 27),
    }
    for name, (cfg, count) in expected.items():
        report = run_protocol(matrix, cfg)
        path = tmp_path / f"{name}.csv"
        emit_report(report, path, fmt="csv")
        assert len(load_report(path).records) == count, name
    print("ACCEPTANCE 04 PASS: seeds=3 -> 30 svm/knn/tree, 90 elm, 27 mlp runs "
          "(300/9000/2700 at seeds=30)")


def test_criterion_05_disk_pattern_spectrum_is_an_impulse():
    start = time.perf_counter()
    se = disc(1)
    peaks = {}
    for radius in (5, 10):
        n = 4 * radius + 9
        c = n // 2
        ys, xs = np.mgrid[0:n, 0:n]
        # the binary disk in the metric the structuring element induces
        disk = (np.abs(xs - c) + np.abs(ys - c) <= radius).astype(float)
        spectrum = pattern_spectrum(disk, se, max_k=64)
        frac = spectrum.xi.max() / spectrum.xi.sum()
        assert frac >= 0.99
        assert int(np.argmax(spectrum.xi)) == radius
        peaks[radius] = frac
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    print(f"ACCEPTANCE 05 PASS: disk spectra are impulses at R and 2R "
          f"(peak mass {peaks[5]:.4f}, {peaks[10]:.4f}) in {elapsed:.2f} s")


def test_criterion_06_perfect_reconstruction_and_energy_conservation():
    rng = np.random.default_rng(3)
    img = rng.uniform(size=(32, 32))
    worst = 0.0
    for family in FAMILIES:
        bank = filter_bank(family)
        decomp = decompose(img, bank, levels=1, mode="periodic")
        back = synthesize_level(decomp.levels[0], bank)
        worst = max(worst, float(np.abs(back - img).max()))
    assert worst < 1e-8
    for family in ("db8", "sym8"):
        decomp = decompose(img, filter_bank(family), levels=3, mode="periodic")
        energy = float((decomp.final_ll ** 2).sum()) + sum(
            float((s.hl ** 2).sum() + (s.lh ** 2).sum() + (s.hh ** 2).sum())
            for s in decomp.levels
        )
        assert energy == pytest.approx(float((img ** 2).sum()), rel=1e-6)
    print(f"ACCEPTANCE 06 PASS: perfect reconstruction (max err {worst:.2e}) "
          "and orthogonal energy conservation")


def _mass_image(size, spiculated=False):
    c = (size - 1) / 2.0
    ys, xs = np.mgrid[0:size, 0:size]
    x = (xs - c) - 0.08 * size / 2
    y = -(ys - c) + 0.05 * size / 2
    r = np.hypot(x, y) / (size / 2)
    theta = np.arctan2(y, x)
    r0 = 0.55 * (1.0 + (0.35 * np.sin(9 * theta + 0.7) if spiculated else 0.0))
    edge = 1.2 if spiculated else 1.5
    return 1.0 / (1.0 + np.exp((r - r0) / (edge / size * 2)))


def test_criterion_07_zernike_enumeration_oracles_invariance_orthogonality():
    counts = {}
    for n, m in MOMENT_INDICES:
        counts[n] = counts.get(n, 0) + 1
    assert counts == {3: 2, 4: 3, 5: 3, 6: 4, 7: 4, 8: 5, 9: 5, 10: 6}
    assert len(MOMENT_INDICES) == 32

    p = np.array([0.0, 0.25, 0.5, 0.75, 1.0])
    hand = {
        (3, 1): 3 * p**3 - 2 * p,
        (4, 0): 6 * p**4 - 6 * p**2 + 1,
        (4, 2): 4 * p**4 - 3 * p**2,
        (5, 1): 10 * p**5 - 12 * p**3 + 3 * p,
    }
    for (n, m), expected in hand.items():
        np.testing.assert_allclose(radial_polynomial(n, m, p), expected, atol=1e-10)

    worst_rotation = 0.0
    for spiculated in (False, True):
        img = _mass_image(64, spiculated=spiculated)
        a = moments(img)
        for angle in (30.0, 137.0):
            rot = ndimage.rotate(img, angle, reshape=False, order=3, mode="nearest")
            b = moments(rot)
            vec = np.linalg.norm(a - b) / np.linalg.norm(a)
            significant = a > 0.01 * a.max()
            per = np.max(np.abs(a[significant] - b[significant]) / a[significant])
            worst_rotation = max(worst_rotation, vec, per)
    assert worst_rotation < 0.02

    size = 256
    c = (size - 1) / 2.0
    ys, xs = np.mgrid[0:size, 0:size]
    scale = 2.0 / size
    x, y = (xs - c) * scale, -(ys - c) * scale
    p_grid = np.hypot(x, y)
    theta = np.arctan2(y, x)
    mask = p_grid <= 1.0
    V = np.stack([basis(n, m, p_grid[mask], theta[mask]) for n, m in MOMENT_INDICES], axis=1)
    G = V.conj().T @ V
    diag = np.sqrt(np.real(np.diag(G)))
    normalized = np.abs(G) / np.outer(diag, diag)
    off = normalized[~np.eye(32, dtype=bool)]
    assert off.max() < 1e-2
    print(f"ACCEPTANCE 07 PASS: 32 indices, radial oracles <= 1e-10, rotation "
          f"deviation {worst_rotation:.4f} < 2%, Gram off-diagonal {off.max():.2e} < 1e-2")


def test_criterion_08_classifier_oracles():
    # ELM: the solved pseudoinverse satisfies all four Penrose conditions,
    # each scaled by the magnitude of the matrix it reconstructs
    matrix = _blobs(4, n_per=40)
    elm = ExtremeLearningMachine(ElmConfig(kernel="sigmoid", hidden_neurons=20, weight_seed=5))
    elm.fit(matrix.X, matrix.y)
    H = elm._hidden(matrix.X)
    P = np.linalg.pinv(H, rcond=1e-12)
    assert np.abs(H @ P @ H - H).max() / np.abs(H).max() < 1e-8
    assert np.abs(P @ H @ P - P).max() / np.abs(P).max() < 1e-8
    assert np.abs((H @ P).T - H @ P).max() < 1e-8
    assert np.abs((P @ H).T - P @ H).max() < 1e-8

    # SVM: two-point closed form and KKT residuals on separable data
    two = _BinarySvm(SvmConfig(kernel="linear", C=10.0), gamma=1.0).fit(
        np.array([[-1.0], [1.0]]), np.array([-1.0, 1.0])
    )
    np.testing.assert_allclose(np.sort(two.alpha_), [0.5, 0.5], atol=1e-6)
    assert two.b == pytest.approx(0.0, abs=1e-6)
    np.testing.assert_allclose(two.decision(np.array([[-1.0], [1.0]])), [-1.0, 1.0], atol=1e-6)
    rng = np.random.default_rng(6)
    Xb = np.vstack([rng.normal(-0.8, 0.5, size=(30, 4)), rng.normal(0.8, 0.5, size=(30, 4))])
    yb = np.r_[-np.ones(30), np.ones(30)]
    machine = _BinarySvm(SvmConfig(kernel="linear", C=1.0), gamma=0.25).fit(Xb, yb)
    marg = yb * machine.decision(Xb)
    assert np.all(marg[machine.alpha_ <= 1e-9] >= 1.0 - 5e-3)
    free = (machine.alpha_ > 1e-9) & (machine.alpha_ < 1.0 - 1e-9)
    assert np.all(np.abs(marg[free] - 1.0) <= 5e-3)
    assert np.all(marg[machine.alpha_ >= 1.0 - 1e-9] <= 1.0 + 5e-3)

    # k-NN: kd-tree equals the linear scan on 500 random points, exactly
    Xtr = rng.uniform(size=(500, 6))
    ytr = rng.integers(0, 3, size=500)
    Xte = rng.uniform(size=(100, 6))
    knn = NearestNeighbor(KnnConfig(leaf_size=8)).fit(Xtr, ytr)
    scan = ytr[np.argmin(((Xte[:, None, :] - Xtr[None, :, :]) ** 2).sum(axis=2), axis=1)]
    np.testing.assert_array_equal(knn.predict(Xte), scan)

    # CART: distinct points are memorized
    Xd = rng.uniform(size=(60, 4))
    yd = rng.integers(0, 3, size=60)
    assert (CartTree().fit(Xd, yd).predict(Xd) == yd).all()

    # MLP: analytic gradients match central differences within 1e-4 relative
    params = _init_params(np.random.default_rng(7), [3, 5, 2])
    Xg = rng.normal(size=(6, 3))
    Tg = one_hot(rng.integers(0, 2, size=6), 2)
    _, grads = _loss_and_grads(params, Xg, Tg)
    eps = 1e-6
    worst_rel = 0.0
    for li, (W, b) in enumerate(params):
        for arr, g in ((W, grads[li][0]), (b, grads[li][1])):
            it = np.nditer(arr, flags=["multi_index"])
            for _ in it:
                ix = it.multi_index
                keep = arr[ix]
                arr[ix] = keep + eps
                hi = _loss(params, Xg, Tg)
                arr[ix] = keep - eps
                lo = _loss(params, Xg, Tg)
                arr[ix] = keep
                numeric = (hi - lo) / (2 * eps)
                denom = max(abs(numeric), 1e-8)
                worst_rel = max(worst_rel, abs(g[ix] - numeric) / denom)
    assert worst_rel < 1e-4
    print(f"ACCEPTANCE 08 PASS: Penrose, SVM closed form + KKT, exact k-NN, "
          f"tree memorization, gradient check (worst rel {worst_rel:.2e})")


def test_criterion_09_t_test_hand_oracle():
    res = t_test([1, 2, 3, 4, 5], [2, 3, 4, 5, 6])
    assert res.t_statistic == pytest.approx(-1.0, abs=1e-4)
    assert res.degrees_of_freedom == 8.0
    assert res.p_value == pytest.approx(0.3466, abs=1e-4)
    same = t_test([4.0, 5.5, 6.25, 7.0], [4.0, 5.5, 6.25, 7.0])
    assert same.p_value == 1.0 and same.hypothesis == 0
    print("ACCEPTANCE 09 PASS: pooled t-test gives t=-1, df=8, p=0.3466; "
          "identical samples give p=1")


@pytest.fixture(scope="module")
def phantom_benchmark(tmp_path_factory):
    root = tmp_path_factory.mktemp("bench")
    timings = {}
    start = time.perf_counter()
    cfg = PhantomConfig(normals=60, benign=60, malignant=60, size=128, seed=1)
    generate_phantom_dataset(root, cfg)
    timings["generate"] = time.perf_counter() - start
    entries = load_manifest(root / "manifest.csv")
    start = time.perf_counter()
    wz = extract_from_manifest(entries, "wavelet-zernike", family="sym8")
    timings["wavelet-zernike"] = time.perf_counter() - start
    start = time.perf_counter()
    spectrum = extract_from_manifest(entries, "spectrum", se_shape="square")
    timings["spectrum"] = time.perf_counter() - start
    return wz, spectrum, timings


def test_criterion_10_end_to_end_phantom_benchmark(phantom_benchmark):
    wz, spectrum, timings = phantom_benchmark
    assert wz.X.shape == (180, 416)
    assert spectrum.X.shape == (180, 7)
    cfg = ProtocolConfig(classifier="svm", kernel="linear", seeds=5, folds=10)
    start = time.perf_counter()
    wz_report = run_protocol(wz, cfg)
    spec_report = run_protocol(spectrum, cfg)
    protocol_sec = time.perf_counter() - start
    wz_acc = wz_report.aggregates()[wz_report.config_id]["test_acc"]["mean"]
    spec_acc = spec_report.aggregates()[spec_report.config_id]["test_acc"]["mean"]
    assert wz_acc >= 90.0
    assert wz_acc > spec_acc
    total = sum(timings.values()) + protocol_sec
    assert total < 600.0
    print(f"ACCEPTANCE 10 PASS: wavelet-Zernike {wz_acc:.2f}% > spectrum "
          f"{spec_acc:.2f}% over 50 CV runs each, total {total:.0f} s < 600 s")


def test_criterion_11_elm_trains_an_order_of_magnitude_faster_than_mlp():
    rng = np.random.default_rng(0)
    centers = rng.uniform(0.0, 1.0, size=(3, 416))
    X = np.clip(
        np.vstack([c + rng.normal(scale=0.45, size=(233, 416)) for c in centers]), 0.0, 1.0
    )
    y = np.repeat([0, 1, 2], 233)
    start = time.perf_counter()
    ExtremeLearningMachine(ElmConfig(kernel="linear", hidden_neurons=100, weight_seed=1)).fit(X, y)
    elm_sec = time.perf_counter() - start
    mlp = MultilayerPerceptron(
        MlpConfig(hidden=(100,), trainer="batch", max_epochs=100, patience=5,
                  weight_seed=1, shuffle_seed=1)
    )
    start = time.perf_counter()
    mlp.fit(X, y)
    mlp_sec = time.perf_counter() - start
    assert mlp_sec >= 10.0 * elm_sec
    print(f"ACCEPTANCE 11 PASS: ELM {elm_sec * 1e3:.1f} ms vs MLP {mlp_sec * 1e3:.1f} ms "
          f"({mlp_sec / elm_sec:.0f}x) on a 699x416 matrix")


def test_criterion_12_identical_seeds_give_byte_identical_reports(tmp_path):
    matrix = _blobs(8, n_per=12)
    cfg = ProtocolConfig(classifier="elm", kernel="sigmoid", seeds=2, folds=5, hidden_neurons=10)
    a = run_protocol(matrix, cfg)
    b = run_protocol(matrix, cfg)
    core_a = json.dumps(report_core(a), sort_keys=True)
    core_b = json.dumps(report_core(b), sort_keys=True)
    assert core_a == core_b

    # the emitted CSVs agree byte for byte once timing columns are dropped
    def strip_timings(path):
        kept = []
        for line in path.read_text().splitlines():
            if line.startswith("# aggregate\t") and ("train_sec" in line or "test_sec" in line):
                continue
            if line.startswith("#") or line.startswith("config_id,"):
                kept.append(line)
                continue
            cells = line.split(",")
            # train_sec/test_sec sit in the two columns before the error column
            kept.append(",".join(cells[:-3] + cells[-1:]))
        return "\n".join(kept)

    pa, pb = tmp_path / "a.csv", tmp_path / "b.csv"
    emit_report(a, pa, fmt="csv")
    emit_report(b, pb, fmt="csv")
    assert strip_timings(pa) == strip_timings(pb)
    print("ACCEPTANCE 12 PASS: repeated protocol runs serialize identically "
          "outside the timing columns")

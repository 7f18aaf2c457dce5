"""End-to-end command-line flows, resolved-config logging, and exit codes."""
import json
import subprocess
import sys

import numpy as np
import pytest

from mammocad.cli import main


def _run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(scope="module")
def dataset(tmp_path_factory):
    root = tmp_path_factory.mktemp("flow")
    code = main(["phantom", "--out", str(root / "imgs"), "--normals", "4", "--benign", "4",
                 "--malignant", "4", "--size", "32", "--seed", "7"])
    assert code == 0
    return root


def test_phantom_writes_images_and_manifest(dataset, capsys):
    manifest = dataset / "imgs" / "manifest.csv"
    assert manifest.exists()
    assert len(list((dataset / "imgs").glob("*.pgm"))) == 12


def test_extract_then_evaluate_then_compare(dataset, capsys):
    manifest = str(dataset / "imgs" / "manifest.csv")
    feats = str(dataset / "wz.csv")
    code, out, _ = _run(["extract", "--manifest", manifest, "--out", feats], capsys)
    assert code == 0
    assert "[extract] resolved configuration:" in out
    assert "family = sym8" in out and "levels = 4" in out
    assert "wrote 12 x 416 features" in out
    assert out.count(" s\n") >= 12  # one timed progress line per image

    report_a = str(dataset / "knn.csv")
    code, out, _ = _run(["evaluate", "--features", feats, "--classifier", "knn",
                         "--seeds", "2", "--report", report_a], capsys)
    assert code == 0
    assert "[evaluate] resolved configuration:" in out
    assert "seeds = 1..2" in out and "folds = 10" in out
    assert "normalization = min-max per feature, fitted on training rows only" in out
    assert "test accuracy" in out

    report_b = str(dataset / "tree.json")
    code, out, _ = _run(["evaluate", "--features", feats, "--classifier", "tree",
                         "--seeds", "2", "--report", report_b, "--format", "json"], capsys)
    assert code == 0
    assert json.loads((dataset / "tree.json").read_text())["version"] == "1"

    cmp_out = str(dataset / "cmp.json")
    code, out, _ = _run(["compare", "--reports", report_a, report_b, "--out", cmp_out], capsys)
    assert code == 0
    assert "pairwise t-tests" in out
    assert "accuracy/training-time ratios" in out
    result = json.loads((dataset / "cmp.json").read_text())
    assert len(result["t_tests"]) == 1
    assert {"a", "b", "p_value", "t_statistic", "hypothesis", "degrees_of_freedom"} <= set(
        result["t_tests"][0]
    )


def test_spectrum_extraction_via_flags(dataset, capsys):
    manifest = str(dataset / "imgs" / "manifest.csv")
    feats = str(dataset / "spec.csv")
    code, out, _ = _run(["extract", "--manifest", manifest, "--extractor", "spectrum",
                         "--se", "cross", "--out", feats], capsys)
    assert code == 0
    assert "se = cross" in out
    assert "wrote 12 x 7 features" in out


def test_balanced_evaluation_reports_synthetic_counts(dataset, tmp_path, capsys):
    manifest = dataset / "imgs" / "manifest.csv"
    # drop the last two rows so one class needs topping up; the skewed copy
    # must sit next to the images because paths resolve against its parent
    lines = manifest.read_text().splitlines()
    skewed = dataset / "imgs" / "skewed.csv"
    skewed.write_text("\n".join(lines[:-2]) + "\n")
    feats = str(tmp_path / "skewed_feats.csv")
    code, _, _ = _run(["extract", "--manifest", str(skewed), "--out", feats], capsys)
    assert code == 0
    code, out, _ = _run(["evaluate", "--features", feats, "--classifier", "knn", "--seeds", "1",
                         "--balance", "--report", str(tmp_path / "r.csv")], capsys)
    assert code == 0
    assert "balanced to" in out and "synthetic" in out


def test_evaluate_honors_the_jobs_environment_default(dataset, tmp_path, capsys, monkeypatch):
    feats = str(dataset / "wz.csv")
    monkeypatch.setenv("MAMMOCAD_JOBS", "2")
    code, out, _ = _run(["evaluate", "--features", feats, "--classifier", "knn", "--seeds", "1",
                         "--report", str(tmp_path / "r.csv")], capsys)
    assert code == 0
    assert "jobs = 2" in out
    monkeypatch.setenv("MAMMOCAD_JOBS", "not-a-number")
    code, out, _ = _run(["evaluate", "--features", feats, "--classifier", "knn", "--seeds", "1",
                         "--report", str(tmp_path / "r2.csv")], capsys)
    assert code == 0
    assert "jobs = 1" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["extract", "--manifest", "m.csv", "--extractor", "spectrum", "--family", "db8", "--out", "f.csv"],
        ["extract", "--manifest", "m.csv", "--se", "cross", "--out", "f.csv"],
        ["evaluate", "--features", "f.csv", "--classifier", "knn", "--kernel", "linear", "--report", "r"],
        ["evaluate", "--features", "f.csv", "--classifier", "elm", "--kernel", "cubic", "--report", "r"],
        ["evaluate", "--features", "f.csv", "--classifier", "svm", "--jobs", "0", "--report", "r"],
        ["evaluate", "--features", "f.csv", "--classifier", "forest", "--report", "r"],
        ["compare", "--reports", "only-one.csv"],
        [],
    ],
)
def test_usage_errors_exit_with_code_two(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_runtime_errors_exit_with_code_one(tmp_path, capsys):
    code, _, err = _run(["extract", "--manifest", str(tmp_path / "nope.csv"),
                         "--out", str(tmp_path / "f.csv")], capsys)
    assert code == 1 and "error:" in err
    code, _, err = _run(["evaluate", "--features", str(tmp_path / "nope.csv"),
                         "--classifier", "knn", "--report", str(tmp_path / "r.csv")], capsys)
    assert code == 1 and "error:" in err
    code, _, err = _run(["compare", "--reports", str(tmp_path / "a.csv"), str(tmp_path / "b.csv")],
                        capsys)
    assert code == 1 and "error:" in err


def test_module_entry_point_prints_help():
    proc = subprocess.run([sys.executable, "-m", "mammocad", "--help"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "phantom" in proc.stdout and "evaluate" in proc.stdout


def test_default_kernels_are_applied_per_classifier(dataset, tmp_path, capsys):
    feats = str(dataset / "wz.csv")
    code, out, _ = _run(["evaluate", "--features", feats, "--classifier", "svm", "--seeds", "1",
                         "--report", str(tmp_path / "svm.csv")], capsys)
    assert code == 0
    assert "kernel = linear" in out
    code, out, _ = _run(["evaluate", "--features", feats, "--classifier", "elm", "--seeds", "1",
                         "--report", str(tmp_path / "elm.csv")], capsys)
    assert code == 0
    assert "kernel = sigmoid" in out

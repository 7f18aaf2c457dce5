"""End-to-end benchmark on a synthetic phantom corpus.

Generates a dataset of normal / benign-mass / malignant-mass phantoms, runs
both feature extractors over it, benchmarks one classifier configuration on
each feature matrix under the seeded cross-validation protocol, and prints
the aggregate accuracies, the pairwise t-test, and the accuracy-per-second
ranking. Reports are written next to the dataset for later comparison runs.

    python3 scripts/run_phantom_benchmark.py --out /tmp/phantom_bench
"""
import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, "src")

from mammocad.dataio import load_manifest
from mammocad.evaluation import ProtocolConfig, compare_reports, emit_report, run_protocol
from mammocad.features import extract_from_manifest
from mammocad.phantoms import PhantomConfig, generate_phantom_dataset


def parse_args():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, required=True, help="dataset and report directory")
    ap.add_argument("--per-class", type=int, default=60, help="phantoms per class")
    ap.add_argument("--size", type=int, default=128, help="phantom side length in pixels")
    ap.add_argument("--dataset-seed", type=int, default=1)
    ap.add_argument("--family", default="sym8", choices=("db8", "sym8", "bior3.7"))
    ap.add_argument("--classifier", default="svm", choices=("svm", "elm", "knn", "tree", "mlp"))
    ap.add_argument("--kernel", default=None, help="classifier kernel or trainer name")
    ap.add_argument("--seeds", type=int, default=5, help="protocol order seeds, run 1..N")
    ap.add_argument("--folds", type=int, default=10)
    ap.add_argument("--jobs", type=int, default=1)
    return ap.parse_args()


def main():
    args = parse_args()
    kernel = args.kernel
    if kernel is None:
        kernel = {"svm": "linear", "elm": "sigmoid", "mlp": "gd"}.get(args.classifier)

    t0 = time.perf_counter()
    cfg = PhantomConfig(
        normals=args.per_class, benign=args.per_class, malignant=args.per_class,
        size=args.size, seed=args.dataset_seed,
    )
    generate_phantom_dataset(args.out, cfg)
    entries = load_manifest(args.out / "manifest.csv")
    print(f"generated {len(entries)} phantoms in {time.perf_counter() - t0:.1f} s")

    matrices = {}
    for extractor, kwargs in (
        ("wavelet-zernike", {"family": args.family}),
        ("spectrum", {"se_shape": "square"}),
    ):
        t0 = time.perf_counter()
        matrices[extractor] = extract_from_manifest(entries, extractor, **kwargs)
        n, d = matrices[extractor].X.shape
        print(f"{extractor}: {n} x {d} features in {time.perf_counter() - t0:.1f} s")

    protocol = ProtocolConfig(
        classifier=args.classifier, kernel=kernel,
        seeds=args.seeds, folds=args.folds, jobs=args.jobs,
    )
    reports = []
    for extractor, matrix in matrices.items():
        t0 = time.perf_counter()
        report = run_protocol(matrix, protocol)
        agg = report.aggregates()[report.config_id]
        print(
            f"{report.config_id}: {agg['test_acc']['mean']:.2f} +- "
            f"{agg['test_acc']['std']:.2f} % over {agg['n_runs']} runs "
            f"({time.perf_counter() - t0:.1f} s)"
        )
        path = args.out / f"report_{extractor.split('[')[0]}.csv"
        emit_report(report, path, fmt="csv")
        print(f"  wrote {path}")
        reports.append(report)

    comparison = compare_reports(reports)
    for row in comparison["t_tests"]:
        verdict = "differ" if row["hypothesis"] else "indistinguishable"
        print(
            f"t-test {row['a']}  vs  {row['b']}: t={row['t_statistic']:.3f} "
            f"p={row['p_value']:.2e} -> {verdict}"
        )
    print("accuracy per training second, best first:")
    for row in comparison["ratios"]:
        print(
            f"  {row['ratio']:12.1f}  {row['config_id']} "
            f"({row['test_acc_mean']:.2f} % / {row['train_sec_mean'] * 1e3:.2f} ms)"
        )


if __name__ == "__main__":
    main()

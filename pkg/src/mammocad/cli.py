"""Command-line surface for the pipeline.

Subcommands: `phantom` (synthesize a labeled dataset), `extract` (manifest to
feature CSV), `evaluate` (seeded cross-validation protocol to a report file),
and `compare` (pairwise t-tests and accuracy/time ratios across reports).

Every subcommand prints its fully resolved configuration before doing any
work, so a run is reproducible from its log alone. Exit codes: 0 success,
1 runtime or data error, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from mammocad import dataio, features, phantoms
from mammocad.evaluation import (
    CLASSIFIER_KERNELS,
    CLASSIFIERS,
    ProtocolConfig,
    _hyperparameters,
    compare_reports,
    emit_report,
    load_report,
    run_protocol,
)
from mammocad.wavelets import FAMILIES

_DEFAULT_KERNELS = {"elm": "sigmoid", "svm": "linear", "mlp": "gd"}


def _default_jobs() -> int:
    raw = os.environ.get("MAMMOCAD_JOBS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _print_config(name: str, resolved: dict) -> None:
    print(f"[{name}] resolved configuration:")
    for key, value in resolved.items():
        print(f"  {key} = {value}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mammocad",
        description="mass-detection pipeline: phantom data, feature extraction, "
        "cross-validated benchmarks, and report comparison",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("phantom", help="generate a synthetic labeled image dataset")
    p.add_argument("--out", required=True, help="output directory (created if absent)")
    p.add_argument("--normals", type=int, default=10)
    p.add_argument("--benign", type=int, default=10)
    p.add_argument("--malignant", type=int, default=10)
    p.add_argument("--size", type=int, default=128, help="square image side in pixels")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("extract", help="extract features for every manifest entry")
    p.add_argument("--manifest", required=True, help="CSV of path,label rows")
    p.add_argument("--extractor", choices=("wavelet-zernike", "spectrum"), default="wavelet-zernike")
    p.add_argument("--family", choices=FAMILIES, default=None,
                   help="wavelet family (wavelet-zernike only; default sym8)")
    p.add_argument("--se", choices=("square", "cross"), default=None,
                   help="structuring element shape (spectrum only; default square)")
    p.add_argument("--out", required=True, help="output feature CSV")

    p = sub.add_parser("evaluate", help="run the seeded cross-validation protocol")
    p.add_argument("--features", required=True, help="feature CSV from `extract`")
    p.add_argument("--classifier", choices=CLASSIFIERS, required=True)
    p.add_argument("--kernel", default=None,
                   help="kernel (elm/svm) or trainer (mlp); invalid for knn/tree")
    p.add_argument("--seeds", type=int, default=30, help="data-order seeds, run 1..N")
    p.add_argument("--balance", action="store_true",
                   help="equalize class counts with synthetic convex combinations first")
    p.add_argument("--balance-seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=None,
                   help="parallel workers (default $MAMMOCAD_JOBS or 1)")
    p.add_argument("--report", required=True, help="output report path")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("compare", help="pairwise t-tests and accuracy/time ratios")
    p.add_argument("--reports", nargs="+", required=True, help="two or more report files")
    p.add_argument("--welch", action="store_true", help="unequal-variance t-test")
    p.add_argument("--out", default=None, help="write the comparison as JSON here too")

    return parser


def cmd_phantom(args) -> int:
    cfg = phantoms.PhantomConfig(
        normals=args.normals, benign=args.benign, malignant=args.malignant,
        size=args.size, seed=args.seed,
    )
    _print_config("phantom", {
        "out": args.out, "normals": cfg.normals, "benign": cfg.benign,
        "malignant": cfg.malignant, "size": cfg.size, "seed": cfg.seed,
    })
    entries = phantoms.generate_phantom_dataset(args.out, cfg)
    print(f"wrote {len(entries)} images and manifest.csv under {args.out}")
    return 0


def cmd_extract(args, parser: argparse.ArgumentParser) -> int:
    if args.extractor == "spectrum" and args.family is not None:
        parser.error("--family applies only to the wavelet-zernike extractor")
    if args.extractor == "wavelet-zernike" and args.se is not None:
        parser.error("--se applies only to the spectrum extractor")
    family = args.family or "sym8"
    se = args.se or "square"
    resolved = {"manifest": args.manifest, "extractor": args.extractor, "out": args.out}
    if args.extractor == "wavelet-zernike":
        resolved.update({"family": family, "levels": features.WAVELET_LEVELS,
                         "moments": len(features.enumerate_wavelet_zernike_features()) // 13})
    else:
        resolved.update({"se": se, "statistics": ",".join(features.SPECTRUM_STATISTIC_NAMES)})
    _print_config("extract", resolved)
    entries = dataio.load_manifest(args.manifest)

    def progress(path, seconds):
        print(f"  {path}: {seconds:.3f} s")

    data = features.extract_from_manifest(entries, args.extractor, family=family,
                                          se_shape=se, progress=progress)
    features.save_features(data, args.out)
    print(f"wrote {len(data)} x {data.n_features} features to {args.out}")
    return 0


def cmd_evaluate(args, parser: argparse.ArgumentParser) -> int:
    allowed = CLASSIFIER_KERNELS[args.classifier]
    if allowed is None:
        if args.kernel is not None:
            parser.error(f"--kernel is not accepted for {args.classifier}")
        kernel = None
    else:
        kernel = args.kernel or _DEFAULT_KERNELS[args.classifier]
        if kernel not in allowed:
            parser.error(f"kernel {kernel!r} invalid for {args.classifier}; "
                         f"choose from {', '.join(allowed)}")
    jobs = args.jobs if args.jobs is not None else _default_jobs()
    if jobs < 1:
        parser.error("--jobs must be at least 1")
    cfg = ProtocolConfig(classifier=args.classifier, kernel=kernel, seeds=args.seeds, jobs=jobs)

    data = features.load_features(args.features)
    resolved = {
        "features": args.features, "extractor": data.extractor_id,
        "samples": len(data), "dims": data.n_features,
        "classifier": cfg.classifier, "kernel": cfg.kernel,
        "seeds": f"1..{cfg.seeds}", "folds": None if cfg.classifier == "mlp" else cfg.folds,
        "balance": args.balance, "balance_seed": args.balance_seed if args.balance else None,
        "normalization": "min-max per feature, fitted on training rows only",
        "tie_breaks": "argmax/vote/nearest ties resolve to the lowest class index",
        "jobs": jobs, "report": args.report, "format": args.format,
    }
    resolved.update({f"hyper.{k}": v for k, v in _hyperparameters(cfg).items()})
    _print_config("evaluate", resolved)

    if args.balance:
        data = dataio.balance_dataset(data, seed=args.balance_seed)
        print(f"balanced to {len(data)} samples ({int(data.synthetic.sum())} synthetic)")
    report = run_protocol(data, cfg)
    emit_report(report, args.report, fmt=args.format)
    for config_id, agg in report.aggregates().items():
        acc = agg["test_acc"]
        print(f"{config_id}: {agg['n_runs']} runs ({agg['n_errors']} errors), "
              f"test accuracy {acc['mean']:.2f} +/- {acc['std']:.2f} %")
    print(f"wrote report to {args.report}")
    return 0


def cmd_compare(args, parser: argparse.ArgumentParser) -> int:
    if len(args.reports) < 2:
        parser.error("--reports needs at least two files")
    _print_config("compare", {"reports": ", ".join(args.reports), "welch": args.welch,
                              "out": args.out, "alpha": 0.05,
                              "ratio_exclusion": "configs below 55% mean test accuracy"})
    reports = [load_report(p) for p in args.reports]
    result = compare_reports(reports, welch=args.welch)
    print("pairwise t-tests on per-run test accuracies:")
    for row in result["t_tests"]:
        print(f"  {row['a']}  vs  {row['b']}: t={row['t_statistic']:.4f} "
              f"df={row['degrees_of_freedom']:.1f} p={row['p_value']:.4g} "
              f"hypothesis={row['hypothesis']}")
    print("accuracy/training-time ratios (best first):")
    for row in result["ratios"]:
        print(f"  {row['config_id']}: {row['test_acc_mean']:.2f} % / "
              f"{row['train_sec_mean']:.4f} s = {row['ratio']:.1f}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(result, fh, indent=1, sort_keys=True)
            fh.write("\n")
        print(f"wrote comparison to {args.out}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "phantom":
            return cmd_phantom(args)
        if args.command == "extract":
            return cmd_extract(args, parser)
        if args.command == "evaluate":
            return cmd_evaluate(args, parser)
        return cmd_compare(args, parser)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

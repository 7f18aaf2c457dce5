"""Seeded cross-validation benchmark harness.

Runs classifier configurations over repeated shuffled 10-fold splits (or
70/15/15 splits for the perceptron), normalizing features per fold on the
training rows only, and collects per-run accuracy, timing, and confusion
records into reports that can be emitted as CSV or JSON, compared with a
two-sample t-test, and ranked by accuracy-per-training-second.

Scaling the protocol: with S order seeds the harness produces S*10 runs per
SVM/k-NN/tree configuration, S*S*10 per ELM kernel (weight seeds nested in
order seeds), and 3*S*S per perceptron trainer (three architectures, no
folds). S=30 gives the reference counts 300 / 9000 / 2700.
"""
from __future__ import annotations

import csv
import json
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.special import betainc

from mammocad.classifiers.base import timed
from mammocad.classifiers.elm import ELM_KERNELS, ElmConfig, ExtremeLearningMachine
from mammocad.classifiers.mlp import (
    MLP_ARCHITECTURES,
    MLP_TRAINERS,
    MlpConfig,
    MultilayerPerceptron,
    make_split,
)
from mammocad.classifiers.neighbors import KnnConfig, NearestNeighbor
from mammocad.classifiers.svm import SVM_KERNELS, SvmConfig, SupportVectorMachine
from mammocad.classifiers.tree import CartTree, TreeConfig
from mammocad.dataio import FeatureMatrix
from mammocad.features import apply_normalization, fit_normalization

REPORT_VERSION = "1"

CLASSIFIERS = ("elm", "svm", "knn", "tree", "mlp")

# kernel/trainer vocabulary per classifier; None means the flag is not taken
CLASSIFIER_KERNELS = {
    "elm": ELM_KERNELS,
    "svm": SVM_KERNELS,
    "knn": None,
    "tree": None,
    "mlp": MLP_TRAINERS,
}

CSV_COLUMNS = (
    "config_id",
    "extractor",
    "family",
    "classifier",
    "kernel",
    "seed",
    "weight_seed",
    "fold",
    "train_acc",
    "test_acc",
    "train_sec",
    "test_sec",
    "error",
)


# ---------------------------------------------------------------------------
# fold plans


@dataclass(frozen=True)
class FoldPlan:
    """Assignment of every sample index to one fold of a shuffled k-fold split."""

    fold_assignments: np.ndarray
    permutation_seed: int
    k: int

    def fold_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.fold_assignments == fold)

    def fold_sizes(self) -> list[int]:
        return [int(np.sum(self.fold_assignments == f)) for f in range(self.k)]


def make_fold_plan(n: int, k: int, seed: int) -> FoldPlan:
    """Shuffle 0..n-1 by the seed and cut into k folds.

    The first k-1 folds hold floor(n/k) samples each; the remainder all goes
    to the last fold, so n=699, k=10 gives nine folds of 69 and one of 78.
    """
    if n < k:
        raise ValueError(f"cannot split {n} samples into {k} folds")
    if k < 1:
        raise ValueError("need at least one fold")
    perm = np.random.default_rng(seed).permutation(n)
    base = n // k
    assignments = np.empty(n, dtype=np.int64)
    for f in range(k):
        stop = (f + 1) * base if f < k - 1 else n
        assignments[perm[f * base : stop]] = f
    return FoldPlan(fold_assignments=assignments, permutation_seed=seed, k=k)


# ---------------------------------------------------------------------------
# run records and reports


@dataclass
class RunRecord:
    config_id: str
    extractor: str
    family: str
    classifier: str
    kernel: str
    seed: int
    weight_seed: int | None
    fold: int | None
    train_acc: float | None
    test_acc: float | None
    train_sec: float | None
    test_sec: float | None
    confusion: np.ndarray | None = None
    error: str | None = None


@dataclass
class RunReport:
    config_id: str
    classes: tuple
    records: list[RunRecord] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def aggregates(self) -> dict:
        return compute_aggregates(self.records)


def confusion_matrix(y_true, y_pred, classes) -> np.ndarray:
    """Counts with rows = actual class, columns = predicted class."""
    classes = np.asarray(classes)
    c = len(classes)
    counts = np.zeros((c, c), dtype=np.float64)
    ti = np.searchsorted(classes, np.asarray(y_true))
    pi = np.searchsorted(classes, np.asarray(y_pred))
    np.add.at(counts, (ti, pi), 1.0)
    return counts


def _accuracy(y_true, y_pred) -> float:
    return float(np.mean(np.asarray(y_true) == np.asarray(y_pred)) * 100.0)


def compute_aggregates(records: list[RunRecord]) -> dict:
    """Mean/std blocks per config_id, recomputable from the per-run records.

    Stds are sample standard deviations (ddof=1), 0 for a single run. Error
    records are counted but excluded from the statistics.
    """
    by_config: dict[str, list[RunRecord]] = {}
    for rec in records:
        by_config.setdefault(rec.config_id, []).append(rec)
    out = {}
    for config_id in sorted(by_config):
        group = by_config[config_id]
        ok = [r for r in group if r.error is None]
        entry = {"n_runs": len(group), "n_errors": len(group) - len(ok)}
        for metric in ("train_acc", "test_acc", "train_sec", "test_sec"):
            vals = np.array([getattr(r, metric) for r in ok], dtype=np.float64)
            if vals.size:
                mean = float(np.mean(vals))
                std = float(np.std(vals, ddof=1)) if vals.size > 1 else 0.0
            else:
                mean = std = float("nan")
            entry[metric] = {"mean": mean, "std": std}
        confusions = [r.confusion for r in ok if r.confusion is not None]
        if confusions:
            stack = np.stack(confusions)
            entry["confusion_mean"] = np.mean(stack, axis=0).tolist()
            entry["confusion_std"] = (
                np.std(stack, axis=0, ddof=1).tolist() if stack.shape[0] > 1 else np.zeros_like(stack[0]).tolist()
            )
        out[config_id] = entry
    return out


# ---------------------------------------------------------------------------
# protocol configuration


@dataclass(frozen=True)
class ProtocolConfig:
    """One benchmark configuration: a classifier plus its protocol knobs.

    `kernel` selects the ELM/SVM kernel or the perceptron trainer; it must be
    None for k-NN and the decision tree. Order seeds run 1..seeds inclusive.
    """

    classifier: str
    kernel: str | None = None
    seeds: int = 30
    folds: int = 10
    hidden_neurons: int = 100
    C: float = 1.0
    degree: int = 3
    coef0: float = 0.0
    gamma: float | None = None
    architectures: tuple[tuple[int, ...], ...] = MLP_ARCHITECTURES
    learning_rate: float = 0.01
    momentum: float = 0.9
    max_epochs: int = 100
    patience: int = 5
    jobs: int = 1

    def __post_init__(self):
        if self.classifier not in CLASSIFIERS:
            raise ValueError(f"unknown classifier {self.classifier!r}, expected one of {CLASSIFIERS}")
        allowed = CLASSIFIER_KERNELS[self.classifier]
        if allowed is None:
            if self.kernel is not None:
                raise ValueError(f"{self.classifier} takes no kernel")
        elif self.kernel not in allowed:
            raise ValueError(f"kernel {self.kernel!r} invalid for {self.classifier}, expected one of {allowed}")
        if self.seeds < 1:
            raise ValueError("need at least one seed")


def config_id_for(extractor_id: str, cfg: ProtocolConfig, architecture: tuple[int, ...] | None = None) -> str:
    parts = [extractor_id if extractor_id else "raw", cfg.classifier]
    if cfg.kernel is not None:
        parts[-1] = f"{cfg.classifier}-{cfg.kernel}"
    if architecture is not None:
        parts.append("arch=" + "x".join(str(h) for h in architecture))
    return "|".join(parts)


def family_of(extractor_id: str) -> str:
    m = re.search(r"family=([^,\]]+)", extractor_id or "")
    return m.group(1) if m else ""


def _make_model(cfg: ProtocolConfig, weight_seed: int | None, architecture=None):
    if cfg.classifier == "elm":
        return ExtremeLearningMachine(
            ElmConfig(kernel=cfg.kernel, hidden_neurons=cfg.hidden_neurons, weight_seed=weight_seed)
        )
    if cfg.classifier == "svm":
        return SupportVectorMachine(
            SvmConfig(kernel=cfg.kernel, C=cfg.C, degree=cfg.degree, coef0=cfg.coef0, gamma=cfg.gamma)
        )
    if cfg.classifier == "knn":
        return NearestNeighbor(KnnConfig())
    if cfg.classifier == "tree":
        return CartTree(TreeConfig())
    return MultilayerPerceptron(
        MlpConfig(
            hidden=architecture,
            trainer=cfg.kernel,
            learning_rate=cfg.learning_rate,
            momentum=cfg.momentum,
            max_epochs=cfg.max_epochs,
            patience=cfg.patience,
            weight_seed=weight_seed,
        )
    )


# ---------------------------------------------------------------------------
# cross-validation


def _record_skeleton(matrix: FeatureMatrix, cfg: ProtocolConfig, config_id: str) -> dict:
    return {
        "config_id": config_id,
        "extractor": matrix.extractor_id,
        "family": family_of(matrix.extractor_id),
        "classifier": cfg.classifier,
        "kernel": cfg.kernel or "",
    }


def _missing_class(y_train, classes) -> str | None:
    present = set(np.unique(y_train).tolist())
    missing = [c for c in classes if c not in present]
    if missing:
        return f"degenerate fold: training partition missing class {missing[0]}"
    return None


def run_cv(
    matrix: FeatureMatrix,
    cfg: ProtocolConfig,
    plan: FoldPlan,
    weight_seed: int | None = None,
) -> list[RunRecord]:
    """One pass of k-fold cross-validation for a single model configuration.

    Per fold the min-max normalization is fitted on the training rows only,
    the model is trained and timed, and train/test accuracy plus the
    test-partition confusion counts are recorded. A training partition
    missing a class yields an error record instead of a crash.
    """
    classes = tuple(np.unique(matrix.y).tolist())
    config_id = config_id_for(matrix.extractor_id, cfg)
    base = _record_skeleton(matrix, cfg, config_id)
    records = []
    for fold in range(plan.k):
        test_idx = plan.fold_indices(fold)
        train_idx = np.flatnonzero(plan.fold_assignments != fold)
        rec = RunRecord(**base, seed=plan.permutation_seed, weight_seed=weight_seed, fold=fold,
                        train_acc=None, test_acc=None, train_sec=None, test_sec=None)
        problem = _missing_class(matrix.y[train_idx], classes)
        if problem:
            rec.error = problem
            records.append(rec)
            continue
        norm = fit_normalization(matrix.X[train_idx])
        Xtr = apply_normalization(matrix.X[train_idx], norm)
        Xte = apply_normalization(matrix.X[test_idx], norm)
        ytr, yte = matrix.y[train_idx], matrix.y[test_idx]
        model = _make_model(cfg, weight_seed)
        _, rec.train_sec = timed(model.fit, Xtr, ytr)
        pred_te, rec.test_sec = timed(model.predict, Xte)
        pred_tr = model.predict(Xtr)
        rec.train_acc = _accuracy(ytr, pred_tr)
        rec.test_acc = _accuracy(yte, pred_te)
        rec.confusion = confusion_matrix(yte, pred_te, classes)
        records.append(rec)
    return records


def _run_mlp_split(matrix: FeatureMatrix, cfg: ProtocolConfig, architecture, order_seed, weight_seed) -> RunRecord:
    classes = tuple(np.unique(matrix.y).tolist())
    config_id = config_id_for(matrix.extractor_id, cfg, architecture)
    base = _record_skeleton(matrix, cfg, config_id)
    rec = RunRecord(**base, seed=order_seed, weight_seed=weight_seed, fold=None,
                    train_acc=None, test_acc=None, train_sec=None, test_sec=None)
    tr, va, te = make_split(len(matrix.y), order_seed)
    problem = _missing_class(matrix.y[tr], classes)
    if problem:
        rec.error = problem
        return rec
    norm = fit_normalization(matrix.X[tr])
    Xtr, Xva, Xte = (apply_normalization(matrix.X[idx], norm) for idx in (tr, va, te))
    model = _make_model(cfg, weight_seed, architecture)
    _, rec.train_sec = timed(model.fit, Xtr, matrix.y[tr], (Xva, matrix.y[va]))
    pred_te, rec.test_sec = timed(model.predict, Xte)
    rec.train_acc = _accuracy(matrix.y[tr], model.predict(Xtr))
    rec.test_acc = _accuracy(matrix.y[te], pred_te)
    rec.confusion = confusion_matrix(matrix.y[te], pred_te, classes)
    return rec


# ---------------------------------------------------------------------------
# the full protocol


def _protocol_tasks(cfg: ProtocolConfig) -> list[tuple]:
    """Independent work units in deterministic order. Order seeds run 1..S."""
    seeds = range(1, cfg.seeds + 1)
    if cfg.classifier == "mlp":
        return [("mlp", arch, s, ws) for arch in cfg.architectures for s in seeds for ws in seeds]
    if cfg.classifier == "elm":
        return [("cv", None, s, ws) for s in seeds for ws in seeds]
    return [("cv", None, s, None) for s in seeds]


def _run_task(matrix: FeatureMatrix, cfg: ProtocolConfig, task) -> list[RunRecord]:
    kind, arch, order_seed, weight_seed = task
    if kind == "mlp":
        return [_run_mlp_split(matrix, cfg, arch, order_seed, weight_seed)]
    plan = make_fold_plan(len(matrix.y), cfg.folds, order_seed)
    return run_cv(matrix, cfg, plan, weight_seed)


# worker processes receive the (matrix, cfg) pair once at startup instead of
# once per task; tasks themselves are tiny tuples
_WORKER_STATE: tuple[FeatureMatrix, ProtocolConfig] | None = None


def _worker_init(matrix: FeatureMatrix, cfg: ProtocolConfig) -> None:
    global _WORKER_STATE
    _WORKER_STATE = (matrix, cfg)


def _worker_run(task) -> list[RunRecord]:
    matrix, cfg = _WORKER_STATE
    return _run_task(matrix, cfg, task)


def run_protocol(matrix: FeatureMatrix, cfg: ProtocolConfig) -> RunReport:
    """Run every (seed, weight seed, fold/architecture) combination for cfg.

    Work units are independent; with cfg.jobs > 1 they execute in a process
    pool, and records are assembled in task order so accuracy and confusion
    output is identical regardless of scheduling.
    """
    tasks = _protocol_tasks(cfg)
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs, initializer=_worker_init,
                                 initargs=(matrix, cfg)) as pool:
            chunks = list(pool.map(_worker_run, tasks, chunksize=1))
    else:
        chunks = [_run_task(matrix, cfg, t) for t in tasks]
    records = [rec for chunk in chunks for rec in chunk]
    classes = tuple(np.unique(matrix.y).tolist())
    metadata = {
        "seeds": cfg.seeds,
        "folds": None if cfg.classifier == "mlp" else cfg.folds,
        "classifier": cfg.classifier,
        "kernel": cfg.kernel,
        "extractor": matrix.extractor_id,
        "hyperparameters": _hyperparameters(cfg),
        "notes": "synthetic balanced samples, when present, participate in all partitions",
    }
    return RunReport(config_id=config_id_for(matrix.extractor_id, cfg), classes=classes,
                     records=records, metadata=metadata)


def _hyperparameters(cfg: ProtocolConfig) -> dict:
    if cfg.classifier == "elm":
        return {"hidden_neurons": cfg.hidden_neurons}
    if cfg.classifier == "svm":
        return {"C": cfg.C, "degree": cfg.degree, "coef0": cfg.coef0,
                "gamma": "1/n_features" if cfg.gamma is None else cfg.gamma, "tol": 1e-3}
    if cfg.classifier == "knn":
        return {"neighbors": 1, "leaf_size": 50}
    if cfg.classifier == "tree":
        return {"impurity": "gini", "min_leaf": 1, "max_splits": "n-1"}
    return {
        "architectures": ["x".join(str(h) for h in a) for a in cfg.architectures],
        "learning_rate": cfg.learning_rate,
        "momentum": cfg.momentum,
        "max_epochs": cfg.max_epochs,
        "patience": cfg.patience,
        "split": [0.70, 0.15, 0.15],
    }


# ---------------------------------------------------------------------------
# statistics


@dataclass(frozen=True)
class TTestResult:
    hypothesis: int
    p_value: float
    t_statistic: float
    degrees_of_freedom: float


def t_test(a, b, welch: bool = False, alpha: float = 0.05) -> TTestResult:
    """Two-sample two-tailed t-test; pooled variance unless welch=True.

    Degenerate inputs where both samples are constant give p=1 for equal
    values and p=0 otherwise.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    na, nb = a.size, b.size
    if na < 2 or nb < 2:
        raise ValueError("each sample needs at least two values")
    va = float(np.var(a, ddof=1))
    vb = float(np.var(b, ddof=1))
    ma, mb = float(np.mean(a)), float(np.mean(b))
    if va == 0.0 and vb == 0.0:
        if ma == mb:
            return TTestResult(0, 1.0, 0.0, float(na + nb - 2))
        t = np.inf if ma > mb else -np.inf
        return TTestResult(1, 0.0, float(t), float(na + nb - 2))
    if welch:
        se2a, se2b = va / na, vb / nb
        t = (ma - mb) / np.sqrt(se2a + se2b)
        df = (se2a + se2b) ** 2 / (se2a**2 / (na - 1) + se2b**2 / (nb - 1))
    else:
        df = na + nb - 2
        pooled = ((na - 1) * va + (nb - 1) * vb) / df
        t = (ma - mb) / np.sqrt(pooled * (1.0 / na + 1.0 / nb))
    # two-tailed survival of Student's t via the regularized incomplete beta
    p = float(betainc(df / 2.0, 0.5, df / (df + t * t)))
    return TTestResult(int(p < alpha), p, float(t), float(df))


def accuracy_ratio_table(reports: list[RunReport], min_accuracy: float = 55.0) -> list[dict]:
    """Mean test accuracy (%) per mean train second, best first.

    Configurations with mean test accuracy below min_accuracy are dropped as
    near-chance; a surviving configuration with zero mean train time is an
    error.
    """
    rows = []
    for report in reports:
        for config_id, agg in report.aggregates().items():
            acc = agg["test_acc"]["mean"]
            sec = agg["train_sec"]["mean"]
            if not np.isfinite(acc) or acc < min_accuracy:
                continue
            if sec <= 0.0:
                raise ValueError(f"{config_id}: zero mean training time")
            rows.append({"config_id": config_id, "test_acc_mean": acc,
                         "train_sec_mean": sec, "ratio": acc / sec})
    rows.sort(key=lambda r: -r["ratio"])
    return rows


def compare_reports(reports: list[RunReport], welch: bool = False) -> dict:
    """Pairwise t-tests on per-run test accuracies plus the ratio table."""
    if len(reports) < 2:
        raise ValueError("need at least two reports to compare")
    class_sets = {r.classes for r in reports}
    if len(class_sets) != 1:
        raise ValueError(f"reports have mismatched class sets: {sorted(class_sets)}")
    samples = []
    for report in reports:
        accs = [r.test_acc for r in report.records if r.error is None]
        samples.append((report.config_id, np.array(accs, dtype=np.float64)))
    tests = []
    for i in range(len(samples)):
        for j in range(i + 1, len(samples)):
            (id_a, acc_a), (id_b, acc_b) = samples[i], samples[j]
            res = t_test(acc_a, acc_b, welch=welch)
            tests.append({"a": id_a, "b": id_b, "t_statistic": res.t_statistic,
                          "degrees_of_freedom": res.degrees_of_freedom,
                          "p_value": res.p_value, "hypothesis": res.hypothesis})
    return {"t_tests": tests, "ratios": accuracy_ratio_table(reports)}


# ---------------------------------------------------------------------------
# serialization


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _record_to_dict(rec: RunRecord) -> dict:
    d = {
        "config_id": rec.config_id,
        "extractor": rec.extractor,
        "family": rec.family,
        "classifier": rec.classifier,
        "kernel": rec.kernel,
        "seed": rec.seed,
        "weight_seed": rec.weight_seed,
        "fold": rec.fold,
        "train_acc": rec.train_acc,
        "test_acc": rec.test_acc,
        "train_sec": rec.train_sec,
        "test_sec": rec.test_sec,
        "confusion": None if rec.confusion is None else rec.confusion.tolist(),
        "error": rec.error,
    }
    return d


def report_to_dict(report: RunReport) -> dict:
    return {
        "version": REPORT_VERSION,
        "config_id": report.config_id,
        "classes": list(report.classes),
        "metadata": report.metadata,
        "records": [_record_to_dict(r) for r in report.records],
        "aggregates": report.aggregates(),
    }


def report_core(report: RunReport) -> dict:
    """The deterministic slice of a report: everything except wall-clock times.

    Two protocol executions with identical seeds must serialize this to
    identical bytes via json.dumps(..., sort_keys=True).
    """
    full = report_to_dict(report)
    for rec in full["records"]:
        rec.pop("train_sec")
        rec.pop("test_sec")
    for agg in full["aggregates"].values():
        agg.pop("train_sec")
        agg.pop("test_sec")
    return full


def emit_report(report: RunReport, path, fmt: str = "csv") -> None:
    path = str(path)
    if fmt == "json":
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(report_to_dict(report), fh, indent=1, sort_keys=True)
            fh.write("\n")
        return
    if fmt != "csv":
        raise ValueError(f"unknown report format {fmt!r}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"# report version={REPORT_VERSION};config={report.config_id};"
                 f"classes={','.join(map(str, report.classes))}\n")
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for rec in report.records:
            d = _record_to_dict(rec)
            writer.writerow([_fmt(d[col]) for col in CSV_COLUMNS])
        # tab-separated because config ids may contain commas
        for config_id, agg in report.aggregates().items():
            for metric in ("train_acc", "test_acc", "train_sec", "test_sec"):
                fh.write(f"# aggregate\t{config_id}\t{metric}\tn={agg['n_runs']}\t"
                         f"errors={agg['n_errors']}\tmean={_fmt(agg[metric]['mean'])}\t"
                         f"std={_fmt(agg[metric]['std'])}\n")


def _parse_opt(text: str, caster):
    return None if text == "" else caster(text)


def load_report(path) -> RunReport:
    """Read back a report emitted in either format (sniffed from content)."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        data = json.loads(text)
        if "version" not in data:
            raise ValueError("report JSON missing version field")
        records = []
        for d in data["records"]:
            conf = d.get("confusion")
            records.append(RunRecord(
                config_id=d["config_id"], extractor=d["extractor"], family=d["family"],
                classifier=d["classifier"], kernel=d["kernel"], seed=d["seed"],
                weight_seed=d["weight_seed"], fold=d["fold"], train_acc=d["train_acc"],
                test_acc=d["test_acc"], train_sec=d["train_sec"], test_sec=d["test_sec"],
                confusion=None if conf is None else np.asarray(conf, dtype=np.float64),
                error=d.get("error")))
        return RunReport(config_id=data["config_id"], classes=tuple(data["classes"]),
                         records=records, metadata=data.get("metadata", {}))
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# report version="):
        raise ValueError(f"{path} is not a recognized report file")
    header = lines[0]
    config_id = re.search(r"config=([^;]*)", header).group(1)
    classes_text = header.split("classes=", 1)[1]
    classes = tuple(int(c) if c.lstrip("-").isdigit() else c for c in classes_text.split(",") if c != "")
    body = [ln for ln in lines[1:] if ln and not ln.startswith("#")]
    records = []
    for row in csv.DictReader(body, fieldnames=CSV_COLUMNS):
        if row["config_id"] == "config_id":
            continue
        records.append(RunRecord(
            config_id=row["config_id"], extractor=row["extractor"], family=row["family"],
            classifier=row["classifier"], kernel=row["kernel"],
            seed=int(row["seed"]), weight_seed=_parse_opt(row["weight_seed"], int),
            fold=_parse_opt(row["fold"], int),
            train_acc=_parse_opt(row["train_acc"], float), test_acc=_parse_opt(row["test_acc"], float),
            train_sec=_parse_opt(row["train_sec"], float), test_sec=_parse_opt(row["test_sec"], float),
            confusion=None, error=row["error"] or None))
    return RunReport(config_id=config_id, classes=classes, records=records, metadata={})


def embedded_aggregates(path) -> dict:
    """Parse the aggregate block a CSV report carries, for round-trip checks."""
    out: dict[str, dict] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.startswith("# aggregate\t"):
                continue
            _, config_id, metric, n, errors, mean, std = line.rstrip("\n").split("\t")
            entry = out.setdefault(config_id, {"n_runs": int(n.split("=")[1]),
                                               "n_errors": int(errors.split("=")[1])})
            entry[metric] = {"mean": float(mean.split("=")[1]), "std": float(std.split("=")[1])}
    return out


__all__ = [
    "CLASSIFIERS",
    "CLASSIFIER_KERNELS",
    "FoldPlan",
    "ProtocolConfig",
    "RunRecord",
    "RunReport",
    "TTestResult",
    "accuracy_ratio_table",
    "compare_reports",
    "compute_aggregates",
    "confusion_matrix",
    "config_id_for",
    "emit_report",
    "embedded_aggregates",
    "family_of",
    "load_report",
    "make_fold_plan",
    "report_core",
    "report_to_dict",
    "run_cv",
    "run_protocol",
    "t_test",
]

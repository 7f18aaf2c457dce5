"""Feature extraction pipelines, per-feature normalization, and persistence.

Two extractors share the FeatureMatrix container: the wavelet/Zernike
pipeline (histogram normalization, 4-level decomposition, 32 moment
magnitudes per component, 13 * 32 = 416 values) and the morphological
pattern-spectrum summary (7 values). Feature order is frozen: components in
decomposition order (per level hl, lh, hh, then the final ll), moments in
the canonical (n, m) order within each component.
"""
from __future__ import annotations

import csv
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from mammocad import morphology, wavelets, zernike
from mammocad.dataio import CLASS_NAMES, FeatureMatrix, label_index, load_image, normalize_histogram

WAVELET_LEVELS = 4
WAVELET_ZERNIKE_DIM = (3 * WAVELET_LEVELS + 1) * len(zernike.MOMENT_INDICES)
SPECTRUM_DIM = 7

SPECTRUM_STATISTIC_NAMES = ("mean", "std", "mode", "median", "kurtosis", "min", "max")


def wavelet_zernike_id(family: str, levels: int = WAVELET_LEVELS) -> str:
    return f"wavelet-zernike[family={family},levels={levels}]"


def spectrum_id(se_shape: str) -> str:
    return f"spectrum[se={se_shape}]"


def enumerate_wavelet_zernike_features(levels: int = WAVELET_LEVELS) -> list[tuple[str, int, int]]:
    """The frozen (component, n, m) tuple for every feature position."""
    names = []
    for lev in range(1, levels + 1):
        names.extend([f"L{lev}.hl", f"L{lev}.lh", f"L{lev}.hh"])
    names.append(f"L{levels}.ll")
    return [(comp, n, m) for comp in names for (n, m) in zernike.MOMENT_INDICES]


def extract_wavelet_zernike(img: np.ndarray, family: str = "sym8", levels: int = WAVELET_LEVELS) -> np.ndarray:
    """Histogram-normalize, decompose, and describe every component by its
    Zernike moment magnitudes. Returns a vector of 32 * (3 * levels + 1) values."""
    img = normalize_histogram(img)
    bank = wavelets.filter_bank(family)
    decomp = wavelets.decompose(img, bank, levels=levels, mode="symmetric")
    parts = [zernike.moments(comp) for _, comp in decomp.components()]
    return np.concatenate(parts)


_SE_FACTORIES = {"square": morphology.square, "cross": morphology.cross}


def extract_spectrum(img: np.ndarray, se_shape: str = "square", max_k: int = 64) -> np.ndarray:
    """Pattern-spectrum summary statistics under a flat 3x3 element."""
    if se_shape not in _SE_FACTORIES:
        raise ValueError(f"unknown structuring element shape {se_shape!r}, expected square or cross")
    img = normalize_histogram(img)
    se = _SE_FACTORIES[se_shape]()
    spectrum = morphology.pattern_spectrum(img, se, max_k=max_k)
    return morphology.spectrum_features(spectrum)


def extract_from_manifest(
    entries: list[tuple[Path, int]],
    extractor: str,
    family: str = "sym8",
    se_shape: str = "square",
    progress=None,
) -> FeatureMatrix:
    """Run an extractor over manifest entries; rows keep manifest order.

    `progress(path, seconds)`, when given, is called after each image."""
    rows, labels = [], []
    for path, label in entries:
        start = time.perf_counter()
        img = load_image(path)
        if extractor == "wavelet-zernike":
            rows.append(extract_wavelet_zernike(img, family=family))
        elif extractor == "spectrum":
            rows.append(extract_spectrum(img, se_shape=se_shape))
        else:
            raise ValueError(f"unknown extractor {extractor!r}")
        labels.append(label)
        if progress is not None:
            progress(path, time.perf_counter() - start)
    ident = wavelet_zernike_id(family) if extractor == "wavelet-zernike" else spectrum_id(se_shape)
    return FeatureMatrix(X=np.vstack(rows), y=np.asarray(labels), extractor_id=ident)


@dataclass(frozen=True)
class Normalization:
    """Per-feature affine map fitted on training rows only."""

    lo: np.ndarray
    hi: np.ndarray


def fit_normalization(X: np.ndarray) -> Normalization:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError("normalization needs a non-empty 2D matrix")
    return Normalization(lo=X.min(axis=0), hi=X.max(axis=0))


def apply_normalization(X: np.ndarray, norm: Normalization) -> np.ndarray:
    """Map features onto [0, 1] by the fitted ranges, clamping out-of-range
    values; features constant at fit time map to 0."""
    X = np.asarray(X, dtype=np.float64)
    span = norm.hi - norm.lo
    safe = np.where(span > 0.0, span, 1.0)
    out = (X - norm.lo) / safe
    out[:, span == 0.0] = 0.0
    return np.clip(out, 0.0, 1.0)


def save_features(data: FeatureMatrix, path: str | Path) -> None:
    """Write a feature CSV: a `# extractor=<id>;dims=<d>` header line, a column
    header, then one row per sample. Floats print at 17 significant digits so
    the round trip is value-exact."""
    path = Path(path)
    d = data.n_features
    with open(path, "w", newline="") as fh:
        fh.write(f"# extractor={data.extractor_id};dims={d}\n")
        writer = csv.writer(fh)
        writer.writerow(["label", "synthetic"] + [f"v{i}" for i in range(d)])
        for i in range(len(data)):
            writer.writerow(
                [CLASS_NAMES[data.y[i]], int(data.synthetic[i])]
                + [repr(float(v)) for v in data.X[i]]
            )


def load_features(path: str | Path) -> FeatureMatrix:
    path = Path(path)
    with open(path, newline="") as fh:
        header = fh.readline().strip()
        if not header.startswith("# extractor="):
            raise ValueError(f"{path}: missing '# extractor=...;dims=...' header")
        meta = dict(part.split("=", 1) for part in header[2:].split(";"))
        try:
            extractor_id = meta["extractor"]
            dims = int(meta["dims"])
        except (KeyError, ValueError):
            raise ValueError(f"{path}: malformed feature header {header!r}") from None
        reader = csv.reader(fh)
        columns = next(reader, None)
        if columns is None or columns[:2] != ["label", "synthetic"]:
            raise ValueError(f"{path}: missing 'label,synthetic,v0,...' column header")
        if len(columns) != dims + 2:
            raise ValueError(f"{path}: column count {len(columns) - 2} does not match dims={dims}")
        rows, labels, synth = [], [], []
        for lineno, row in enumerate(reader, start=3):
            if not row:
                continue
            if len(row) != dims + 2:
                raise ValueError(f"{path}:{lineno}: expected {dims + 2} fields, got {len(row)}")
            labels.append(label_index(row[0]))
            synth.append(bool(int(row[1])))
            rows.append([float(v) for v in row[2:]])
    if not rows:
        raise ValueError(f"{path}: feature file contains no samples")
    return FeatureMatrix(
        X=np.asarray(rows), y=np.asarray(labels), synthetic=np.asarray(synth), extractor_id=extractor_id
    )

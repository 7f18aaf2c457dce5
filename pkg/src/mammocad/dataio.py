"""Image and dataset I/O.

Images are 2D float64 arrays with intensities in [0, 1]. Class labels are the
strings "normal", "benign", "malignant"; everywhere else in the package they
travel as the integer index into CLASS_NAMES.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

CLASS_NAMES = ("normal", "benign", "malignant")


def label_index(name: str) -> int:
    try:
        return CLASS_NAMES.index(name)
    except ValueError:
        raise ValueError(f"unknown class label {name!r}, expected one of {CLASS_NAMES}") from None


def as_gray_image(arr: np.ndarray) -> np.ndarray:
    """Validate and coerce an array to the canonical grayscale image form."""
    a = np.asarray(arr, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"grayscale image must be 2D and non-empty, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise ValueError("grayscale image contains non-finite values")
    if a.min() < 0.0 or a.max() > 1.0:
        raise ValueError("grayscale image intensities must lie in [0, 1]")
    return a


def _read_pgm(data: bytes, path: Path) -> np.ndarray:
    # P5 header: magic, width, height, maxval, separated by whitespace and
    # optional '#' comment lines, then a single whitespace byte before raster.
    if not data.startswith(b"P5"):
        raise ValueError(f"{path}: not a binary PGM (P5) file")
    pos = 2
    fields: list[int] = []
    while len(fields) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ValueError(f"{path}: truncated PGM header")
        fields.append(int(data[start:pos]))
    pos += 1  # single whitespace between maxval and raster
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise ValueError(f"{path}: empty image {width}x{height}")
    if not 0 < maxval < 65536:
        raise ValueError(f"{path}: bad PGM maxval {maxval}")
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype(np.uint8)
    count = width * height
    if len(data) - pos < count * dtype.itemsize:
        raise ValueError(f"{path}: truncated PGM raster")
    raster = np.frombuffer(data, dtype=dtype, count=count, offset=pos)
    img = raster.astype(np.float64).reshape(height, width) / maxval
    return img


def _read_png(path: Path) -> np.ndarray:
    with Image.open(path) as im:
        if im.mode == "L":
            arr, maxval = np.asarray(im, dtype=np.float64), 255.0
        elif im.mode in ("I", "I;16"):
            arr, maxval = np.asarray(im, dtype=np.float64), 65535.0
        elif im.mode == "1":
            arr, maxval = np.asarray(im, dtype=np.float64), 1.0
        else:
            raise ValueError(f"{path}: unsupported PNG mode {im.mode!r}, need grayscale")
    return arr / maxval


def load_image(path: str | Path) -> np.ndarray:
    """Read an 8/16-bit PGM or grayscale PNG, scaled to [0, 1] by its maxval."""
    path = Path(path)
    data = path.read_bytes()
    if data.startswith(b"P5"):
        img = _read_pgm(data, path)
    elif data.startswith(b"\x89PNG"):
        img = _read_png(path)
    else:
        raise ValueError(f"{path}: unsupported image format (need PGM P5 or PNG)")
    return as_gray_image(img)


def save_pgm(img: np.ndarray, path: str | Path) -> None:
    """Write an 8-bit binary PGM. Round-trips exactly through load_image."""
    img = as_gray_image(img)
    h, w = img.shape
    raster = np.rint(img * 255.0).astype(np.uint8)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(raster.tobytes())


def normalize_histogram(img: np.ndarray) -> np.ndarray:
    """Linear intensity stretch onto [0, 1]; a constant image maps to zeros."""
    img = as_gray_image(img)
    lo, hi = img.min(), img.max()
    if hi - lo == 0.0:
        return np.zeros_like(img)
    return (img - lo) / (hi - lo)


def load_manifest(path: str | Path) -> list[tuple[Path, int]]:
    """Read a `path,label` manifest CSV; image paths resolve against its directory."""
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [c.strip() for c in header] != ["path", "label"]:
            raise ValueError(f"{path}: manifest must start with 'path,label' header")
        entries = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'path,label', got {row!r}")
            rel, label = row[0].strip(), row[1].strip()
            entries.append((path.parent / rel, label_index(label)))
    if not entries:
        raise ValueError(f"{path}: manifest lists no images")
    return entries


def save_manifest(entries: list[tuple[str | Path, int]], path: str | Path) -> None:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["path", "label"])
        for rel, label in entries:
            writer.writerow([str(rel), CLASS_NAMES[label]])


@dataclass
class FeatureMatrix:
    """A labeled feature dataset: one row per sample.

    Parameters
    ----------
    X : (n, d) float64 array of feature vectors.
    y : (n,) integer class indices into CLASS_NAMES.
    synthetic : (n,) bool mask, True for rows created by balancing.
    extractor_id : string identifying the extractor and its parameters.
    """

    X: np.ndarray
    y: np.ndarray
    synthetic: np.ndarray = field(default=None)  # type: ignore[assignment]
    extractor_id: str = ""

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=np.float64)
        self.y = np.asarray(self.y, dtype=np.int64)
        if self.synthetic is None:
            self.synthetic = np.zeros(len(self.y), dtype=bool)
        self.synthetic = np.asarray(self.synthetic, dtype=bool)
        if self.X.ndim != 2:
            raise ValueError("X must be a 2D matrix")
        if len(self.y) != self.X.shape[0] or len(self.synthetic) != self.X.shape[0]:
            raise ValueError("X, y and synthetic row counts disagree")

    def __len__(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]


def class_counts(y: np.ndarray) -> dict[int, int]:
    vals, counts = np.unique(np.asarray(y), return_counts=True)
    return dict(zip(vals.tolist(), counts.tolist()))


def balance_dataset(data: FeatureMatrix, seed: int) -> FeatureMatrix:
    """Equalize class sizes by synthesizing convex combinations of real samples.

    Every synthetic sample of a class is a convex combination of all real
    samples of that class: a fresh weight vector is drawn uniform on [0, 1]
    and normalized to sum to one. Real rows are kept untouched and synthetic
    rows are appended per class in label order, so output order is
    reproducible for a given seed.
    """
    if len(data) == 0:
        raise ValueError("cannot balance an empty dataset")
    rng = np.random.default_rng(seed)
    counts = class_counts(data.y)
    target = max(counts.values())
    blocks_X = [data.X]
    blocks_y = [data.y]
    blocks_s = [data.synthetic]
    for label in sorted(counts):
        deficit = target - counts[label]
        if deficit == 0:
            continue
        real = data.X[(data.y == label) & ~data.synthetic]
        if real.shape[0] == 0:
            raise ValueError(f"class {CLASS_NAMES[label]!r} has no real samples to combine")
        w = rng.uniform(0.0, 1.0, size=(deficit, real.shape[0]))
        w /= w.sum(axis=1, keepdims=True)
        blocks_X.append(w @ real)
        blocks_y.append(np.full(deficit, label, dtype=np.int64))
        blocks_s.append(np.ones(deficit, dtype=bool))
    return FeatureMatrix(
        X=np.vstack(blocks_X),
        y=np.concatenate(blocks_y),
        synthetic=np.concatenate(blocks_s),
        extractor_id=data.extractor_id,
    )

"""Shared classifier plumbing: timing, label encoding, one-hot targets."""
from __future__ import annotations

import time

import numpy as np


def timed(fn, *args, **kwargs):
    """Call fn and return (result, wall seconds) from a monotonic clock."""
    t0 = time.perf_counter()
    result = fn(*args, **kwargs)
    return result, time.perf_counter() - t0


def encode_labels(y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Map arbitrary integer labels onto 0..c-1; classes come back sorted."""
    y = np.asarray(y)
    classes = np.unique(y)
    index = {c: i for i, c in enumerate(classes.tolist())}
    encoded = np.array([index[v] for v in y.tolist()], dtype=np.int64)
    return classes, encoded


def one_hot(encoded: np.ndarray, n_classes: int) -> np.ndarray:
    T = np.zeros((len(encoded), n_classes))
    T[np.arange(len(encoded)), encoded] = 1.0
    return T


def check_xy(X: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError("training matrix must be 2D and non-empty")
    if len(y) != X.shape[0]:
        raise ValueError("feature rows and labels disagree in length")
    return X, y

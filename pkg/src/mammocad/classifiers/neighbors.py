"""Exact nearest-neighbor classification over a space-partitioning tree.

The tree splits on the widest-spread dimension at the median, keeping at
most leaf_size points per leaf. Search is branch-and-bound and exact: a
branch is pruned only when its bounding box is strictly farther than the
best candidate, and equal distances resolve toward the lowest training
index, so results match a brute-force linear scan bit for bit.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from mammocad.classifiers.base import check_xy


@dataclass(frozen=True)
class KnnConfig:
    leaf_size: int = 50

    def __post_init__(self):
        if self.leaf_size < 1:
            raise ValueError("leaf_size must be >= 1")


class _Node:
    __slots__ = ("indices", "dim", "threshold", "left", "right", "box_lo", "box_hi")

    def __init__(self, indices, box_lo, box_hi):
        self.indices = indices
        self.dim = -1
        self.threshold = 0.0
        self.left = None
        self.right = None
        self.box_lo = box_lo
        self.box_hi = box_hi


class NearestNeighbor:
    """1-nearest-neighbor classifier (Euclidean metric)."""

    def __init__(self, cfg: KnnConfig = KnnConfig()):
        self.cfg = cfg

    def fit(self, X: np.ndarray, y: np.ndarray) -> "NearestNeighbor":
        X, y = check_xy(X, y)
        self._X = X
        self._y = np.asarray(y, dtype=np.int64)
        self.n_features_ = X.shape[1]
        self._root = self._build(np.arange(len(X), dtype=np.int64))
        return self

    def _build(self, indices: np.ndarray) -> _Node:
        pts = self._X[indices]
        node = _Node(indices, pts.min(axis=0), pts.max(axis=0))
        if len(indices) <= self.cfg.leaf_size:
            return node
        spread = node.box_hi - node.box_lo
        dim = int(np.argmax(spread))
        if spread[dim] == 0.0:
            return node  # all points identical, no useful split
        threshold = float(np.median(pts[:, dim]))
        left_mask = pts[:, dim] <= threshold
        if left_mask.all() or not left_mask.any():
            # degenerate median (heavy duplication): fall back to a midpoint cut
            threshold = float((node.box_lo[dim] + node.box_hi[dim]) / 2.0)
            left_mask = pts[:, dim] <= threshold
            if left_mask.all() or not left_mask.any():
                return node
        node.dim = dim
        node.threshold = threshold
        node.left = self._build(indices[left_mask])
        node.right = self._build(indices[~left_mask])
        return node

    def _search(self, q: np.ndarray, node: _Node, best: tuple[float, int]) -> tuple[float, int]:
        lo_gap = np.maximum(node.box_lo - q, 0.0)
        hi_gap = np.maximum(q - node.box_hi, 0.0)
        box_d2 = float((lo_gap * lo_gap + hi_gap * hi_gap).sum())
        if box_d2 > best[0]:
            return best
        if node.left is None:
            diffs = self._X[node.indices] - q
            d2 = (diffs * diffs).sum(axis=1)
            for dist, idx in zip(d2.tolist(), node.indices.tolist()):
                if dist < best[0] or (dist == best[0] and idx < best[1]):
                    best = (dist, idx)
            return best
        near, far = (node.left, node.right) if q[node.dim] <= node.threshold else (node.right, node.left)
        best = self._search(q, near, best)
        return self._search(q, far, best)

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features_:
            raise ValueError(f"expected feature dimension {self.n_features_}, got shape {X.shape}")
        out = np.empty(X.shape[0], dtype=np.int64)
        for r in range(X.shape[0]):
            _, idx = self._search(X[r], self._root, (np.inf, -1))
            out[r] = self._y[idx]
        return out

"""Binary classification tree grown by Gini impurity reduction.

Candidate splits are axis-aligned thresholds at midpoints between distinct
consecutive sorted feature values. The tree grows breadth first (layer by
layer) until nodes are pure, no split improves impurity, or the configured
split budget (at most n - 1 for n training samples) is exhausted. Leaves
predict their majority class, ties toward the lowest class index.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from mammocad.classifiers.base import check_xy, encode_labels


@dataclass(frozen=True)
class TreeConfig:
    max_splits: int | None = None  # None means n - 1
    min_leaf: int = 1

    def __post_init__(self):
        if self.min_leaf < 1:
            raise ValueError("min_leaf must be >= 1")
        if self.max_splits is not None and self.max_splits < 0:
            raise ValueError("max_splits must be >= 0")


class _TreeNode:
    __slots__ = ("feature", "threshold", "left", "right", "label")

    def __init__(self):
        self.feature = -1
        self.threshold = 0.0
        self.left = None
        self.right = None
        self.label = -1


def _gini(counts: np.ndarray) -> float:
    total = counts.sum()
    if total == 0:
        return 0.0
    p = counts / total
    return float(1.0 - (p * p).sum())


def _class_counts(encoded: np.ndarray, n_classes: int) -> np.ndarray:
    return np.bincount(encoded, minlength=n_classes).astype(np.float64)


def _best_split(X: np.ndarray, encoded: np.ndarray, idx: np.ndarray, n_classes: int, min_leaf: int):
    """Scan all features for the impurity-minimizing threshold on this node.

    Returns (gain, feature, threshold) with gain <= 0 when no admissible
    split helps. Ties resolve toward the lowest feature index and lowest
    threshold because the scan goes in ascending order and only strict
    improvements replace the incumbent.
    """
    sub_X = X[idx]
    sub_y = encoded[idx]
    n = len(idx)
    parent = _gini(_class_counts(sub_y, n_classes))
    best = (0.0, -1, 0.0)
    for feat in range(X.shape[1]):
        v = sub_X[:, feat]
        order = np.argsort(v, kind="stable")
        vs = v[order]
        ys = sub_y[order]
        cuts = np.nonzero(vs[1:] > vs[:-1])[0]  # split between positions c and c+1
        if cuts.size == 0:
            continue
        onehot = np.zeros((n, n_classes))
        onehot[np.arange(n), ys] = 1.0
        cum = onehot.cumsum(axis=0)
        total = cum[-1]
        left_n = (cuts + 1).astype(np.float64)
        right_n = n - left_n
        ok = (left_n >= min_leaf) & (right_n >= min_leaf)
        if not ok.any():
            continue
        left_counts = cum[cuts]
        right_counts = total[None, :] - left_counts
        gl = 1.0 - ((left_counts / left_n[:, None]) ** 2).sum(axis=1)
        gr = 1.0 - ((right_counts / right_n[:, None]) ** 2).sum(axis=1)
        weighted = (left_n * gl + right_n * gr) / n
        weighted[~ok] = np.inf
        pos = int(np.argmin(weighted))
        gain = parent - float(weighted[pos])
        if gain > best[0] + 1e-15:
            c = cuts[pos]
            best = (gain, feat, float((vs[c] + vs[c + 1]) / 2.0))
    return best


class CartTree:
    def __init__(self, cfg: TreeConfig = TreeConfig()):
        self.cfg = cfg

    def fit(self, X: np.ndarray, y: np.ndarray) -> "CartTree":
        X, y = check_xy(X, y)
        self.classes_, encoded = encode_labels(y)
        self.n_features_ = X.shape[1]
        n_classes = len(self.classes_)
        budget = self.cfg.max_splits if self.cfg.max_splits is not None else len(y) - 1
        self._root = _TreeNode()
        queue = deque([(self._root, np.arange(len(y), dtype=np.int64))])
        splits_made = 0
        self.n_splits_ = 0
        while queue:
            node, idx = queue.popleft()
            counts = _class_counts(encoded[idx], n_classes)
            node.label = int(np.argmax(counts))  # argmax takes the lowest index on ties
            if counts.max() == counts.sum() or splits_made >= budget:
                continue
            gain, feat, threshold = _best_split(X, encoded, idx, n_classes, self.cfg.min_leaf)
            if feat < 0:
                continue
            node.feature = feat
            node.threshold = threshold
            node.left = _TreeNode()
            node.right = _TreeNode()
            splits_made += 1
            mask = X[idx, feat] <= threshold
            queue.append((node.left, idx[mask]))
            queue.append((node.right, idx[~mask]))
        self.n_splits_ = splits_made
        return self

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features_:
            raise ValueError(f"expected feature dimension {self.n_features_}, got shape {X.shape}")
        out = np.empty(X.shape[0], dtype=np.int64)
        for r in range(X.shape[0]):
            node = self._root
            while node.feature >= 0:
                node = node.left if X[r, node.feature] <= node.threshold else node.right
            out[r] = node.label
        return self.classes_[out]

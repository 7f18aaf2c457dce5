"""Soft-margin SVM trained by sequential minimal optimization.

Binary machines solve the C-SVC dual by repeatedly picking the maximal
violating pair and updating it analytically until the KKT gap falls below
tolerance. Multiclass prediction trains one machine per class pair and takes
a majority vote, breaking vote ties toward the lowest class index.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from mammocad.classifiers.base import check_xy

SVM_KERNELS = ("linear", "polynomial", "rbf", "sigmoid")


@dataclass(frozen=True)
class SvmConfig:
    kernel: str = "linear"
    C: float = 1.0
    degree: int = 3
    coef0: float = 0.0
    gamma: float | None = None  # None means 1 / n_features
    tol: float = 1e-3
    max_iter: int = 1_000_000

    def __post_init__(self):
        if self.kernel not in SVM_KERNELS:
            raise ValueError(f"unknown SVM kernel {self.kernel!r}, expected one of {SVM_KERNELS}")
        if self.C <= 0.0:
            raise ValueError("C must be positive")


def _kernel_matrix(cfg: SvmConfig, gamma: float, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if cfg.kernel == "linear":
        return A @ B.T
    if cfg.kernel == "polynomial":
        return (gamma * (A @ B.T) + cfg.coef0) ** cfg.degree
    if cfg.kernel == "rbf":
        sq = (A * A).sum(1)[:, None] + (B * B).sum(1)[None, :] - 2.0 * (A @ B.T)
        return np.exp(-gamma * np.maximum(sq, 0.0))
    return np.tanh(gamma * (A @ B.T) + cfg.coef0)


class _BinarySvm:
    """One C-SVC machine for labels in {-1, +1}."""

    def __init__(self, cfg: SvmConfig, gamma: float, track_objective: bool = False):
        self.cfg = cfg
        self.gamma = gamma
        self.track_objective = track_objective
        self.objective_history: list[float] = []

    def fit(self, X: np.ndarray, y: np.ndarray) -> "_BinarySvm":
        cfg = self.cfg
        n = len(y)
        K = _kernel_matrix(cfg, self.gamma, X, X)
        alpha = np.zeros(n)
        F = np.zeros(n)  # F_i = sum_j alpha_j y_j K_ij
        C = cfg.C
        for _ in range(cfg.max_iter):
            # KKT violating pair: largest -yE over the up set, smallest over the down set
            neg_yE = y - F
            up = ((y > 0) & (alpha < C)) | ((y < 0) & (alpha > 0))
            low = ((y > 0) & (alpha > 0)) | ((y < 0) & (alpha < C))
            up_vals = np.where(up, neg_yE, -np.inf)
            low_vals = np.where(low, neg_yE, np.inf)
            i = int(np.argmax(up_vals))
            j = int(np.argmin(low_vals))
            gap = up_vals[i] - low_vals[j]
            if gap < cfg.tol:
                break
            Ei, Ej = F[i] - y[i], F[j] - y[j]
            eta = K[i, i] + K[j, j] - 2.0 * K[i, j]
            if eta <= 0.0:
                eta = 1e-12
            ai_old, aj_old = alpha[i], alpha[j]
            if y[i] != y[j]:
                L = max(0.0, aj_old - ai_old)
                H = min(C, C + aj_old - ai_old)
            else:
                L = max(0.0, ai_old + aj_old - C)
                H = min(C, ai_old + aj_old)
            aj_new = np.clip(aj_old + y[j] * (Ei - Ej) / eta, L, H)
            ai_new = ai_old + y[i] * y[j] * (aj_old - aj_new)
            # snap to the box: cancellation can leave an epsilon above 0 (or
            # below C) that keeps the index in the working set while the pair
            # box collapses to a zero-length step, stalling the solver
            snap = 1e-12 * C
            ai_new = 0.0 if ai_new < snap else (C if ai_new > C - snap else ai_new)
            aj_new = 0.0 if aj_new < snap else (C if aj_new > C - snap else aj_new)
            alpha[i], alpha[j] = ai_new, aj_new
            F += (ai_new - ai_old) * y[i] * K[:, i] + (aj_new - aj_old) * y[j] * K[:, j]
            if self.track_objective:
                self.objective_history.append(float(alpha.sum() - 0.5 * (alpha * y) @ F))
        else:
            raise RuntimeError("SMO did not reach the KKT tolerance within max_iter updates")
        # offset from the midpoint of the remaining violating interval; exact
        # for free support vectors, the best available bound otherwise
        neg_yE = y - F
        up_vals = np.where(((y > 0) & (alpha < C)) | ((y < 0) & (alpha > 0)), neg_yE, -np.inf)
        low_vals = np.where(((y > 0) & (alpha > 0)) | ((y < 0) & (alpha < C)), neg_yE, np.inf)
        self.b = float((up_vals.max() + low_vals.min()) / 2.0)
        sv = alpha > 1e-12
        self.support_ = np.nonzero(sv)[0]
        self.dual_coef_ = alpha[sv] * y[sv]
        self.support_vectors_ = X[sv]
        self.alpha_ = alpha
        self._train_F = F
        return self

    def decision(self, X: np.ndarray) -> np.ndarray:
        K = _kernel_matrix(self.cfg, self.gamma, X, self.support_vectors_)
        return K @ self.dual_coef_ + self.b


class SupportVectorMachine:
    """One-vs-one multiclass wrapper around binary SMO machines."""

    def __init__(self, cfg: SvmConfig, track_objective: bool = False):
        self.cfg = cfg
        self.track_objective = track_objective

    def fit(self, X: np.ndarray, y: np.ndarray) -> "SupportVectorMachine":
        X, y = check_xy(X, y)
        self.classes_ = np.unique(y)
        if len(self.classes_) < 2:
            raise ValueError("SVM training needs at least two classes")
        self.n_features_ = X.shape[1]
        gamma = self.cfg.gamma if self.cfg.gamma is not None else 1.0 / X.shape[1]
        self.machines_: list[tuple[int, int, _BinarySvm]] = []
        for a, b in combinations(range(len(self.classes_)), 2):
            mask = (y == self.classes_[a]) | (y == self.classes_[b])
            yy = np.where(y[mask] == self.classes_[a], 1.0, -1.0)
            m = _BinarySvm(self.cfg, gamma, self.track_objective).fit(X[mask], yy)
            self.machines_.append((a, b, m))
        return self

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features_:
            raise ValueError(f"expected feature dimension {self.n_features_}, got shape {X.shape}")
        votes = np.zeros((X.shape[0], len(self.classes_)), dtype=np.int64)
        for a, b, m in self.machines_:
            dec = m.decision(X)
            votes[:, a] += dec > 0.0
            votes[:, b] += dec <= 0.0
        return self.classes_[np.argmax(votes, axis=1)]

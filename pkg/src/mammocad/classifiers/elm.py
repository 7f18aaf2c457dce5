"""Extreme learning machine: one random hidden layer solved by pseudoinverse.

Hidden weights and biases are drawn uniform on [-1, 1] from the configured
seed and never trained; the output weights are the minimum-norm least-squares
solution beta = pinv(H) @ T against one-hot targets, with the pseudoinverse
computed by singular value decomposition (singular values below 1e-12 of the
largest are treated as zero).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from mammocad.classifiers.base import check_xy, encode_labels, one_hot

ELM_KERNELS = (
    "linear",
    "sigmoid",
    "sine",
    "hardlim",
    "tribas",
    "polynomial",
    "rbf",
    "wavelet",
)

_PINV_RCOND = 1e-12


def _activation(kernel: str, z: np.ndarray) -> np.ndarray:
    if kernel == "linear":
        return z
    if kernel == "sigmoid":
        return expit(z)
    if kernel == "sine":
        return np.sin(z)
    if kernel == "hardlim":
        return (z >= 0.0).astype(np.float64)
    if kernel == "tribas":
        return np.maximum(0.0, 1.0 - np.abs(z))
    if kernel == "polynomial":
        return (z + 1.0) ** 2
    if kernel == "wavelet":
        # Morlet mother wavelet
        return np.cos(1.75 * z) * np.exp(-0.5 * z * z)
    raise ValueError(f"unknown ELM kernel {kernel!r}, expected one of {ELM_KERNELS}")


@dataclass(frozen=True)
class ElmConfig:
    kernel: str = "sigmoid"
    hidden_neurons: int = 100
    weight_seed: int = 0

    def __post_init__(self):
        if self.kernel not in ELM_KERNELS:
            raise ValueError(f"unknown ELM kernel {self.kernel!r}, expected one of {ELM_KERNELS}")
        if self.hidden_neurons < 1:
            raise ValueError("hidden_neurons must be >= 1")


class ExtremeLearningMachine:
    def __init__(self, cfg: ElmConfig):
        self.cfg = cfg

    def _hidden(self, X: np.ndarray) -> np.ndarray:
        if self.cfg.kernel == "rbf":
            # H[i, j] = exp(-||x_i - a_j||^2 * b_j), centers uniform on [-1, 1],
            # widths uniform on [0, 1), all from the configured seed
            sq = ((X[:, None, :] - self._centers[None, :, :]) ** 2).sum(axis=2)
            return np.exp(-sq * self._widths)
        return _activation(self.cfg.kernel, X @ self._W + self._b)

    def fit(self, X: np.ndarray, y: np.ndarray) -> "ExtremeLearningMachine":
        X, y = check_xy(X, y)
        self.classes_, encoded = encode_labels(y)
        rng = np.random.default_rng(self.cfg.weight_seed)
        d, nh = X.shape[1], self.cfg.hidden_neurons
        self.n_features_ = d
        if self.cfg.kernel == "rbf":
            self._centers = rng.uniform(-1.0, 1.0, size=(nh, d))
            self._widths = rng.uniform(0.0, 1.0, size=nh)
        else:
            self._W = rng.uniform(-1.0, 1.0, size=(d, nh))
            self._b = rng.uniform(-1.0, 1.0, size=nh)
        H = self._hidden(X)
        T = one_hot(encoded, len(self.classes_))
        self.beta_ = np.linalg.pinv(H, rcond=_PINV_RCOND) @ T
        return self

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features_:
            raise ValueError(f"expected feature dimension {self.n_features_}, got shape {X.shape}")
        scores = self._hidden(X) @ self.beta_
        return self.classes_[np.argmax(scores, axis=1)]

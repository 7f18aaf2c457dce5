"""Multilayer perceptron with batch trainers and validation-based early stopping.

Hidden layers are sigmoid, the output layer is linear, and the loss is the
mean squared error against one-hot targets. Training always runs full-batch
updates; the six trainers differ only in how the step is derived from the
gradient. A held-out validation partition stops training after five epochs
without improvement, and the weights from the best validation epoch are
kept.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from mammocad.classifiers.base import check_xy, encode_labels, one_hot

MLP_TRAINERS = (
    "batch",
    "gd",
    "gd_momentum",
    "gd_adaptive",
    "gd_momentum_adaptive",
    "rprop",
)

# the three network shapes the benchmark protocol sweeps over
MLP_ARCHITECTURES = ((100,), (500,), (100, 100))

# step-size adaptation constants for the adaptive-rate trainers
_LR_UP = 1.05
_LR_DOWN = 0.7
_ERR_GROWTH_LIMIT = 1.04
# Rprop schedule
_RPROP_DELTA0 = 0.07
_RPROP_DELTA_MAX = 50.0
_RPROP_DELTA_MIN = 1e-9
_RPROP_UP = 1.2
_RPROP_DOWN = 0.5


@dataclass(frozen=True)
class MlpConfig:
    hidden: tuple[int, ...] = (100,)
    trainer: str = "gd"
    learning_rate: float = 0.01
    momentum: float = 0.9
    max_epochs: int = 100
    patience: int = 5
    weight_seed: int = 0
    shuffle_seed: int = 0
    splits: tuple[float, float, float] = (0.70, 0.15, 0.15)

    def __post_init__(self):
        if self.trainer not in MLP_TRAINERS:
            raise ValueError(f"unknown trainer {self.trainer!r}, expected one of {MLP_TRAINERS}")
        if not self.hidden or min(self.hidden) < 1:
            raise ValueError("hidden layer sizes must be positive")
        if abs(sum(self.splits) - 1.0) > 1e-9:
            raise ValueError("split fractions must sum to 1")


def make_split(n: int, seed: int, splits=(0.70, 0.15, 0.15)):
    """Shuffle 0..n-1 and partition into train/validation/test index arrays.

    The validation and test shares round to the nearest sample and the
    training partition takes the rest; every partition must be non-empty.
    """
    n_val = int(n * splits[1] + 0.5)
    n_test = int(n * splits[2] + 0.5)
    n_train = n - n_val - n_test
    if min(n_train, n_val, n_test) < 1:
        raise ValueError(f"cannot split {n} samples into non-empty {splits} partitions")
    perm = np.random.default_rng(seed).permutation(n)
    return perm[:n_train], perm[n_train : n_train + n_val], perm[n_train + n_val :]


def _init_params(rng: np.random.Generator, sizes: list[int]):
    params = []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        W = rng.uniform(-1.0, 1.0, size=(fan_in, fan_out)) / np.sqrt(fan_in)
        b = np.zeros(fan_out)
        params.append([W, b])
    return params


def _forward(params, X):
    """Return the list of layer activations, input first, linear output last."""
    acts = [X]
    a = X
    for li, (W, b) in enumerate(params):
        z = a @ W + b
        a = z if li == len(params) - 1 else expit(z)
        acts.append(a)
    return acts


def _loss(params, X, T) -> float:
    out = _forward(params, X)[-1]
    return float(np.mean((out - T) ** 2))


def _loss_and_grads(params, X, T):
    acts = _forward(params, X)
    out = acts[-1]
    loss = float(np.mean((out - T) ** 2))
    grads = []
    delta = 2.0 * (out - T) / out.size  # linear output layer
    for li in range(len(params) - 1, -1, -1):
        a_prev = acts[li]
        gW = a_prev.T @ delta
        gb = delta.sum(axis=0)
        grads.append([gW, gb])
        if li > 0:
            a = acts[li]  # sigmoid activation of the previous layer
            delta = (delta @ params[li][0].T) * a * (1.0 - a)
    grads.reverse()
    return loss, grads


def _clone(params):
    return [[W.copy(), b.copy()] for W, b in params]


class _EarlyStopper:
    """Track the best validation error; report when patience is exhausted."""

    def __init__(self, patience: int):
        self.patience = patience
        self.best = np.inf
        self.fails = 0
        self.improved = False

    def update(self, val_err: float) -> bool:
        self.improved = val_err < self.best
        if self.improved:
            self.best = val_err
            self.fails = 0
        else:
            self.fails += 1
        return self.fails >= self.patience


class MultilayerPerceptron:
    def __init__(self, cfg: MlpConfig = MlpConfig()):
        self.cfg = cfg

    def fit(self, X, y, validation: tuple[np.ndarray, np.ndarray] | None = None):
        """Train on (X, y). Without an explicit validation set the data is
        split 70/15/15 by cfg.shuffle_seed and only the first partition is
        trained on; the third is held out entirely (see split_indices_)."""
        X, y = check_xy(X, y)
        self.classes_, encoded = encode_labels(y)
        n_classes = len(self.classes_)
        if validation is None:
            tr, va, te = make_split(len(y), self.cfg.shuffle_seed, self.cfg.splits)
            self.split_indices_ = (tr, va, te)
            Xtr, Ttr = X[tr], one_hot(encoded[tr], n_classes)
            Xva, Tva = X[va], one_hot(encoded[va], n_classes)
        else:
            self.split_indices_ = None
            Xtr, Ttr = X, one_hot(encoded, n_classes)
            Xv, yv = validation
            Xv = np.asarray(Xv, dtype=np.float64)
            enc_v = np.searchsorted(self.classes_, np.asarray(yv))
            Xva, Tva = Xv, one_hot(enc_v, n_classes)
        self.n_features_ = X.shape[1]

        cfg = self.cfg
        rng = np.random.default_rng(cfg.weight_seed)
        sizes = [X.shape[1], *cfg.hidden, n_classes]
        params = _init_params(rng, sizes)

        lr = cfg.learning_rate
        velocity = [[np.zeros_like(W), np.zeros_like(b)] for W, b in params]
        deltas = [[np.full_like(W, _RPROP_DELTA0), np.full_like(b, _RPROP_DELTA0)] for W, b in params]
        prev_grads = [[np.zeros_like(W), np.zeros_like(b)] for W, b in params]
        train_err = _loss(params, Xtr, Ttr)

        stopper = _EarlyStopper(cfg.patience)
        best_params = _clone(params)
        history = {"train": [], "val": []}

        for _ in range(cfg.max_epochs):
            _, grads = _loss_and_grads(params, Xtr, Ttr)
            if cfg.trainer in ("batch", "gd"):
                # plain delta rule: every layer steps against its error gradient
                for p, g in zip(params, grads):
                    p[0] -= lr * g[0]
                    p[1] -= lr * g[1]
                train_err = _loss(params, Xtr, Ttr)
            elif cfg.trainer == "gd_momentum":
                for p, g, v in zip(params, grads, velocity):
                    v[0] = cfg.momentum * v[0] - lr * g[0]
                    v[1] = cfg.momentum * v[1] - lr * g[1]
                    p[0] += v[0]
                    p[1] += v[1]
                train_err = _loss(params, Xtr, Ttr)
            elif cfg.trainer in ("gd_adaptive", "gd_momentum_adaptive"):
                candidate = _clone(params)
                if cfg.trainer == "gd_adaptive":
                    for p, g in zip(candidate, grads):
                        p[0] -= lr * g[0]
                        p[1] -= lr * g[1]
                else:
                    for p, g, v in zip(candidate, grads, velocity):
                        v[0] = cfg.momentum * v[0] - lr * g[0]
                        v[1] = cfg.momentum * v[1] - lr * g[1]
                        p[0] += v[0]
                        p[1] += v[1]
                new_err = _loss(candidate, Xtr, Ttr)
                if new_err > train_err * _ERR_GROWTH_LIMIT:
                    # reject the step, cool the rate down, kill momentum
                    lr *= _LR_DOWN
                    velocity = [[np.zeros_like(W), np.zeros_like(b)] for W, b in params]
                else:
                    params = candidate
                    if new_err < train_err:
                        lr *= _LR_UP
                    train_err = new_err
            elif cfg.trainer == "rprop":
                for p, g, d, pg in zip(params, grads, deltas, prev_grads):
                    for k in range(2):
                        sign_change = pg[k] * g[k]
                        d[k] = np.where(
                            sign_change > 0.0,
                            np.minimum(d[k] * _RPROP_UP, _RPROP_DELTA_MAX),
                            np.where(
                                sign_change < 0.0,
                                np.maximum(d[k] * _RPROP_DOWN, _RPROP_DELTA_MIN),
                                d[k],
                            ),
                        )
                        p[k] -= np.sign(g[k]) * d[k]
                        pg[k] = g[k].copy()
                train_err = _loss(params, Xtr, Ttr)

            val_err = _loss(params, Xva, Tva)
            history["train"].append(train_err)
            history["val"].append(val_err)
            stop = stopper.update(val_err)
            if stopper.improved:
                best_params = _clone(params)
            if stop:
                break

        self.params_ = best_params
        self.history_ = history
        return self

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features_:
            raise ValueError(f"expected feature dimension {self.n_features_}, got shape {X.shape}")
        out = _forward(self.params_, X)[-1]
        return self.classes_[np.argmax(out, axis=1)]

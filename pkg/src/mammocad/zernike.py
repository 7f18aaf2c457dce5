"""Zernike moment descriptors on the unit disk.

The moment order set spans radial orders 3 through 10 with all repetitions m
of matching parity (m = 0 included for even orders), 32 moments in total.
Magnitudes are reported, which makes the descriptor invariant to rotations
about the disk center.
"""
from __future__ import annotations

from functools import lru_cache
from math import factorial, pi

import numpy as np

# (order n, repetition m) pairs in canonical order: n ascending, m ascending
MOMENT_INDICES: tuple[tuple[int, int], ...] = tuple(
    (n, m) for n in range(3, 11) for m in range(n % 2, n + 1, 2)
)
assert len(MOMENT_INDICES) == 32

_MAX_N = 10
_FACT = np.array([factorial(i) for i in range(_MAX_N + 1)], dtype=np.float64)


def radial_polynomial(n: int, m: int, p: np.ndarray | float) -> np.ndarray | float:
    """R_{n,m}(p) as the alternating factorial sum over s = 0 .. (n-|m|)/2."""
    m = abs(m)
    if n < 0 or m > n or (n - m) % 2 != 0:
        raise ValueError(f"invalid radial index pair (n={n}, m={m})")
    if n > _MAX_N:
        raise ValueError(f"radial order {n} exceeds the supported maximum {_MAX_N}")
    p = np.asarray(p, dtype=np.float64)
    out = np.zeros_like(p)
    for s in range((n - m) // 2 + 1):
        c = (-1.0) ** s * _FACT[n - s] / (
            _FACT[s] * _FACT[(n + m) // 2 - s] * _FACT[(n - m) // 2 - s]
        )
        out += c * p ** (n - 2 * s)
    return out


def basis(n: int, m: int, p, theta) -> np.ndarray:
    """V_{n,m} = R_{n,|m|}(p) exp(j m theta)."""
    return radial_polynomial(n, m, p) * np.exp(1j * m * np.asarray(theta, dtype=np.float64))


@lru_cache(maxsize=32)
def _disk_basis(shape: tuple[int, int], indices: tuple[tuple[int, int], ...]):
    """Sampled conjugate basis over the inscribed unit disk, premultiplied by
    the (n+1)/pi normalization and the pixel area element."""
    h, w = shape
    scale = 2.0 / min(w, h)
    ys = (np.arange(h) - (h - 1) / 2.0) * scale
    xs = (np.arange(w) - (w - 1) / 2.0) * scale
    xx, yy = np.meshgrid(xs, -ys)  # +y points up
    p = np.hypot(xx, yy)
    mask = p <= 1.0
    theta = np.arctan2(yy[mask], xx[mask])
    pm = p[mask]
    area = scale * scale
    cols = np.empty((mask.sum(), len(indices)), dtype=np.complex128)
    for j, (n, m) in enumerate(indices):
        cols[:, j] = (n + 1) / pi * np.conj(basis(n, m, pm, theta)) * area
    return mask, cols


def complex_moments(img: np.ndarray, indices=MOMENT_INDICES) -> np.ndarray:
    """Complex Zernike moments of an arbitrary real-valued component."""
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2 or min(img.shape) < 2:
        raise ValueError("moments need a non-degenerate 2D array")
    mask, cols = _disk_basis(img.shape, tuple(indices))
    return img[mask] @ cols


def moments(img: np.ndarray, indices=MOMENT_INDICES) -> np.ndarray:
    """Rotation-invariant moment magnitudes in the canonical index order."""
    return np.abs(complex_moments(img, indices))

"""Grayscale morphology on [0, 1] images and morphological pattern spectra.

Erosion and dilation follow the fuzzy min/max algebra

    erode(f, g)(u)  = min_v max(f(v), 1 - g(u - v))
    dilate(f, g)(u) = max_v min(f(v), g(u - v))

where the structuring element g takes values in [0, 1] and v ranges over the
translated support of g. For a flat structuring element these reduce to the
local minimum and maximum filters, and the pair is exactly dual:
dilate(f, g) == 1 - erode(1 - f, g). Reads that fall outside the image use
the identity element of the outer reduction (1 for erosion, 0 for dilation),
which is equivalent to ignoring out-of-bounds contributions.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class StructuringElement:
    """Odd-sized grid of membership values in [0, 1], origin at the center."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", v)
        if v.ndim != 2 or v.shape[0] % 2 == 0 or v.shape[1] % 2 == 0:
            raise ValueError("structuring element must be 2D with odd side lengths")
        if v.min() < 0.0 or v.max() > 1.0:
            raise ValueError("structuring element values must lie in [0, 1]")
        if not (v > 0.0).any():
            raise ValueError("structuring element has empty support")

    @property
    def radius(self) -> tuple[int, int]:
        return self.values.shape[0] // 2, self.values.shape[1] // 2


def square(size: int = 3) -> StructuringElement:
    return StructuringElement(np.ones((size, size)))


def cross(size: int = 3) -> StructuringElement:
    v = np.zeros((size, size))
    v[size // 2, :] = 1.0
    v[:, size // 2] = 1.0
    return StructuringElement(v)


def disc(radius: int) -> StructuringElement:
    n = 2 * radius + 1
    yy, xx = np.mgrid[0:n, 0:n] - radius
    return StructuringElement((yy * yy + xx * xx <= radius * radius).astype(np.float64))


def _support(se: StructuringElement):
    ry, rx = se.radius
    ys, xs = np.nonzero(se.values)
    return ys - ry, xs - rx, se.values[ys, xs]


def erode(f: np.ndarray, se: StructuringElement) -> np.ndarray:
    f = np.asarray(f, dtype=np.float64)
    ry, rx = se.radius
    padded = np.pad(f, ((ry, ry), (rx, rx)), constant_values=1.0)
    h, w = f.shape
    out = np.full(f.shape, np.inf)
    for dy, dx, g in zip(*_support(se)):
        win = padded[ry + dy : ry + dy + h, rx + dx : rx + dx + w]
        term = np.maximum(win, 1.0 - g) if g < 1.0 else win
        np.minimum(out, term, out=out)
    return out


def dilate(f: np.ndarray, se: StructuringElement) -> np.ndarray:
    f = np.asarray(f, dtype=np.float64)
    ry, rx = se.radius
    padded = np.pad(f, ((ry, ry), (rx, rx)), constant_values=0.0)
    h, w = f.shape
    out = np.full(f.shape, -np.inf)
    for dy, dx, g in zip(*_support(se)):
        win = padded[ry + dy : ry + dy + h, rx + dx : rx + dx + w]
        term = np.minimum(win, g) if g < 1.0 else win
        np.maximum(out, term, out=out)
    return out


def opening(f: np.ndarray, se: StructuringElement) -> np.ndarray:
    return dilate(erode(f, se), se)


def closing(f: np.ndarray, se: StructuringElement) -> np.ndarray:
    return erode(dilate(f, se), se)


def se_power(se: StructuringElement, k: int) -> StructuringElement:
    """Scale a structuring element to size k by k-1 self-dilations (Minkowski power)."""
    if k < 1:
        raise ValueError("scale must be >= 1")
    base = se.values
    acc = base
    for _ in range(k - 1):
        ry, rx = base.shape[0] // 2, base.shape[1] // 2
        grown = np.pad(acc, ((ry, ry), (rx, rx)))
        out = np.zeros_like(grown)
        ys, xs = np.nonzero(base)
        h, w = acc.shape
        for y, x in zip(ys, xs):
            g = base[y, x]
            win = np.zeros_like(grown)
            win[y : y + h, x : x + w] = np.minimum(acc, g)
            np.maximum(out, win, out=out)
        acc = out
    return StructuringElement(acc)


@dataclass(frozen=True)
class PatternSpectrum:
    """Granulometric size distribution of an image.

    residual_areas[k] holds V(k), the integral of the scale-k opening, with
    V(0) the integral of the image itself. xi[k] = (V(k) - V(k+1)) / V(0) is
    the mass removed between consecutive scales; it sums to 1 - V(K)/V(0),
    which reaches 1 exactly when the openings converge to a null image.
    """

    xi: np.ndarray
    residual_areas: np.ndarray
    converged: bool

    @property
    def cumulative(self) -> np.ndarray:
        return 1.0 - self.residual_areas / self.residual_areas[0]


def pattern_spectrum(
    f: np.ndarray,
    se: StructuringElement,
    max_k: int = 64,
    tol: float = 1e-9,
    require_convergence: bool = False,
) -> PatternSpectrum:
    """Compute the pattern spectrum of f under openings of increasing scale.

    The scale-k opening composes k erosions followed by k dilations with the
    base element, which equals opening by the k-fold Minkowski power of the
    element for the flat convex shapes used in the pipeline. Iteration stops
    when the residual area falls below tol * V(0) or at max_k scales.
    """
    f = np.asarray(f, dtype=np.float64)
    v0 = float(f.sum())
    if v0 <= 0.0:
        raise ValueError("pattern spectrum requires a non-blank image (V(0) > 0)")
    areas = [v0]
    eroded = f
    converged = False
    for k in range(1, max_k + 1):
        eroded = erode(eroded, se)
        opened = eroded
        for _ in range(k):
            opened = dilate(opened, se)
        vk = float(opened.sum())
        areas.append(vk)
        if vk <= tol * v0:
            converged = True
            break
    if require_convergence and not converged:
        raise RuntimeError(f"pattern spectrum did not reach a null opening within {max_k} scales")
    v = np.asarray(areas)
    xi = np.diff(-v) / v0
    xi = np.maximum(xi, 0.0)  # guard against rounding noise in the telescoping sums
    return PatternSpectrum(xi=xi, residual_areas=v, converged=converged)


def spectrum_features(spectrum: PatternSpectrum | np.ndarray) -> np.ndarray:
    """Seven summary statistics of the xi sequence.

    Order: mean, standard deviation, histogram mode, median, kurtosis,
    minimum, maximum. The mode is the center of the most populated of 32
    equal-width bins spanning [min, max] (lowest bin wins ties). Kurtosis is
    the ratio of the fourth central moment to the squared variance and is
    defined as 0 for a constant sequence, whose statistics are returned
    exactly rather than through the rounding of the mean. Central moments
    use the population convention (divide by the sequence length).
    """
    xi = spectrum.xi if isinstance(spectrum, PatternSpectrum) else np.asarray(spectrum, dtype=np.float64)
    if xi.size == 0:
        raise ValueError("empty spectrum")
    lo, hi = float(xi.min()), float(xi.max())
    if hi == lo:
        return np.array([lo, 0.0, lo, lo, 0.0, lo, lo])
    mean = float(xi.mean())
    m2 = float(((xi - mean) ** 2).mean())
    m4 = float(((xi - mean) ** 4).mean())
    std = float(np.sqrt(m2))
    kurtosis = float(m4 / (m2 * m2)) if m2 > 0.0 else 0.0
    counts, edges = np.histogram(xi, bins=32, range=(lo, hi))
    i = int(np.argmax(counts))
    mode = float((edges[i] + edges[i + 1]) / 2.0)
    median = float(np.median(xi))
    return np.array([mean, std, mode, median, kurtosis, lo, hi])

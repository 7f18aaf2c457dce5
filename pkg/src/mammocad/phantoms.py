"""Synthetic phantom generator for pipeline validation.

Three image classes mimic the geometry of mammographic regions of interest:
"normal" is textured background only, "benign" adds a compact mass with a
smooth radial intensity profile, "malignant" adds a spiculated mass whose
boundary radius is modulated sinusoidally with angle. Intensities and
geometry are drawn from a single seeded generator, so a configuration
reproduces byte-identical files on every run.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from mammocad.dataio import save_manifest, save_pgm


@dataclass(frozen=True)
class PhantomConfig:
    normals: int = 10
    benign: int = 10
    malignant: int = 10
    size: int = 128
    seed: int = 0

    def __post_init__(self):
        if self.size < 32:
            raise ValueError("phantom size must be at least 32 pixels")
        if min(self.normals, self.benign, self.malignant) < 0:
            raise ValueError("phantom class counts must be non-negative")


def _box_blur(img: np.ndarray, radius: int, passes: int = 3) -> np.ndarray:
    """Separable box blur with edge clamping; repeated passes approximate Gaussian."""
    k = 2 * radius + 1
    kernel = np.full(k, 1.0 / k)
    out = img
    for _ in range(passes):
        padded = np.pad(out, ((0, 0), (radius, radius)), mode="edge")
        out = np.apply_along_axis(lambda r: np.convolve(r, kernel, mode="valid"), 1, padded)
        padded = np.pad(out, ((radius, radius), (0, 0)), mode="edge")
        out = np.apply_along_axis(lambda c: np.convolve(c, kernel, mode="valid"), 0, padded)
    return out


def _background(rng: np.random.Generator, size: int) -> np.ndarray:
    noise = rng.uniform(0.0, 1.0, size=(size, size))
    smooth = _box_blur(noise, radius=max(1, size // 32))
    # rescale the blurred noise into a mid-gray band so masses stay in gamut
    lo, hi = smooth.min(), smooth.max()
    tex = (smooth - lo) / (hi - lo) if hi > lo else np.zeros_like(smooth)
    return 0.15 + 0.25 * tex


def _mass(rng: np.random.Generator, size: int, spiculated: bool) -> np.ndarray:
    yy, xx = np.mgrid[0:size, 0:size].astype(np.float64)
    cy = size / 2.0 + rng.uniform(-size / 10.0, size / 10.0)
    cx = size / 2.0 + rng.uniform(-size / 10.0, size / 10.0)
    r0 = rng.uniform(size / 8.0, size / 5.0)
    amp = rng.uniform(0.40, 0.55)
    d = np.hypot(yy - cy, xx - cx)
    if spiculated:
        n_spikes = int(rng.integers(8, 17))
        phase = rng.uniform(0.0, 2.0 * np.pi)
        depth = rng.uniform(0.30, 0.45)
        theta = np.arctan2(yy - cy, xx - cx)
        boundary = r0 * (1.0 + depth * np.sin(n_spikes * theta + phase))
        edge = 0.012 * size
    else:
        boundary = np.full_like(d, r0)
        edge = 0.035 * size
    # logistic falloff: flat plateau inside the boundary, smooth rim outside
    profile = 1.0 / (1.0 + np.exp((d - boundary) / edge))
    return amp * profile


def _render(rng: np.random.Generator, size: int, kind: int) -> np.ndarray:
    img = _background(rng, size)
    if kind > 0:
        img = img + _mass(rng, size, spiculated=(kind == 2))
    return np.clip(img, 0.0, 1.0)


def generate_phantom_dataset(out_dir: str | Path, cfg: PhantomConfig) -> list[tuple[Path, int]]:
    """Write phantom PGMs plus a manifest.csv; returns (path, label) entries."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(cfg.seed)
    entries: list[tuple[Path, int]] = []
    rel_entries: list[tuple[str, int]] = []
    plan = [("normal", 0, cfg.normals), ("benign", 1, cfg.benign), ("malignant", 2, cfg.malignant)]
    for name, kind, count in plan:
        for i in range(count):
            img = _render(rng, cfg.size, kind)
            fname = f"{name}_{i:03d}.pgm"
            save_pgm(img, out_dir / fname)
            entries.append((out_dir / fname, kind))
            rel_entries.append((fname, kind))
    save_manifest(rel_entries, out_dir / "manifest.csv")
    return entries

"""Separable 2D discrete wavelet transform with compiled-in filter banks.

One analysis level convolves the rows of an image with the analysis lowpass
and highpass filters and discards odd-indexed columns, then repeats along
columns discarding odd-indexed rows, producing the four subbands ll, hl, lh
and hh. hl carries detail along the width axis, lh along the height axis.
Boundary handling is half-sample symmetric extension by default; periodic
extension is also available and is the mode under which synthesize_level
reconstructs exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

# Filter coefficients are data, not code. They were generated at 60-digit
# precision by spectral factorization of the degree-7 product polynomial
# (db8, sym8: minimum-phase and least-asymmetric root selections) and by the
# exact spline construction for the 3/7 biorthogonal pair, whose analysis
# lowpass is rational: (35, -105, -195, 865, 363, -3489, -307, 11025, ...
# mirrored) / 16384 times sqrt(2). See scripts/derive_wavelet_filters.py to
# regenerate. Each bank is verified here and in the test suite against the
# quadrature conditions: lowpass sums sqrt(2), highpass sums 0, shift-2
# orthonormality for the orthogonal families, and perfect reconstruction
# under periodic extension for all three.
_FILTERS: dict[str, dict[str, tuple[float, ...]]] = {
    "db8": {
        "analysis_lowpass": (-0.00011747678412476953, 0.0006754494064505693, -0.00039174037337694705, -0.004870352993451574, 0.008746094047405777, 0.013981027917398282, -0.044088253930794755, -0.017369301001807547, 0.12874742662047847, 0.0004724845739132828, -0.2840155429615469, -0.015829105256349306, 0.5853546836542067, 0.6756307362972898, 0.31287159091429995, 0.05441584224310401),
        "analysis_highpass": (-0.05441584224310401, 0.31287159091429995, -0.6756307362972898, 0.5853546836542067, 0.015829105256349306, -0.2840155429615469, -0.0004724845739132828, 0.12874742662047847, 0.017369301001807547, -0.044088253930794755, -0.013981027917398282, 0.008746094047405777, 0.004870352993451574, -0.00039174037337694705, -0.0006754494064505693, -0.00011747678412476953),
        "synthesis_lowpass": (0.05441584224310401, 0.31287159091429995, 0.6756307362972898, 0.5853546836542067, -0.015829105256349306, -0.2840155429615469, 0.0004724845739132828, 0.12874742662047847, -0.017369301001807547, -0.044088253930794755, 0.013981027917398282, 0.008746094047405777, -0.004870352993451574, -0.00039174037337694705, 0.0006754494064505693, -0.00011747678412476953),
        "synthesis_highpass": (-0.00011747678412476953, -0.0006754494064505693, -0.00039174037337694705, 0.004870352993451574, 0.008746094047405777, -0.013981027917398282, -0.044088253930794755, 0.017369301001807547, 0.12874742662047847, -0.0004724845739132828, -0.2840155429615469, 0.015829105256349306, 0.5853546836542067, -0.6756307362972898, 0.31287159091429995, -0.05441584224310401),
    },
    "sym8": {
        "analysis_lowpass": (0.001889950332767689, -0.0003029205147241331, -0.014952258337062199, 0.0038087520138944896, 0.04913717967373029, -0.027219029917103486, -0.0519458381078818, 0.36444189483617895, 0.777185751699628, 0.4813596512590534, -0.061273359067811076, -0.14329423835127267, 0.007607487324976609, 0.03169508781152599, -0.0005421323318000107, -0.0033824159510050028),
        "analysis_highpass": (0.0033824159510050028, -0.0005421323318000107, -0.03169508781152599, 0.007607487324976609, 0.14329423835127267, -0.061273359067811076, -0.4813596512590534, 0.777185751699628, -0.36444189483617895, -0.0519458381078818, 0.027219029917103486, 0.04913717967373029, -0.0038087520138944896, -0.014952258337062199, 0.0003029205147241331, 0.001889950332767689),
        "synthesis_lowpass": (-0.0033824159510050028, -0.0005421323318000107, 0.03169508781152599, 0.007607487324976609, -0.14329423835127267, -0.061273359067811076, 0.4813596512590534, 0.777185751699628, 0.36444189483617895, -0.0519458381078818, -0.027219029917103486, 0.04913717967373029, 0.0038087520138944896, -0.014952258337062199, -0.0003029205147241331, 0.001889950332767689),
        "synthesis_highpass": (0.001889950332767689, 0.0003029205147241331, -0.014952258337062199, -0.0038087520138944896, 0.04913717967373029, 0.027219029917103486, -0.0519458381078818, -0.36444189483617895, 0.777185751699628, -0.4813596512590534, -0.061273359067811076, 0.14329423835127267, 0.007607487324976609, -0.03169508781152599, -0.0005421323318000107, 0.0033824159510050028),
    },
    "bior3.7": {
        "analysis_lowpass": (0.0030210861012608843, -0.009063258303782653, -0.01683176542131064, 0.074663985074019, 0.03133297870736289, -0.301159125922835, -0.02649924094534547, 0.9516421218971786, 0.9516421218971786, -0.02649924094534547, -0.301159125922835, 0.03133297870736289, 0.074663985074019, -0.01683176542131064, -0.009063258303782653, 0.0030210861012608843),
        "analysis_highpass": (-0.1767766952966369, 0.5303300858899106, -0.5303300858899106, 0.1767766952966369),
        "synthesis_lowpass": (0.1767766952966369, 0.5303300858899106, 0.5303300858899106, 0.1767766952966369),
        "synthesis_highpass": (0.0030210861012608843, 0.009063258303782653, -0.01683176542131064, -0.074663985074019, 0.03133297870736289, 0.301159125922835, -0.02649924094534547, -0.9516421218971786, 0.9516421218971786, 0.02649924094534547, -0.301159125922835, -0.03133297870736289, 0.074663985074019, 0.01683176542131064, -0.009063258303782653, -0.0030210861012608843),
    },
}

FAMILIES = tuple(sorted(_FILTERS))
ORTHOGONAL_FAMILIES = ("db8", "sym8")


@dataclass(frozen=True)
class WaveletFilterBank:
    name: str
    analysis_lowpass: np.ndarray
    analysis_highpass: np.ndarray
    synthesis_lowpass: np.ndarray
    synthesis_highpass: np.ndarray

    @property
    def orthogonal(self) -> bool:
        return self.name in ORTHOGONAL_FAMILIES


def _validate_bank(bank: WaveletFilterBank) -> None:
    sq2 = np.sqrt(2.0)
    for lo in (bank.analysis_lowpass, bank.synthesis_lowpass):
        if abs(lo.sum() - sq2) > 1e-10:
            raise AssertionError(f"{bank.name}: lowpass sum deviates from sqrt(2)")
    for hi in (bank.analysis_highpass, bank.synthesis_highpass):
        if abs(hi.sum()) > 1e-10:
            raise AssertionError(f"{bank.name}: highpass sum deviates from 0")
    if bank.orthogonal:
        for f in (bank.analysis_lowpass, bank.analysis_highpass):
            if abs((f * f).sum() - 1.0) > 1e-10:
                raise AssertionError(f"{bank.name}: orthogonal filter energy deviates from 1")
        if not np.allclose(bank.synthesis_lowpass, bank.analysis_lowpass[::-1], atol=1e-15):
            raise AssertionError(f"{bank.name}: synthesis is not the time-reversed analysis")


@lru_cache(maxsize=None)
def filter_bank(family: str) -> WaveletFilterBank:
    """Look up a compiled-in filter bank by family name (db8, sym8, bior3.7)."""
    if family not in _FILTERS:
        raise ValueError(f"unknown wavelet family {family!r}, expected one of {FAMILIES}")
    raw = _FILTERS[family]
    bank = WaveletFilterBank(
        name=family,
        analysis_lowpass=np.asarray(raw["analysis_lowpass"]),
        analysis_highpass=np.asarray(raw["analysis_highpass"]),
        synthesis_lowpass=np.asarray(raw["synthesis_lowpass"]),
        synthesis_highpass=np.asarray(raw["synthesis_highpass"]),
    )
    _validate_bank(bank)
    return bank


def _aligned_length(bank: WaveletFilterBank) -> int:
    return max(
        len(bank.analysis_lowpass),
        len(bank.analysis_highpass),
        len(bank.synthesis_lowpass),
        len(bank.synthesis_highpass),
    )


def _pad_centered(f: np.ndarray, length: int) -> np.ndarray:
    extra = length - len(f)
    if extra == 0:
        return f
    # filters differ in length by an even amount, so centers stay aligned
    return np.pad(f, (extra // 2, extra - extra // 2))


def _extend(x: np.ndarray, pad: int, mode: str, axis: int) -> np.ndarray:
    width = [(0, 0)] * x.ndim
    width[axis] = (pad, 0)
    if mode == "symmetric":
        return np.pad(x, width, mode="symmetric")
    if mode == "periodic":
        return np.pad(x, width, mode="wrap")
    raise ValueError(f"unknown extension mode {mode!r}, expected 'symmetric' or 'periodic'")


def _analyze_axis(x: np.ndarray, h: np.ndarray, mode: str, axis: int) -> np.ndarray:
    """Convolve along axis with filter h, then keep even-indexed outputs."""
    L = len(h)
    n = x.shape[axis]
    if mode == "periodic" and n % 2 != 0:
        raise ValueError("periodic mode requires even-length axes")
    ext = _extend(x, L - 1, mode, axis)
    out = np.zeros(x.shape, dtype=np.float64)
    sl = [slice(None)] * x.ndim
    for k in range(L):
        sl[axis] = slice(L - 1 - k, L - 1 - k + n)
        out += h[k] * ext[tuple(sl)]
    dec = [slice(None)] * x.ndim
    dec[axis] = slice(0, None, 2)
    return out[tuple(dec)]


@dataclass(frozen=True)
class Subbands:
    ll: np.ndarray
    hl: np.ndarray
    lh: np.ndarray
    hh: np.ndarray


def analyze_level(img: np.ndarray, bank: WaveletFilterBank, mode: str = "symmetric") -> Subbands:
    """One separable analysis step: rows then columns, decimating by two."""
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2 or min(img.shape) < 2:
        raise ValueError("analysis needs a 2D image with both axes >= 2")
    L = _aligned_length(bank)
    lo = _pad_centered(bank.analysis_lowpass, L)
    hi = _pad_centered(bank.analysis_highpass, L)
    lo_x = _analyze_axis(img, lo, mode, axis=1)
    hi_x = _analyze_axis(img, hi, mode, axis=1)
    return Subbands(
        ll=_analyze_axis(lo_x, lo, mode, axis=0),
        hl=_analyze_axis(hi_x, lo, mode, axis=0),
        lh=_analyze_axis(lo_x, hi, mode, axis=0),
        hh=_analyze_axis(hi_x, hi, mode, axis=0),
    )


def _synthesize_axis(a: np.ndarray, d: np.ndarray, rec_lo, rec_hi, axis: int) -> np.ndarray:
    L = len(rec_lo)
    n = a.shape[axis] * 2
    shape = list(a.shape)
    shape[axis] = n
    up_a = np.zeros(shape)
    up_d = np.zeros(shape)
    sl = [slice(None)] * a.ndim
    sl[axis] = slice(0, None, 2)
    up_a[tuple(sl)] = a
    up_d[tuple(sl)] = d
    out = np.zeros(shape)
    for k in range(L):
        out += rec_lo[k] * np.roll(up_a, k, axis=axis)
        out += rec_hi[k] * np.roll(up_d, k, axis=axis)
    # the analysis/synthesis cascade delays the signal by L-1 samples per axis
    return np.roll(out, -(L - 1), axis=axis)


def synthesize_level(sub: Subbands, bank: WaveletFilterBank, mode: str = "periodic") -> np.ndarray:
    """Invert analyze_level. Exact under periodic extension, the only mode supported."""
    if mode != "periodic":
        raise ValueError("synthesis is defined for periodic extension only")
    shapes = {sub.ll.shape, sub.hl.shape, sub.lh.shape, sub.hh.shape}
    if len(shapes) != 1:
        raise ValueError("subband shapes disagree")
    L = _aligned_length(bank)
    rec_lo = _pad_centered(bank.synthesis_lowpass, L)
    rec_hi = _pad_centered(bank.synthesis_highpass, L)
    lo_x = _synthesize_axis(sub.ll, sub.lh, rec_lo, rec_hi, axis=0)
    hi_x = _synthesize_axis(sub.hl, sub.hh, rec_lo, rec_hi, axis=0)
    return _synthesize_axis(lo_x, hi_x, rec_lo, rec_hi, axis=1)


@dataclass(frozen=True)
class Decomposition:
    """A multiresolution pyramid: detail subbands per level plus the final approximation."""

    family: str
    levels: tuple[Subbands, ...]

    @property
    def final_ll(self) -> np.ndarray:
        return self.levels[-1].ll

    def components(self) -> list[tuple[str, np.ndarray]]:
        """All 3L+1 components in canonical order: per level hl, lh, hh; then the last ll."""
        out = []
        for i, sub in enumerate(self.levels, start=1):
            out.extend([(f"L{i}.hl", sub.hl), (f"L{i}.lh", sub.lh), (f"L{i}.hh", sub.hh)])
        out.append((f"L{len(self.levels)}.ll", self.final_ll))
        return out


def decompose(
    img: np.ndarray,
    bank: WaveletFilterBank,
    levels: int = 4,
    mode: str = "symmetric",
) -> Decomposition:
    """Recursively analyze the approximation band for the requested level count."""
    img = np.asarray(img, dtype=np.float64)
    if levels < 1:
        raise ValueError("levels must be >= 1")
    if min(img.shape) < 2**levels:
        raise ValueError(
            f"image of shape {img.shape} is too small for {levels} decomposition levels"
        )
    out = []
    approx = img
    for _ in range(levels):
        sub = analyze_level(approx, bank, mode)
        out.append(sub)
        approx = sub.ll
    return Decomposition(family=bank.name, levels=tuple(out))

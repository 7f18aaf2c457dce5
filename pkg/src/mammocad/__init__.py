"""Mammographic mass classification testbed.

Feature extraction (multiresolution wavelet + Zernike moments, morphological
pattern spectra), a from-scratch classifier suite (ELM, SVM, k-NN, CART, MLP),
and a seeded cross-validation benchmark harness.
"""

__version__ = "0.1.0"

from mammocad.dataio import (  # noqa: F401
    CLASS_NAMES,
    FeatureMatrix,
    balance_dataset,
    load_image,
    load_manifest,
    normalize_histogram,
    save_manifest,
    save_pgm,
)
from mammocad.evaluation import (  # noqa: F401
    ProtocolConfig,
    compare_reports,
    emit_report,
    load_report,
    make_fold_plan,
    run_cv,
    run_protocol,
    t_test,
)
from mammocad.features import (  # noqa: F401
    SPECTRUM_DIM,
    WAVELET_ZERNIKE_DIM,
    apply_normalization,
    extract_from_manifest,
    extract_spectrum,
    extract_wavelet_zernike,
    fit_normalization,
    load_features,
    save_features,
)
from mammocad.morphology import (  # noqa: F401
    closing,
    dilate,
    disc,
    erode,
    opening,
    pattern_spectrum,
)
from mammocad.phantoms import PhantomConfig, generate_phantom_dataset  # noqa: F401
from mammocad.wavelets import FAMILIES, decompose, filter_bank  # noqa: F401
from mammocad.zernike import MOMENT_INDICES, moments  # noqa: F401

"""From-scratch classifier suite sharing a fit/predict protocol.

All classifiers take integer class labels, break prediction ties toward the
lowest class index, and are deterministic given their configuration seeds.
"""

from mammocad.classifiers.base import one_hot, timed  # noqa: F401
from mammocad.classifiers.elm import ELM_KERNELS, ElmConfig, ExtremeLearningMachine  # noqa: F401
from mammocad.classifiers.svm import SVM_KERNELS, SvmConfig, SupportVectorMachine  # noqa: F401
from mammocad.classifiers.neighbors import KnnConfig, NearestNeighbor  # noqa: F401
from mammocad.classifiers.tree import CartTree, TreeConfig  # noqa: F401
from mammocad.classifiers.mlp import (  # noqa: F401
    MLP_ARCHITECTURES,
    MLP_TRAINERS,
    MlpConfig,
    MultilayerPerceptron,
    make_split,
)

"""One-class pixel classifiers behind a uniform fit/score contract."""

from .base import (
    KINDS,
    ClassifierSpec,
    binarize,
    distance_to_score,
    fit,
    load_model,
    make_spec,
    save_model,
    score_image,
)
from .clustering import CenterModel, covering_radius, fit_kcenter, fit_kmeans
from .density import (
    GaussianModel,
    HistogramModel,
    NearestNeighborModel,
    fit_gaussian,
    fit_histogram,
    fit_nn,
    fit_robust_gaussian,
)
from .dlp import DlpModel, fit_dlp
from .mog import MixtureModel, bic, fit_mog, fit_mog_opt
from .mpm import MpmModel, fit_mpm
from .mst import MstModel, fit_mst
from .pca import SubspaceModel, fit_pca
from .svdd import SvddModel, fit_svdd

__all__ = [
    "KINDS",
    "ClassifierSpec",
    "binarize",
    "distance_to_score",
    "fit",
    "load_model",
    "make_spec",
    "save_model",
    "score_image",
    "CenterModel",
    "covering_radius",
    "fit_kcenter",
    "fit_kmeans",
    "GaussianModel",
    "HistogramModel",
    "NearestNeighborModel",
    "fit_gaussian",
    "fit_histogram",
    "fit_nn",
    "fit_robust_gaussian",
    "DlpModel",
    "fit_dlp",
    "MixtureModel",
    "bic",
    "fit_mog",
    "fit_mog_opt",
    "MpmModel",
    "fit_mpm",
    "MstModel",
    "fit_mst",
    "SubspaceModel",
    "fit_pca",
    "SvddModel",
    "fit_svdd",
]

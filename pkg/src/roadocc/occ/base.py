"""Uniform fit/score contract for the one-class classifiers.

Every method turns an N x d training matrix into an immutable model whose
``score`` maps feature rows to a road likelihood in [0,1]; higher means
more road-like.  Distance-valued methods go through d -> 1/(1+d), which is
strictly decreasing, so ROC/AUC/EER (rank statistics) are unaffected.
"""

from __future__ import annotations

import pickle
from dataclasses import dataclass
from typing import Any

import numpy as np

from ..errors import ConfigurationError
from ..sampling import FULL_ROI, SUPERPIXEL_MEDIANS, AUGMENTED, SampleSet

KINDS = ("Mb", "NN", "G", "RG", "MoG", "km", "kc", "PCA", "dLP", "SVD", "MPM", "MST")

MODEL_FORMAT_VERSION = 1


@dataclass(frozen=True)
class ClassifierSpec:
    """One configured classifier instance.

    ``params`` is a sorted tuple of (key, value) pairs so specs are
    hashable and usable as cache keys.
    """

    kind: str
    name: str
    params: tuple[tuple[str, Any], ...]
    training_source: str

    def param(self, key: str, default=None):
        for k, v in self.params:
            if k == key:
                return v
        return default


def make_spec(kind: str, name: str | None = None, training_source: str | None = None, **params) -> ClassifierSpec:
    if kind not in KINDS:
        raise ConfigurationError(f"unknown classifier kind {kind!r}")
    if training_source is None:
        # Density methods afford the full ROI; boundary/reconstruction
        # methods train on the superpixel medians.
        training_source = FULL_ROI if kind in ("Mb", "NN", "G", "RG", "MoG") else SUPERPIXEL_MEDIANS
    if training_source not in (FULL_ROI, SUPERPIXEL_MEDIANS, AUGMENTED):
        raise ConfigurationError(f"unknown training source {training_source!r}")
    return ClassifierSpec(
        kind=kind,
        name=name or kind,
        params=tuple(sorted(params.items())),
        training_source=training_source,
    )


def distance_to_score(distance: np.ndarray) -> np.ndarray:
    """Map non-negative distances onto (0,1], reversing the ordering exactly."""
    return 1.0 / (1.0 + distance)


def binarize(likelihood: np.ndarray, tau: float) -> np.ndarray:
    """Road mask by strict threshold: pixels with L > tau are road."""
    return np.asarray(likelihood) > tau


def regularize_covariance(cov: np.ndarray, cond_limit: float = 1e10) -> tuple[np.ndarray, float]:
    """Ridge-stabilize a covariance matrix; returns (cov, ridge used)."""
    cov = np.atleast_2d(np.asarray(cov, dtype=float))
    d = cov.shape[0]
    ridge = 0.0
    cond = np.linalg.cond(cov)
    if not np.isfinite(cond) or cond > cond_limit:
        ridge = 1e-6 * np.trace(cov) / d
        if ridge <= 0.0:
            ridge = 1e-12
        cov = cov + ridge * np.eye(d)
    return cov, ridge


def fit(samples: SampleSet | np.ndarray, spec: ClassifierSpec, seed: int = 0):
    """Dispatch to the classifier named by ``spec.kind``."""
    from . import clustering, density, dlp, mog, mpm, mst, pca, svdd

    rows = samples.rows if isinstance(samples, SampleSet) else np.asarray(samples, dtype=float)
    kind = spec.kind
    if kind == "Mb":
        return density.fit_histogram(rows, bins=spec.param("bins", 64))
    if kind == "NN":
        return density.fit_nn(rows)
    if kind == "G":
        return density.fit_gaussian(rows, rejection=spec.param("rejection", 0.025))
    if kind == "RG":
        return density.fit_robust_gaussian(rows, rejection=spec.param("rejection", 0.025))
    if kind == "MoG":
        n = spec.param("n", "opt")
        if n == "opt":
            return mog.fit_mog_opt(rows, seed=seed)
        return mog.fit_mog(rows, n_components=int(n), seed=seed)
    if kind == "km":
        return clustering.fit_kmeans(rows, k=spec.param("k", 5), seed=seed)
    if kind == "kc":
        return clustering.fit_kcenter(rows, k=spec.param("k", 5))
    if kind == "PCA":
        return pca.fit_pca(rows, energy=spec.param("energy", 0.95))
    if kind == "dLP":
        return dlp.fit_dlp(rows, nu=spec.param("nu", 0.05))
    if kind == "SVD":
        return svdd.fit_svdd(
            rows,
            C=spec.param("C", 1.0),
            kernel=spec.param("kernel", "rbf"),
        )
    if kind == "MPM":
        return mpm.fit_mpm(rows, rejection=spec.param("rejection", 0.025))
    if kind == "MST":
        return mst.fit_mst(rows)
    raise ConfigurationError(f"unknown classifier kind {kind!r}")


def score_image(model, features: np.ndarray) -> np.ndarray:
    """Score an H x W x d feature image into an H x W likelihood map."""
    features = np.asarray(features, dtype=float)
    flat = features.reshape(-1, features.shape[-1])
    return model.score(flat).reshape(features.shape[:-1])


def save_model(model, path) -> None:
    """Persist a fitted model; round-trip is exact (versioned pickle record)."""
    record = {"format_version": MODEL_FORMAT_VERSION, "model": model}
    with open(path, "wb") as fh:
        pickle.dump(record, fh, protocol=4)


def load_model(path):
    with open(path, "rb") as fh:
        record = pickle.load(fh)
    version = record.get("format_version")
    if version != MODEL_FORMAT_VERSION:
        raise ConfigurationError(f"unsupported model format version {version!r}")
    return record["model"]

"""Density-style descriptors: joint histogram, nearest neighbor, Gaussian, robust Gaussian."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from ..errors import ConfigurationError
from .base import distance_to_score, regularize_covariance

MAX_HISTOGRAM_DIM = 3


@dataclass
class HistogramModel:
    """Normalized joint histogram over [0,1]^d; score = bin mass of the query."""

    bins: int
    hist: np.ndarray

    @property
    def dim(self) -> int:
        return self.hist.ndim

    def _indices(self, X: np.ndarray) -> tuple:
        idx = np.floor(np.asarray(X, dtype=float) * self.bins).astype(int)
        np.clip(idx, 0, self.bins - 1, out=idx)
        return tuple(idx[:, i] for i in range(self.dim))

    def score(self, X: np.ndarray) -> np.ndarray:
        return self.hist[self._indices(np.atleast_2d(X))]


def fit_histogram(rows: np.ndarray, bins: int = 64) -> HistogramModel:
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    d = rows.shape[1]
    if bins < 1:
        raise ConfigurationError("bins must be positive")
    if d > MAX_HISTOGRAM_DIM:
        raise ConfigurationError(
            f"joint histogram over d={d} channels rejected (limit {MAX_HISTOGRAM_DIM})"
        )
    idx = np.floor(rows * bins).astype(int)
    np.clip(idx, 0, bins - 1, out=idx)
    flat = np.ravel_multi_index(tuple(idx[:, i] for i in range(d)), (bins,) * d)
    counts = np.bincount(flat, minlength=bins**d).astype(float)
    hist = (counts / counts.sum()).reshape((bins,) * d)
    return HistogramModel(bins=bins, hist=hist)


@dataclass
class NearestNeighborModel:
    """Stores the training rows; score = 1/(1 + min squared Euclidean distance)."""

    rows: np.ndarray
    _tree: cKDTree | None = field(default=None, repr=False, compare=False)

    def __getstate__(self):
        return {"rows": self.rows}

    def __setstate__(self, state):
        self.rows = state["rows"]
        self._tree = None

    def min_distance(self, X: np.ndarray) -> np.ndarray:
        """Euclidean distance to the nearest training row.

        The tree only finds the neighbor; the distance is recomputed with
        plain numpy so it is bit-identical to other descriptors' vertex
        distances (sqrt of a summed squared difference).
        """
        X = np.atleast_2d(X)
        if self._tree is None:
            self._tree = cKDTree(self.rows)
        _, idx = self._tree.query(X, k=1)
        return np.sqrt(((X - self.rows[idx]) ** 2).sum(axis=1))

    def score(self, X: np.ndarray) -> np.ndarray:
        return distance_to_score(self.min_distance(X) ** 2)


def fit_nn(rows: np.ndarray) -> NearestNeighborModel:
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    if rows.shape[0] == 0:
        raise ConfigurationError("nearest neighbor needs a non-empty training set")
    return NearestNeighborModel(rows=rows.copy())


@dataclass
class GaussianModel:
    """Mean/covariance descriptor scored through the squared Mahalanobis distance."""

    mean: np.ndarray
    cov: np.ndarray
    precision: np.ndarray
    ridge: float = 0.0
    iterations: int = 1

    def mahalanobis_sq(self, X: np.ndarray) -> np.ndarray:
        diff = np.atleast_2d(X) - self.mean
        return np.einsum("ij,jk,ik->i", diff, self.precision, diff)

    def score(self, X: np.ndarray) -> np.ndarray:
        return distance_to_score(self.mahalanobis_sq(X))


def _mean_cov(rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    mean = rows.mean(axis=0)
    diff = rows - mean
    denom = max(rows.shape[0] - 1, 1)
    cov = diff.T @ diff / denom
    return mean, np.atleast_2d(cov)


def _build(rows: np.ndarray, iterations: int) -> GaussianModel:
    mean, cov = _mean_cov(rows)
    cov, ridge = regularize_covariance(cov)
    precision = np.linalg.inv(cov)
    return GaussianModel(mean=mean, cov=cov, precision=precision, ridge=ridge, iterations=iterations)


def _n_keep(n: int, rejection: float) -> int:
    return n - int(np.floor(rejection * n))


def fit_gaussian(rows: np.ndarray, rejection: float = 0.025) -> GaussianModel:
    """Fit mean/covariance, drop the ``rejection`` fraction with largest
    Mahalanobis distance, and refit once."""
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    n, d = rows.shape
    if n <= d:
        raise ConfigurationError(f"need more samples ({n}) than dimensions ({d})")
    model = _build(rows, iterations=1)
    keep = _n_keep(n, rejection)
    if keep < n:
        order = np.argsort(model.mahalanobis_sq(rows), kind="stable")
        model = _build(rows[order[:keep]], iterations=2)
    return model


def fit_robust_gaussian(rows: np.ndarray, rejection: float = 0.025, max_iter: int = 20) -> GaussianModel:
    """Iterated hard trimming: refit on the (1 - rejection) fraction closest
    to the current estimate until the support set stops changing."""
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    n, d = rows.shape
    if n <= d:
        raise ConfigurationError(f"need more samples ({n}) than dimensions ({d})")
    keep = _n_keep(n, rejection)
    model = _build(rows, iterations=1)
    support = np.arange(n)
    for it in range(max_iter):
        order = np.argsort(model.mahalanobis_sq(rows), kind="stable")
        new_support = np.sort(order[:keep])
        if np.array_equal(new_support, support):
            break
        support = new_support
        model = _build(rows[support], iterations=it + 2)
    return model

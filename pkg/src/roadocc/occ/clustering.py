"""Cluster-center descriptors: k-means (Lloyd) and k-center (farthest-first)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigurationError
from .base import distance_to_score

MAX_ITER = 100


@dataclass
class CenterModel:
    """Cluster centers scored by 1/(1 + min squared distance to any center)."""

    centers: np.ndarray
    objective_history: list[float] = field(default_factory=list)

    def min_sq_distance(self, X: np.ndarray) -> np.ndarray:
        return _pairwise_sq(np.atleast_2d(X), self.centers).min(axis=1)

    def score(self, X: np.ndarray) -> np.ndarray:
        return distance_to_score(self.min_sq_distance(X))


def _pairwise_sq(X: np.ndarray, C: np.ndarray) -> np.ndarray:
    # expansion form: ||x||^2 - 2 x.c + ||c||^2, clipped against rounding
    d2 = (
        (X**2).sum(axis=1)[:, None]
        - 2.0 * (X @ C.T)
        + (C**2).sum(axis=1)[None, :]
    )
    return np.clip(d2, 0.0, None, out=d2)


def _farthest_first(rows: np.ndarray, k: int, first: int) -> np.ndarray:
    """Gonzalez traversal: greedily add the sample farthest from the chosen set."""
    chosen = [first]
    min_d2 = ((rows - rows[first]) ** 2).sum(axis=1)
    while len(chosen) < k:
        nxt = int(np.argmax(min_d2))
        chosen.append(nxt)
        min_d2 = np.minimum(min_d2, ((rows - rows[nxt]) ** 2).sum(axis=1))
    return np.array(chosen)


def fit_kmeans(rows: np.ndarray, k: int = 5, seed: int = 0, max_iter: int = MAX_ITER) -> CenterModel:
    """Lloyd's algorithm with a seeded farthest-first start."""
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    n = rows.shape[0]
    if k < 1 or k > n:
        raise ConfigurationError(f"k={k} outside [1, {n}]")
    rng = np.random.default_rng(seed)
    centers = rows[_farthest_first(rows, k, first=int(rng.integers(n)))].copy()
    history: list[float] = []
    for _ in range(max_iter):
        d2 = _pairwise_sq(rows, centers)
        assign = d2.argmin(axis=1)
        history.append(float(d2[np.arange(n), assign].sum()))
        new_centers = centers.copy()
        min_d2 = d2[np.arange(n), assign]
        for c in range(k):
            members = assign == c
            if members.any():
                new_centers[c] = rows[members].mean(axis=0)
            else:
                far = int(np.argmax(min_d2))
                new_centers[c] = rows[far]
                min_d2[far] = 0.0
        if np.allclose(new_centers, centers):
            break
        centers = new_centers
    return CenterModel(centers=centers, objective_history=history)


def fit_kcenter(rows: np.ndarray, k: int = 5) -> CenterModel:
    """Farthest-first covering with centers on training samples.

    Deterministic: the first center is the sample nearest the mean.
    """
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    n = rows.shape[0]
    if k < 1 or k > n:
        raise ConfigurationError(f"k={k} outside [1, {n}]")
    mean = rows.mean(axis=0)
    first = int(np.argmin(((rows - mean) ** 2).sum(axis=1)))
    centers = rows[_farthest_first(rows, k, first=first)].copy()
    return CenterModel(centers=centers)


def covering_radius(model: CenterModel, rows: np.ndarray) -> float:
    """max over samples of the distance to the nearest center."""
    return float(np.sqrt(model.min_sq_distance(rows).max()))

"""Linear-subspace descriptor scored by reconstruction error."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import UnsupportedRepresentationError
from .base import distance_to_score


@dataclass
class SubspaceModel:
    mean: np.ndarray
    basis: np.ndarray  # (d, m) orthonormal columns
    energy: float  # retained eigenvalue fraction

    def reconstruction_error_sq(self, X: np.ndarray) -> np.ndarray:
        diff = np.atleast_2d(X) - self.mean
        proj = diff @ self.basis @ self.basis.T
        return ((diff - proj) ** 2).sum(axis=1)

    def score(self, X: np.ndarray) -> np.ndarray:
        return distance_to_score(self.reconstruction_error_sq(X))


def fit_pca(rows: np.ndarray, energy: float = 0.95) -> SubspaceModel:
    """Keep the fewest leading eigenvectors reaching the energy fraction.

    The basis is capped at d-1 vectors; with all d the reconstruction error
    is identically zero and the descriptor degenerates.  Single-channel
    input is rejected outright (no proper subspace exists).
    """
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    d = rows.shape[1]
    if d < 2:
        raise UnsupportedRepresentationError("subspace descriptor needs at least 2 channels")
    mean = rows.mean(axis=0)
    diff = rows - mean
    cov = diff.T @ diff / max(rows.shape[0] - 1, 1)
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1]
    eigvals = np.clip(eigvals[order], 0.0, None)
    eigvecs = eigvecs[:, order]
    total = eigvals.sum()
    if total <= 0.0:
        # Degenerate constant data: keep the single leading direction.
        return SubspaceModel(mean=mean, basis=eigvecs[:, :1], energy=1.0)
    cum = np.cumsum(eigvals) / total
    m = int(np.searchsorted(cum, energy) + 1)
    m = min(m, d - 1)
    return SubspaceModel(mean=mean, basis=eigvecs[:, :m], energy=float(cum[m - 1]))

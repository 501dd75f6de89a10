"""Single-class minimax linear descriptor.

The data is a random variable with sample mean ybar and covariance Sigma.
The linear score direction w = Sigma^-1 ybar / (ybar^T Sigma^-1 ybar)
minimizes w^T Sigma w subject to w^T ybar = 1, i.e. it is the
worst-case-optimal hyperplane separating the data from the origin.  The
raw score w^T x is squashed through a logistic centered at the empirical
quantile rejecting the target fraction of training samples.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigurationError
from .base import regularize_covariance


@dataclass
class MpmModel:
    w: np.ndarray
    offset: float  # raw-score rejection quantile
    mean: np.ndarray
    ridge: float

    def raw_score(self, X: np.ndarray) -> np.ndarray:
        return np.atleast_2d(X) @ self.w

    def score(self, X: np.ndarray) -> np.ndarray:
        return 1.0 / (1.0 + np.exp(-(self.raw_score(X) - self.offset)))


def fit_mpm(rows: np.ndarray, rejection: float = 0.025) -> MpmModel:
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    n, d = rows.shape
    if n <= d:
        raise ConfigurationError(f"need more samples ({n}) than dimensions ({d})")
    mean = rows.mean(axis=0)
    diff = rows - mean
    cov = np.atleast_2d(diff.T @ diff / (n - 1))
    cov, ridge = regularize_covariance(cov)
    sigma_inv_mean = np.linalg.solve(cov, mean)
    denom = float(mean @ sigma_inv_mean)
    if abs(denom) < 1e-30:
        raise ConfigurationError("training mean is at the origin; direction undefined")
    w = sigma_inv_mean / denom
    raw = rows @ w
    offset = float(np.quantile(raw, rejection))
    return MpmModel(w=w, offset=offset, mean=mean, ridge=ridge)

"""Support vector data description: minimum-volume hypersphere in kernel space.

Dual problem:  max  sum_i a_i K(x_i,x_i) - sum_ij a_i a_j K(x_i,x_j)
               s.t. 0 <= a_i <= C,  sum_i a_i = 1

solved with pairwise (SMO-style) updates that preserve the simplex
constraint.  Default kernel is Gaussian RBF with the median pairwise
training distance as bandwidth.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist, pdist

from ..errors import ConfigurationError, RoadOccError
from .base import distance_to_score

KKT_TOL = 1e-6
MAX_ITER = 200_000
BOX_EDGE_TOL = 1e-8


@dataclass
class SvddModel:
    support: np.ndarray  # (N, d) training rows
    alpha: np.ndarray  # (N,)
    C: float
    kernel: str  # "rbf" or "linear"
    bandwidth: float  # RBF length scale (median heuristic)
    center_term: float  # alpha^T K alpha
    radius_sq: float
    kkt_violation: float

    def _kernel_cross(self, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(K(x, support_i) matrix, K(x,x) diagonal)."""
        X = np.atleast_2d(X)
        if self.kernel == "linear":
            return X @ self.support.T, (X**2).sum(axis=1)
        sq = cdist(X, self.support, "sqeuclidean")
        return np.exp(-sq / self.bandwidth**2), np.ones(X.shape[0])

    def sq_distance_to_center(self, X: np.ndarray) -> np.ndarray:
        k_cross, k_diag = self._kernel_cross(X)
        return k_diag - 2.0 * (k_cross @ self.alpha) + self.center_term

    def score(self, X: np.ndarray) -> np.ndarray:
        excess = np.clip(self.sq_distance_to_center(X) - self.radius_sq, 0.0, None)
        return distance_to_score(excess)


def _gram(rows: np.ndarray, kernel: str, bandwidth: float) -> np.ndarray:
    if kernel == "linear":
        return rows @ rows.T
    sq = cdist(rows, rows, "sqeuclidean")
    return np.exp(-sq / bandwidth**2)


def fit_svdd(rows: np.ndarray, C: float = 1.0, kernel: str = "rbf",
             tol: float = KKT_TOL, max_iter: int = MAX_ITER) -> SvddModel:
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    n = rows.shape[0]
    if n < 2:
        raise ConfigurationError("SVDD needs at least 2 samples")
    if C <= 1.0 / n:
        raise ConfigurationError(f"C must exceed 1/N = {1.0 / n:.4g}")
    if kernel not in ("rbf", "linear"):
        raise ConfigurationError(f"unknown kernel {kernel!r}")

    bandwidth = 1.0
    if kernel == "rbf":
        med = float(np.median(pdist(rows)))
        bandwidth = med if med > 0 else 1.0

    K = _gram(rows, kernel, bandwidth)
    diag = np.diag(K).copy()
    alpha = np.full(n, 1.0 / n)
    # Gradient of the (minimized) dual alpha^T K alpha - alpha^T diag.
    grad = 2.0 * (K @ alpha) - diag

    violation = np.inf
    up_edge = C - BOX_EDGE_TOL * C
    for _ in range(max_iter):
        grad_up = np.where(alpha < up_edge, grad, np.inf)
        grad_down = np.where(alpha > BOX_EDGE_TOL, grad, -np.inf)
        i = int(np.argmin(grad_up))
        j = int(np.argmax(grad_down))
        if not np.isfinite(grad_up[i]) or not np.isfinite(grad_down[j]):
            violation = 0.0
            break
        violation = grad[j] - grad[i]
        if violation < tol:
            break
        eta = 2.0 * (K[i, i] + K[j, j] - 2.0 * K[i, j])
        step = violation / eta if eta > 1e-15 else np.inf
        step = min(step, C - alpha[i], alpha[j])
        alpha[i] += step
        alpha[j] -= step
        grad += 2.0 * step * (K[:, i] - K[:, j])
    else:
        raise RoadOccError(
            f"SVDD did not converge after {max_iter} updates (KKT violation {violation:.3g})"
        )

    center_term = float(alpha @ K @ alpha)
    d2 = diag - 2.0 * (K @ alpha) + center_term
    unbounded = (alpha > BOX_EDGE_TOL) & (alpha < C - BOX_EDGE_TOL * C)
    if unbounded.any():
        radius_sq = float(np.mean(d2[unbounded]))
    else:
        radius_sq = float(d2[alpha > BOX_EDGE_TOL].max())
    return SvddModel(
        support=rows.copy(),
        alpha=alpha,
        C=C,
        kernel=kernel,
        bandwidth=bandwidth,
        center_term=center_term,
        radius_sq=radius_sq,
        kkt_violation=float(violation),
    )

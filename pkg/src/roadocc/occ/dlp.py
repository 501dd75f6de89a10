"""Linear-programming distance-data description.

A sparse weight vector over training prototypes defines the proximity
function f(x) = sum_i w_i ||x - y_i||.  The weights come from the LP

    minimize    rho + (1/(nu N)) sum_j xi_j
    subject to  f(y_j) <= rho + xi_j        for every training sample j
                sum_i w_i = 1,  w >= 0,  xi >= 0,  rho >= 0

with nu = 0.05 by default.  Only a few weights end up non-zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog
from scipy.spatial.distance import cdist

from ..errors import ConfigurationError, RoadOccError
from .base import distance_to_score


@dataclass
class DlpModel:
    prototypes: np.ndarray  # (N, d)
    weights: np.ndarray  # (N,)
    slacks: np.ndarray  # (N,)
    rho: float
    nu: float

    def proximity(self, X: np.ndarray) -> np.ndarray:
        active = self.weights > 1e-12
        dist = cdist(np.atleast_2d(X), self.prototypes[active])
        return dist @ self.weights[active]

    def score(self, X: np.ndarray) -> np.ndarray:
        return distance_to_score(self.proximity(X))


def fit_dlp(rows: np.ndarray, nu: float = 0.05) -> DlpModel:
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    n = rows.shape[0]
    if not 0.0 < nu <= 1.0:
        raise ConfigurationError("nu must be in (0, 1]")
    D = cdist(rows, rows)

    # Variable layout: [w (n), xi (n), rho].
    c = np.concatenate([np.zeros(n), np.full(n, 1.0 / (nu * n)), [1.0]])
    A_ub = np.hstack([D, -np.eye(n), -np.ones((n, 1))])
    b_ub = np.zeros(n)
    A_eq = np.concatenate([np.ones(n), np.zeros(n), [0.0]])[None, :]
    b_eq = np.array([1.0])
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq,
                  bounds=[(0, None)] * (2 * n + 1), method="highs")
    if not res.success:
        raise RoadOccError(f"distance-description LP failed: {res.message}")
    w = np.clip(res.x[:n], 0.0, None)
    w /= w.sum()
    xi = np.clip(res.x[n : 2 * n], 0.0, None)
    rho = float(res.x[-1])
    return DlpModel(prototypes=rows.copy(), weights=w, slacks=xi, rho=rho, nu=nu)

"""Minimum-spanning-tree descriptor: distance to the nearest tree edge.

A query is scored by the shortest Euclidean distance to any edge segment
of the MST over the training rows; projections falling outside a segment
clamp to the nearer endpoint.  Built with Prim's algorithm (O(N^2), fine
at the ~180-sample scale the pipeline feeds it).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from ..errors import ConfigurationError
from .base import distance_to_score

_CHUNK = 8192


@dataclass
class MstModel:
    rows: np.ndarray  # (N, d)
    edges: np.ndarray  # (N-1, 2) vertex index pairs

    def min_edge_distance(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(X)
        A = self.rows[self.edges[:, 0]]  # (E, d)
        AB = self.rows[self.edges[:, 1]] - A  # (E, d)
        denom = (AB**2).sum(axis=1)
        denom_safe = np.where(denom > 0, denom, 1.0)
        out = np.empty(X.shape[0])
        for start in range(0, X.shape[0], _CHUNK):
            chunk = X[start : start + _CHUNK]
            diff = chunk[:, None, :] - A[None, :, :]  # (M, E, d)
            t = (diff * AB[None, :, :]).sum(axis=2) / denom_safe
            np.clip(t, 0.0, 1.0, out=t)
            resid = diff - t[:, :, None] * AB[None, :, :]
            d2 = (resid**2).sum(axis=2).min(axis=1)
            # Fold in plain vertex distances so the edge distance can never
            # exceed the nearest-vertex distance by rounding in the
            # projection arithmetic.
            d2_vertex = ((chunk[:, None, :] - self.rows[None, :, :]) ** 2).sum(axis=2).min(axis=1)
            out[start : start + _CHUNK] = np.sqrt(np.minimum(d2, d2_vertex))
        return out

    def score(self, X: np.ndarray) -> np.ndarray:
        return distance_to_score(self.min_edge_distance(X))


def fit_mst(rows: np.ndarray) -> MstModel:
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    n = rows.shape[0]
    if n < 2:
        raise ConfigurationError("MST needs at least 2 samples")
    dist = cdist(rows, rows)
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    best_dist = dist[0].copy()
    best_from = np.zeros(n, dtype=int)
    edges = np.empty((n - 1, 2), dtype=int)
    for e in range(n - 1):
        masked = np.where(in_tree, np.inf, best_dist)
        nxt = int(np.argmin(masked))
        edges[e] = (best_from[nxt], nxt)
        in_tree[nxt] = True
        closer = dist[nxt] < best_dist
        best_dist = np.where(closer, dist[nxt], best_dist)
        best_from = np.where(closer, nxt, best_from)
    return MstModel(rows=rows.copy(), edges=edges)

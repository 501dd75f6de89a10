"""Mixture of Gaussians fitted with EM; scored with an unnormalized exponent sum.

The score is sum_n P_n * exp(-(x-mu_n)^T Sigma_n^-1 (x-mu_n)).  With the
weights summing to one this lands in [0,1] without further normalization;
no 1/2 factor and no determinant term are applied since only the ranking
feeds the ROC analysis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigurationError
from .base import regularize_covariance
from .clustering import fit_kmeans

MAX_ITER = 100
TOL = 1e-6
MIN_SAMPLES_PER_COMPONENT = 5
_COND_LIMIT = 1e10


def _logsumexp_rows(log_prob: np.ndarray) -> np.ndarray:
    m = log_prob.max(axis=1)
    return m + np.log(np.exp(log_prob - m[:, None]).sum(axis=1))


def _regularize_batch(covs: np.ndarray) -> np.ndarray:
    """Ridge-stabilize a (k, d, d) covariance stack in one shot."""
    d = covs.shape[-1]
    cond = np.linalg.cond(covs)
    bad = ~np.isfinite(cond) | (cond > _COND_LIMIT)
    if bad.any():
        ridge = 1e-6 * np.trace(covs[bad], axis1=1, axis2=2) / d
        ridge = np.where(ridge > 0.0, ridge, 1e-12)
        covs[bad] += ridge[:, None, None] * np.eye(d)
    return covs


@dataclass
class MixtureModel:
    weights: np.ndarray  # (K,)
    means: np.ndarray  # (K, d)
    covs: np.ndarray  # (K, d, d)
    precisions: np.ndarray  # (K, d, d)
    log_likelihood: float
    n_iter: int

    @property
    def n_components(self) -> int:
        return self.weights.shape[0]

    def score(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(X)
        total = np.zeros(X.shape[0])
        for k in range(self.n_components):
            diff = X - self.means[k]
            msq = np.einsum("ij,jk,ik->i", diff, self.precisions[k], diff)
            total += self.weights[k] * np.exp(-msq)
        return np.clip(total, 0.0, 1.0)

    def n_parameters(self) -> int:
        k, d = self.means.shape
        return (k - 1) + k * d + k * d * (d + 1) // 2


def fit_mog(rows: np.ndarray, n_components: int, seed: int = 0, max_iter: int = MAX_ITER, tol: float = TOL) -> MixtureModel:
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    n, d = rows.shape
    k = int(n_components)
    if n < MIN_SAMPLES_PER_COMPONENT * k:
        raise ConfigurationError(
            f"need at least {MIN_SAMPLES_PER_COMPONENT} samples per component ({n} < {MIN_SAMPLES_PER_COMPONENT * k})"
        )
    rng = np.random.default_rng(seed)

    # k-means initialization (seeded farthest-first inside); a handful of
    # Lloyd iterations is enough to seed EM, which refines from there.
    km = fit_kmeans(rows, k=k, seed=seed, max_iter=10)
    assign = np.argmin(
        ((rows[:, None, :] - km.centers[None, :, :]) ** 2).sum(axis=2), axis=1
    )
    weights = np.full(k, 1.0 / k)
    means = km.centers.copy()
    base_cov = regularize_covariance(np.atleast_2d(np.cov(rows.T) if n > 1 else np.eye(d)))[0]
    covs = np.empty((k, d, d))
    for c in range(k):
        members = rows[assign == c]
        if members.shape[0] >= 2:
            covs[c] = regularize_covariance(np.atleast_2d(np.cov(members.T)))[0]
        else:
            covs[c] = base_cov
        weights[c] = max(members.shape[0], 1) / n
    weights /= weights.sum()

    log_likelihood = -np.inf
    n_iter = 0
    precisions = np.linalg.inv(covs)
    for n_iter in range(1, max_iter + 1):
        # E-step, batched over components.
        diff = rows[None, :, :] - means[:, None, :]  # (k, n, d)
        msq = ((diff @ precisions) * diff).sum(axis=2)
        _, logdet = np.linalg.slogdet(covs)
        log_prob = (
            np.log(weights)[:, None]
            - 0.5 * (msq + d * np.log(2.0 * np.pi) + logdet[:, None])
        ).T
        log_norm = _logsumexp_rows(log_prob)
        resp = np.exp(log_prob - log_norm[:, None])
        new_ll = float(log_norm.sum())

        # M-step
        nk = resp.sum(axis=0)
        collapsed = np.flatnonzero(nk < 1.0)
        for c in collapsed:
            # Collapsed component: re-seed at the sample farthest from
            # every current mean.
            min_dist = np.min(
                ((rows[:, None, :] - means[None, :, :]) ** 2).sum(axis=2), axis=1
            )
            far = int(np.argmax(min_dist))
            means[c] = rows[far]
            nk[c] = 1.0
            resp[:, c] = 0.0
            resp[far, c] = 1.0
        keep = np.setdiff1d(np.arange(k), collapsed)
        means[keep] = (resp.T @ rows)[keep] / nk[keep, None]
        diff = rows[None, :, :] - means[:, None, :]
        weighted = diff * resp.T[:, :, None]
        covs = _regularize_batch(weighted.transpose(0, 2, 1) @ diff / nk[:, None, None])
        if collapsed.size:
            covs[collapsed] = base_cov
        weights = nk / nk.sum()
        precisions = np.linalg.inv(covs)

        # Relative tolerance: the total log-likelihood scales with the
        # sample count, so an absolute cutoff would never trigger.
        if np.isfinite(log_likelihood) and abs(new_ll - log_likelihood) < tol * (1.0 + abs(new_ll)):
            log_likelihood = new_ll
            break
        log_likelihood = new_ll

    _ = rng  # reserved for future stochastic restarts
    return MixtureModel(
        weights=weights,
        means=means,
        covs=covs,
        precisions=precisions,
        log_likelihood=log_likelihood,
        n_iter=n_iter,
    )


def bic(model: MixtureModel, n_samples: int) -> float:
    return -2.0 * model.log_likelihood + model.n_parameters() * np.log(n_samples)


def fit_mog_opt(rows: np.ndarray, seed: int = 0, candidates=range(1, 6)) -> MixtureModel:
    """Pick the component count in ``candidates`` minimizing BIC on the training set."""
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    best = None
    best_bic = np.inf
    for k in candidates:
        if rows.shape[0] < MIN_SAMPLES_PER_COMPONENT * k:
            continue
        model = fit_mog(rows, n_components=k, seed=seed)
        score = bic(model, rows.shape[0])
        if score < best_bic:
            best, best_bic = model, score
    if best is None:
        raise ConfigurationError("too few samples for any candidate component count")
    return best

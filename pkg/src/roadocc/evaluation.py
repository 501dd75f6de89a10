"""ROC construction, AUC, EER and cross-image curve averaging.

The threshold sweep visits every distinct score value, labeling road by
strict inequality (score > threshold), consistent with the binarization
rule.  AUC comes from trapezoidal integration and equals the pairwise
concordance probability with ties counted 1/2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingleClassError

FPR_GRID = np.linspace(0.0, 1.0, 1001)


@dataclass
class RocCurve:
    fpr: np.ndarray  # non-decreasing, starts at 0, ends at 1
    tpr: np.ndarray
    auc: float
    eer: float


def _trapezoid_auc(fpr: np.ndarray, tpr: np.ndarray) -> float:
    return float(np.trapezoid(tpr, fpr))


def _equal_error_rate(fpr: np.ndarray, tpr: np.ndarray) -> float:
    """Intersection of the curve with (1 - TPR) = FPR, linearly interpolated."""
    g = fpr + tpr - 1.0  # non-decreasing along the curve, from -1 to +1
    idx = int(np.searchsorted(g, 0.0))
    if idx == 0:
        return float(fpr[0])
    if idx >= len(g):
        return float(fpr[-1])
    g0, g1 = g[idx - 1], g[idx]
    if g1 == g0:
        return float(fpr[idx])
    t = -g0 / (g1 - g0)
    return float(fpr[idx - 1] + t * (fpr[idx] - fpr[idx - 1]))


def make_curve(fpr: np.ndarray, tpr: np.ndarray) -> RocCurve:
    fpr = np.asarray(fpr, dtype=float)
    tpr = np.asarray(tpr, dtype=float)
    return RocCurve(fpr=fpr, tpr=tpr, auc=_trapezoid_auc(fpr, tpr), eer=_equal_error_rate(fpr, tpr))


def roc_curve(scores: np.ndarray, truth: np.ndarray) -> RocCurve:
    """Exact ROC over all distinct score thresholds.

    ``truth`` is boolean (road = positive); shapes must match.
    """
    scores = np.asarray(scores, dtype=float).ravel()
    truth = np.asarray(truth, dtype=bool).ravel()
    if scores.shape != truth.shape:
        raise SingleClassError(f"shape mismatch: {scores.shape} vs {truth.shape}")
    n_pos = int(truth.sum())
    n_neg = truth.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise SingleClassError("ROC needs at least one positive and one negative pixel")

    order = np.argsort(-scores, kind="stable")
    sorted_scores = scores[order]
    sorted_truth = truth[order]
    # Cumulative counts at the end of each tie group: threshold just below
    # that score admits exactly these pixels (strict inequality).
    distinct = np.flatnonzero(np.diff(sorted_scores)) if scores.size > 1 else np.array([], int)
    ends = np.concatenate([distinct, [scores.size - 1]])
    tp = np.cumsum(sorted_truth)[ends]
    fp = (ends + 1) - tp
    fpr = np.concatenate([[0.0], fp / n_neg])
    tpr = np.concatenate([[0.0], tp / n_pos])
    return make_curve(fpr, tpr)


def concordance_auc(scores: np.ndarray, truth: np.ndarray) -> float:
    """Brute-force pairwise oracle: P(pos > neg) + 0.5 P(pos == neg)."""
    scores = np.asarray(scores, dtype=float).ravel()
    truth = np.asarray(truth, dtype=bool).ravel()
    pos = scores[truth]
    neg = scores[~truth]
    gt = (pos[:, None] > neg[None, :]).sum()
    eq = (pos[:, None] == neg[None, :]).sum()
    return float((gt + 0.5 * eq) / (pos.size * neg.size))


def _upper_envelope(curve: RocCurve) -> tuple[np.ndarray, np.ndarray]:
    """Max TPR per distinct FPR, for interpolation along the FPR axis."""
    fpr, idx = np.unique(curve.fpr, return_index=True)
    # points are sorted by (fpr, tpr); the last point of each fpr group has max tpr
    tpr = np.maximum.reduceat(curve.tpr, idx)
    return fpr, tpr


def average_roc(curves: list[RocCurve], grid: np.ndarray = FPR_GRID) -> RocCurve:
    """Vertical averaging: mean TPR at fixed FPR grid points."""
    if not curves:
        raise SingleClassError("need at least one curve to average")
    tprs = np.zeros((len(curves), grid.size))
    for i, curve in enumerate(curves):
        fpr, tpr = _upper_envelope(curve)
        tprs[i] = np.interp(grid, fpr, tpr)
    return make_curve(grid, tprs.mean(axis=0))


def export_curve_csv(curve: RocCurve, path) -> None:
    """CSV with an fpr,tpr header, 9 significant digits, and a summary line."""
    with open(path, "w") as fh:
        fh.write("fpr,tpr\n")
        for f, t in zip(curve.fpr, curve.tpr):
            fh.write(f"{f:.9g},{t:.9g}\n")
        fh.write(f"auc={curve.auc:.9g},eer={curve.eer:.9g}\n")

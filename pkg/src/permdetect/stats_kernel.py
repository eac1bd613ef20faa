"""Group means, pooled and shrinkage covariance, symmetric solves, principal axes.

The public functions take a :class:`~permdetect.model.LabeledDataset`. The
underscore-prefixed array versions are used in permutation loops, where the
features stay fixed and only the labels move.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .exceptions import DegenerateClass, NotSymmetric
from .model import LabeledDataset

SINGULAR_RTOL = 1e-10


@dataclass(frozen=True)
class GroupSummary:
    """Per-class means; ``diff = mean1 - mean0``."""

    mean0: np.ndarray
    mean1: np.ndarray
    diff: np.ndarray
    n0: int
    n1: int


@dataclass(frozen=True)
class CovarianceEstimate:
    matrix: np.ndarray
    kind: str  # pooled | shrunk | diagonal | oracle
    shrinkage_weight: Optional[float] = None


def _class_means(X, y):
    mask = y.astype(bool)
    # np.mean over rows: numpy pairwise summation in row order within each class
    return X[~mask].mean(axis=0), X[mask].mean(axis=0)


def _residuals(X, y):
    """Rows centred by their own class mean, plus the two means."""
    mask = y.astype(bool)
    m0, m1 = _class_means(X, y)
    Z = X - np.where(mask[:, None], m1, m0)
    return Z, m0, m1


def group_summary(ds: LabeledDataset) -> GroupSummary:
    m0, m1 = _class_means(ds.features, ds.labels)
    return GroupSummary(m0, m1, m1 - m0, ds.n0, ds.n1)


def _pooled_from_residuals(Z):
    n = Z.shape[0]
    S = Z.T @ Z / (n - 2)
    return 0.5 * (S + S.T)


def pooled_covariance(ds: LabeledDataset) -> CovarianceEstimate:
    """``[(n0-1) S0 + (n1-1) S1] / (n-2)`` with per-class divisor ``n_j - 1``."""
    if ds.n - 2 <= 0:
        raise DegenerateClass("pooled covariance needs n >= 3")
    Z, _, _ = _residuals(ds.features, ds.labels)
    return CovarianceEstimate(_pooled_from_residuals(Z), "pooled")


def _shrinkage_intensity(Z):
    """Analytic optimal weight toward diag(S) from pooled within-class residuals.

    With ``w_kij = z_ki z_kj`` and ``S = sum_k w_k / (n-2)``, the variance of each
    entry is estimated as ``n / ((n-2)^2 (n-1)) * sum_k (w_kij - mean_k w_kij)^2``;
    the weight is the ratio of summed off-diagonal variances to summed squared
    off-diagonal covariances, clamped to [0, 1].
    """
    n = Z.shape[0]
    wbar = Z.T @ Z / n
    Z2 = Z * Z
    ss = Z2.T @ Z2 - n * wbar * wbar  # sum_k (w_kij - wbar_ij)^2
    var_s = ss * (n / ((n - 2) ** 2 * (n - 1)))
    S = wbar * (n / (n - 2))
    off = ~np.eye(Z.shape[1], dtype=bool)
    denom = np.sum(S[off] ** 2)
    if denom <= 0.0:
        return 1.0, S
    lam = float(np.sum(var_s[off]) / denom)
    return min(max(lam, 0.0), 1.0), S


def _shrunk_from_residuals(Z):
    lam, S = _shrinkage_intensity(Z)
    S = 0.5 * (S + S.T)
    shrunk = (1.0 - lam) * S
    np.fill_diagonal(shrunk, np.diag(S))
    return shrunk, lam


def shrink_covariance(ds: LabeledDataset) -> CovarianceEstimate:
    """Shrink the pooled covariance toward its own diagonal.

    Returns ``lam * diag(S) + (1 - lam) * S``: variances are kept, covariances are
    scaled by ``1 - lam``.
    """
    Z, _, _ = _residuals(ds.features, ds.labels)
    shrunk, lam = _shrunk_from_residuals(Z)
    return CovarianceEstimate(shrunk, "shrunk", lam)


def diagonal_covariance(ds: LabeledDataset) -> CovarianceEstimate:
    S = pooled_covariance(ds).matrix
    return CovarianceEstimate(np.diag(np.diag(S)), "diagonal")


def _check_symmetric(M, rtol=1e-12):
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise NotSymmetric(f"expected a square matrix, got shape {M.shape}")
    scale = max(1.0, float(np.max(np.abs(M)))) if M.size else 1.0
    if np.max(np.abs(M - M.T), initial=0.0) > rtol * scale:
        raise NotSymmetric("matrix is not symmetric")
    return M


class Solution(NamedTuple):
    x: np.ndarray
    pseudo_inverse_used: bool


def solve_spd(M, v) -> Solution:
    """Solve ``M x = v`` for symmetric ``M``.

    Uses the eigendecomposition of ``M``. Eigenvalues at or below
    ``1e-10 * max|eigenvalue|`` are treated as zero; in that case the
    minimum-norm least-squares solution is returned and flagged.
    """
    M = _check_symmetric(M)
    v = np.asarray(v, dtype=np.float64)
    vals, vecs = np.linalg.eigh(M)
    top = np.max(np.abs(vals)) if vals.size else 0.0
    keep = np.abs(vals) > SINGULAR_RTOL * top
    coef = vecs.T @ v
    x = vecs[:, keep] @ (coef[keep] / vals[keep])
    return Solution(x, not bool(np.all(keep)))


class PrincipalAxes(NamedTuple):
    values: np.ndarray   # descending
    vectors: np.ndarray  # columns, unit norm


def principal_axes(M) -> PrincipalAxes:
    """Eigenpairs of a symmetric matrix, largest eigenvalue first.

    Each eigenvector is signed so that its first coordinate with magnitude above
    1e-12 is positive.
    """
    M = _check_symmetric(M)
    vals, vecs = np.linalg.eigh(M)
    vals = vals[::-1].copy()
    vecs = vecs[:, ::-1].copy()
    for j in range(vecs.shape[1]):
        nz = np.flatnonzero(np.abs(vecs[:, j]) > 1e-12)
        if nz.size and vecs[nz[0], j] < 0:
            vecs[:, j] = -vecs[:, j]
    return PrincipalAxes(vals, vecs)

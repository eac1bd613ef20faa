"""Linear two-class classifiers: LDA and its regularised variants, linear SVM.

All families produce a :class:`LinearModel` that predicts class 1 when
``w.x + b >= 0``. The discriminant families share the form
``w = M^-1 d``, ``b = -w.(mean0 + mean1)/2 + ln(n1/n0)`` and differ only in the
covariance surrogate ``M``:

- ``lda``: pooled covariance ``S``
- ``dlda``: ``diag(S)``
- ``sdlda``: ``diag(S)`` with variances shrunk toward their mean
- ``hdrda``: ``(1 - mix) S + mix (tr S / p) I``

When ``M`` is singular the direction is the limit of ``(M + eps I)^-1 d`` as
``eps -> 0`` (rescaled): the component of ``d`` outside the range of ``M`` if it is
non-zero, otherwise the minimum-norm solution ``M^+ d``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import svm as _svm
from .exceptions import DimensionMismatch, SingleClassTrainingSet
from .model import LabeledDataset, RngStream
from .stats_kernel import SINGULAR_RTOL, _residuals

FAMILIES = ("lda", "dlda", "sdlda", "hdrda", "linear_svm")
_NULL_RTOL = 1e-8


@dataclass(frozen=True)
class ClassifierSpec:
    family: str
    cost: Optional[float] = None
    hdrda_mix: float = 0.5
    tol: float = _svm.DEFAULT_TOL
    max_epochs: int = _svm.DEFAULT_MAX_EPOCHS

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown classifier family {self.family!r}; choose from {FAMILIES}")
        if self.family == "linear_svm":
            if self.cost is None or not self.cost > 0:
                raise ValueError("linear_svm needs a positive cost")
        if not 0.0 <= self.hdrda_mix <= 1.0:
            raise ValueError("hdrda_mix must lie in [0, 1]")


@dataclass(frozen=True, eq=False)
class LinearModel:
    weights: np.ndarray
    bias: float
    trained_on: tuple = ()  # (n, p, n0, n1)
    converged: bool = True
    pseudo_inverse_used: bool = False

    def decision(self, X):
        return np.asarray(X, dtype=np.float64) @ self.weights + self.bias


def constant_model(p: int, label: int) -> LinearModel:
    """Model that predicts ``label`` everywhere."""
    return LinearModel(np.zeros(p), 1.0 if label == 1 else -1.0)


def predict(model: LinearModel, x) -> int:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != model.weights.shape:
        raise DimensionMismatch(f"model has p={model.weights.shape[0]}, x has shape {x.shape}")
    return int(float(x @ model.weights) + model.bias >= 0.0)


def predict_many(model: LinearModel, X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.weights.shape[0]:
        raise DimensionMismatch(f"model has p={model.weights.shape[0]}, X has shape {X.shape}")
    return (X @ model.weights + model.bias >= 0.0).astype(np.int8)


def _direction_from_residuals(Z, d, dof, family, mix):
    """Solve ``M w = d`` in the ridge-limit sense, M built from residuals Z."""
    p = Z.shape[1]
    if family in ("dlda", "sdlda"):
        v = np.einsum("ij,ij->j", Z, Z) / dof
        if family == "sdlda":
            v = _shrink_variances(Z, v, dof)
        return _diag_direction(v, d)

    U, s, Vt = np.linalg.svd(Z, full_matrices=False)
    ev = s * s / dof
    if family == "hdrda":
        tau = ev.sum() / p
        ridge = mix * tau
        ev = (1.0 - mix) * ev + ridge
        if ridge > 0.0:
            coef = Vt @ d
            w = Vt.T @ (coef / ev) + (d - Vt.T @ coef) / ridge
            return w, False
        # mix == 0 or S == 0: fall through to the plain rule
    top = ev.max() if ev.size else 0.0
    keep = ev > SINGULAR_RTOL * top if top > 0 else np.zeros(ev.shape, dtype=bool)
    V = Vt[keep].T
    coef = V.T @ d
    null_part = d - V @ coef
    full_rank = V.shape[1] == p
    if not full_rank and np.linalg.norm(null_part) > _NULL_RTOL * np.linalg.norm(d):
        return null_part, True
    return V @ (coef / ev[keep]), not full_rank


def _diag_direction(v, d):
    top = v.max()
    ok = v > SINGULAR_RTOL * top if top > 0 else np.zeros(v.shape, dtype=bool)
    if ok.all():
        return d / v, False
    null_part = np.where(ok, 0.0, d)
    if np.linalg.norm(null_part) > _NULL_RTOL * np.linalg.norm(d):
        return null_part, True
    return np.where(ok, d / np.where(ok, v, 1.0), 0.0), True


def _shrink_variances(Z, v, dof):
    """Shrink per-coordinate variances toward their mean with the analytic weight.

    weight = sum_j Var(v_j) / sum_j (v_j - vbar)^2, clamped to [0, 1], with
    ``Var(v_j)`` estimated from the squared residuals exactly as for the
    off-diagonal entries in :func:`permdetect.stats_kernel.shrink_covariance`.
    """
    n = Z.shape[0]
    Z2 = Z * Z
    m = Z2.mean(axis=0)
    var_v = np.sum((Z2 - m) ** 2, axis=0) * (n / (dof * dof * (n - 1)))
    vbar = v.mean()
    denom = float(np.sum((v - vbar) ** 2))
    lam = 1.0 if denom <= 0.0 else min(max(float(var_v.sum()) / denom, 0.0), 1.0)
    return (1.0 - lam) * v + lam * vbar


def _fit_arrays(X, y, spec: ClassifierSpec):
    """Return ``(w, b, converged, pseudo_inverse_used)`` for raw arrays."""
    n = y.shape[0]
    n1 = int(y.sum())
    n0 = n - n1
    if n0 == 0 or n1 == 0:
        raise SingleClassTrainingSet(f"training set has n0={n0}, n1={n1}")
    if spec.family == "linear_svm":
        Xa = _svm.augment(X)
        ypm = 2.0 * y - 1.0
        w, _, _, worst = _svm.dual_cd(Xa, ypm, float(spec.cost), spec.tol, spec.max_epochs)
        return w[:-1], float(w[-1]), bool(worst < spec.tol), False
    Z, m0, m1 = _residuals(X, y)
    dof = max(n - 2, 1)
    w, pinv = _direction_from_residuals(Z, m1 - m0, dof, spec.family, spec.hdrda_mix)
    b = -float(w @ (m0 + m1)) / 2.0 + float(np.log(n1 / n0))
    return w, b, True, pinv


def fit(ds: LabeledDataset, spec: ClassifierSpec, rng: RngStream | None = None) -> LinearModel:
    """Train a classifier of family ``spec.family`` on ``ds``.

    ``rng`` is accepted for interface uniformity; every family implemented here is
    deterministic given the data.

    Raises
    ------
    SingleClassTrainingSet
        If ``ds`` holds only one class (possible for datasets built by resampling).
    """
    w, b, converged, pinv = _fit_arrays(ds.features, ds.labels, spec)
    return LinearModel(w, b, (ds.n, ds.p, ds.n0, ds.n1), converged, pinv)


def svm_solution(ds: LabeledDataset, cost: float, tol=_svm.DEFAULT_TOL, max_epochs=_svm.DEFAULT_MAX_EPOCHS):
    """Full dual solution: ``(w_augmented, alpha, epochs, max_violation)``."""
    Xa = _svm.augment(ds.features)
    ypm = 2.0 * ds.labels.astype(np.float64) - 1.0
    return _svm.dual_cd(Xa, ypm, float(cost), tol, max_epochs)

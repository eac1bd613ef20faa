"""Two-sample location statistics as one weighted quadratic form.

Every statistic here is ``(n0 * n1 / n) * d' W d`` with ``d = mean1 - mean0``; only
the weight matrix ``W`` changes:

=================  =============================================
name               W
=================  =============================================
oracle             inverse of the generating covariance
hotelling          inverse (pseudo-inverse if singular) of pooled S
hotelling_shrink   inverse of S shrunk toward diag(S)
goeman             identity
sd                 diag(S)^-1 (zero-variance coordinates dropped)
=================  =============================================

``goeman`` and ``sd`` are the monotone cores of the corresponding published
statistics: for fixed group sizes the published forms are strictly increasing
functions of these quadratic forms, so permutation p-values and tie counts are
identical. All statistics reject for large values.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .exceptions import MissingOracleSigma, NotSymmetric
from .model import LabeledDataset
from .stats_kernel import (
    SINGULAR_RTOL,
    _check_symmetric,
    _residuals,
    _shrunk_from_residuals,
)

LOCATION_NAMES = ("oracle", "hotelling", "hotelling_shrink", "goeman", "sd")


@dataclass(frozen=True, eq=False)
class LocationStatSpec:
    name: str
    oracle_sigma: Optional[np.ndarray] = None
    _precision: Optional[np.ndarray] = field(default=None, init=False, repr=False)

    def __post_init__(self):
        if self.name not in LOCATION_NAMES:
            raise ValueError(f"unknown location statistic {self.name!r}; choose from {LOCATION_NAMES}")
        if self.name == "oracle":
            if self.oracle_sigma is None:
                raise MissingOracleSigma("the oracle statistic needs the generating covariance")
            sigma = _check_symmetric(self.oracle_sigma)
            try:
                L = np.linalg.cholesky(sigma)
            except np.linalg.LinAlgError:
                raise NotSymmetric("oracle_sigma must be symmetric positive definite") from None
            Linv = np.linalg.inv(L)
            object.__setattr__(self, "oracle_sigma", sigma)
            object.__setattr__(self, "_precision", Linv.T @ Linv)

    @property
    def precision(self):
        return self._precision


class LocationValue(float):
    """A float that also remembers which numerical fallbacks were taken."""

    pseudo_inverse_used: bool = False
    zero_variance_coordinates: int = 0


def _quadratic_value(X, y, spec: LocationStatSpec):
    """Statistic value and fallback flags for raw arrays."""
    n = y.shape[0]
    n1 = int(y.sum())
    n0 = n - n1
    scale = n0 * n1 / n
    name = spec.name
    if name in ("goeman", "oracle"):
        mask = y.astype(bool)
        d = X[mask].mean(axis=0) - X[~mask].mean(axis=0)
        if name == "goeman":
            return scale * float(d @ d), False, 0
        return scale * float(d @ spec.precision @ d), False, 0

    Z, m0, m1 = _residuals(X, y)
    d = m1 - m0
    if name == "sd":
        var = np.einsum("ij,ij->j", Z, Z) / (n - 2)
        ok = var > 0.0
        dropped = int(np.count_nonzero(~ok))
        return scale * float(np.sum(d[ok] ** 2 / var[ok])), False, dropped

    if name == "hotelling":
        S = Z.T @ Z / (n - 2)
        S = 0.5 * (S + S.T)
    else:
        S, _ = _shrunk_from_residuals(Z)
    vals, vecs = np.linalg.eigh(S)
    top = np.max(np.abs(vals))
    keep = np.abs(vals) > SINGULAR_RTOL * top if top > 0 else np.zeros_like(vals, dtype=bool)
    coef = vecs.T @ d
    value = float(np.sum(coef[keep] ** 2 / vals[keep]))
    return scale * value, not bool(np.all(keep)), 0


def location_statistic(ds: LabeledDataset, spec: LocationStatSpec) -> LocationValue:
    """Evaluate one location statistic on ``ds``.

    The returned :class:`LocationValue` behaves as a float; its attributes
    ``pseudo_inverse_used`` (hotelling variants on singular covariance) and
    ``zero_variance_coordinates`` (sd only) report the fallbacks described in the
    module docstring.
    """
    value, pinv, dropped = _quadratic_value(ds.features, ds.labels, spec)
    out = LocationValue(value)
    out.pseudo_inverse_used = pinv
    out.zero_variance_coordinates = dropped
    return out


def goeman_equivalence_check(ds: LabeledDataset) -> tuple[float, float]:
    """``(goeman statistic, (n0 n1 / n) * |d|^2)`` computed along separate paths."""
    stat = float(location_statistic(ds, LocationStatSpec("goeman")))
    X, y = ds.features, ds.labels
    d = np.zeros(ds.p)
    # explicit per-row accumulation, independent of the vectorised path
    for i in range(ds.n):
        if y[i] == 1:
            d += X[i] / ds.n1
        else:
            d -= X[i] / ds.n0
    return stat, ds.n0 * ds.n1 / ds.n * float(np.dot(d, d))

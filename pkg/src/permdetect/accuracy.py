"""Accuracy estimators: resubstitution, V-fold cross-validation, leave-one-out bootstrap.

Degenerate resamples are handled so that every estimator is defined for every
labelling:

* a V-fold training complement with a single class yields a model predicting
  that class everywhere;
* a bootstrap sample with a single class is redrawn (up to 100 times, after which
  the constant model for its class is used);
* bootstrap samples whose holdout set is empty are skipped.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classifiers import ClassifierSpec, _fit_arrays
from .exceptions import AllHoldoutsEmpty, SingleClassTrainingSet, TooManyFolds
from .model import LabeledDataset, RngStream, as_stream

MAX_BOOTSTRAP_REDRAWS = 100


@dataclass(frozen=True, eq=False)
class FoldAssignment:
    """``fold_of[i]`` is the fold (0 .. V-1) holding observation ``i``."""

    fold_of: np.ndarray
    V: int
    balanced: bool

    def sizes(self):
        return np.bincount(self.fold_of, minlength=self.V)


@dataclass(frozen=True, eq=False)
class BootstrapPlan:
    samples: np.ndarray  # (B, n) indices drawn with replacement
    holdout_of: tuple    # per-sample sorted index arrays not in the sample


@dataclass(frozen=True)
class AccuracyEstimate:
    value: float
    estimator: str  # resub | vfold | bloo
    support: int    # number of prediction events averaged


def _assign_folds(y, V, balanced, gen):
    n = y.shape[0]
    if balanced:
        idx0 = np.flatnonzero(y == 0)
        idx1 = np.flatnonzero(y == 1)
        order = np.concatenate([gen.permutation(idx0), gen.permutation(idx1)])
    else:
        order = gen.permutation(n)
    relabel = gen.permutation(V)
    fold_of = np.empty(n, dtype=np.intp)
    fold_of[order] = relabel[np.arange(n) % V]
    return fold_of


def make_folds(ds: LabeledDataset, V: int, balanced: bool, rng) -> FoldAssignment:
    """Random assignment of the observations to ``V`` folds.

    Fold sizes differ by at most one. With ``balanced=True`` the class counts per
    fold also differ by at most one within each class (stratified folding).
    """
    if V < 2 or V > ds.n:
        raise TooManyFolds(f"need 2 <= V <= n={ds.n}, got V={V}")
    gen = as_stream(rng).generator()
    return FoldAssignment(_assign_folds(ds.labels, V, balanced, gen), V, balanced)


def _fold_model_predictions(X, y, train, test, spec):
    ytr = y[train]
    try:
        w, b, _, _ = _fit_arrays(X[train], ytr, spec)
    except SingleClassTrainingSet:
        return np.full(test.shape[0], ytr[0], dtype=np.int8)
    return (X[test] @ w + b >= 0.0).astype(np.int8)


def _resub(X, y, spec):
    w, b, _, _ = _fit_arrays(X, y, spec)
    pred = (X @ w + b >= 0.0)
    return float(np.mean(pred == y.astype(bool)))


def _vfold(X, y, spec, fold_of, V):
    total = 0.0
    for v in range(V):
        test = fold_of == v
        pred = _fold_model_predictions(X, y, ~test, test, spec)
        total += float(np.mean(pred == y[test]))
    return total / V


def _bootstrap_sample(y, gen):
    n = y.shape[0]
    for _ in range(MAX_BOOTSTRAP_REDRAWS + 1):
        idx = gen.integers(0, n, size=n)
        s = int(y[idx].sum())
        if 0 < s < n:
            return idx, True
    return idx, False


def _bloo(X, y, spec, B, gen):
    n = y.shape[0]
    total = 0.0
    used = 0
    support = 0
    for _ in range(B):
        idx, trainable = _bootstrap_sample(y, gen)
        inbag = np.zeros(n, dtype=bool)
        inbag[idx] = True
        hold = ~inbag
        h = int(hold.sum())
        if h == 0:
            continue
        if trainable:
            w, b, _, _ = _fit_arrays(X[idx], y[idx], spec)
            pred = (X[hold] @ w + b >= 0.0).astype(np.int8)
        else:
            pred = np.full(h, y[idx[0]], dtype=np.int8)
        total += float(np.mean(pred == y[hold]))
        used += 1
        support += h
    if used == 0:
        raise AllHoldoutsEmpty(f"all {B} bootstrap samples contained every observation")
    return total / used, support


def resub_accuracy(ds: LabeledDataset, spec: ClassifierSpec, rng=None) -> AccuracyEstimate:
    """Fraction of training observations the fitted model classifies correctly."""
    return AccuracyEstimate(_resub(ds.features, ds.labels, spec), "resub", ds.n)


def vfold_accuracy(ds: LabeledDataset, spec: ClassifierSpec, folds: FoldAssignment,
                   rng=None) -> AccuracyEstimate:
    """Mean over folds of the per-fold accuracy (not the pooled proportion)."""
    if folds.fold_of.shape[0] != ds.n:
        raise ValueError("fold assignment does not match the dataset size")
    value = _vfold(ds.features, ds.labels, spec, folds.fold_of, folds.V)
    return AccuracyEstimate(value, "vfold", ds.n)


def make_bootstrap_plan(ds: LabeledDataset, B: int, rng) -> BootstrapPlan:
    """Draw ``B`` bootstrap index samples, redrawing single-class samples.

    This is the same draw sequence :func:`bloo_accuracy` consumes for a given
    stream, so a plan can be inspected alongside the estimate it produced.
    """
    gen = as_stream(rng).generator()
    samples = np.empty((B, ds.n), dtype=np.intp)
    for b in range(B):
        samples[b], _ = _bootstrap_sample(ds.labels, gen)
    holdouts = tuple(np.setdiff1d(np.arange(ds.n), s) for s in samples)
    return BootstrapPlan(samples, holdouts)


def bloo_accuracy(ds: LabeledDataset, spec: ClassifierSpec, B: int, rng) -> AccuracyEstimate:
    """Leave-one-out bootstrap accuracy.

    Averages, over the ``B`` bootstrap samples with a non-empty holdout, the
    accuracy on the observations left out of that sample of a model trained on it.
    """
    if B < 1:
        raise ValueError("B must be at least 1")
    gen = as_stream(rng).generator()
    value, support = _bloo(ds.features, ds.labels, spec, B, gen)
    return AccuracyEstimate(value, "bloo", support)

"""Label-permutation tests with optional refolding and randomized tie-breaking.

Stream layout below a test stream ``s``:

* ``s.child(0, k)`` draws the k-th label permutation (k = 0 .. r-1);
* ``s.child(1, key, 0)`` seeds the folds / bootstrap draws of the observed statistic,
  ``s.child(1, key, k + 1)`` those of permutation k (``key`` is the statistic's
  stable id);
* ``s.child(2, key)`` supplies the uniform variate used for tie-breaking.

All statistics evaluated in one call share the same permutations, so their
decisions are paired.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .model import LabeledDataset, RngStream, TestDecision, as_stream
from .statistics import StatisticSpec

DEFAULT_PERMUTATIONS = 300
SIGNIFICANT_DIGITS = 12


class RefoldPolicy(str, enum.Enum):
    REFOLD = "refold_per_permutation"
    FIXED = "fixed_folds"


class PValueMode(str, enum.Enum):
    PAPER = "paper"      # (greater + equal) / r
    ADD_ONE = "add_one"  # (greater + equal + 1) / (r + 1)


@dataclass(frozen=True, eq=False)
class PermutationReport:
    observed: float
    r: int
    greater: int
    equal: int
    null: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def p_value_paper(self) -> float:
        return (self.greater + self.equal) / self.r

    @property
    def p_value_add_one(self) -> float:
        return (self.greater + self.equal + 1) / (self.r + 1)

    def p_value(self, mode="paper") -> float:
        return self.p_value_paper if PValueMode(mode) is PValueMode.PAPER else self.p_value_add_one

    @property
    def less(self) -> int:
        return self.r - self.greater - self.equal


def canonical(values):
    """Round to 12 significant digits so that equal statistics compare equal."""
    a = np.asarray(values, dtype=np.float64)
    out = np.zeros_like(a)
    nz = (a != 0) & np.isfinite(a)
    if np.any(nz):
        mag = np.floor(np.log10(np.abs(a[nz])))
        scale = 10.0 ** (SIGNIFICANT_DIGITS - 1 - mag)
        out[nz] = np.round(a[nz] * scale) / scale
    out[~np.isfinite(a)] = a[~np.isfinite(a)]
    return out if out.ndim else float(out)


def draw_permutations(n: int, r: int, stream: RngStream) -> np.ndarray:
    perms = np.empty((r, n), dtype=np.intp)
    for k in range(r):
        perms[k] = stream.child(0, k).generator().permutation(n)
    return perms


def _count(observed, null):
    obs = canonical(observed)
    nul = canonical(null)
    return int(np.count_nonzero(nul > obs)), int(np.count_nonzero(nul == obs))


def permutation_test_many(ds: LabeledDataset, statistics: Sequence[StatisticSpec],
                          r: int = DEFAULT_PERMUTATIONS, policy=RefoldPolicy.REFOLD,
                          rng=None, keep_null: bool = False) -> dict[str, PermutationReport]:
    """Permutation test for several statistics on one shared permutation sequence.

    Under ``refold_per_permutation`` every permutation gets fresh folds (stratified
    on the permuted labels when the statistic uses balanced folds) or fresh
    bootstrap draws. Under ``fixed_folds`` each statistic reuses the stream of its
    observed evaluation, i.e. the same fold/bootstrap draws, for every permutation.
    A statistic that raises aborts the whole test.
    """
    if r < 1:
        raise ValueError("need at least one permutation")
    stream = as_stream(rng)
    policy = RefoldPolicy(policy)
    X, y = ds.features, ds.labels
    perms = draw_permutations(ds.n, r, stream)
    out = {}
    for stat in statistics:
        key = stat.key
        obs_stream = stream.child(1, key, 0)
        observed = stat.value(X, y, obs_stream)
        null = np.empty(r)
        for k in range(r):
            s_k = obs_stream if policy is RefoldPolicy.FIXED else stream.child(1, key, k + 1)
            null[k] = stat.value(X, y[perms[k]], s_k)
        greater, equal = _count(observed, null)
        out[stat.name] = PermutationReport(observed, r, greater, equal, null if keep_null else None)
    return out


def permutation_test(ds: LabeledDataset, statistic: StatisticSpec, r: int = DEFAULT_PERMUTATIONS,
                     policy=None, rng=None, keep_null: bool = False) -> PermutationReport:
    """Permutation test of a single statistic.

    ``policy`` defaults to refolding for resampling statistics and is meaningless
    (and rejected if set to refolding) for statistics without folds or bootstrap.
    """
    if policy is None:
        policy = RefoldPolicy.REFOLD if statistic.resamples else RefoldPolicy.FIXED
    policy = RefoldPolicy(policy)
    if policy is RefoldPolicy.REFOLD and not statistic.resamples:
        raise ValueError(f"{statistic.name!r} has no folds to redraw; use fixed_folds")
    return permutation_test_many(ds, [statistic], r, policy, rng, keep_null)[statistic.name]


def tie_break_probability(report: PermutationReport, alpha: float) -> float:
    if report.equal == 0:
        return 0.0
    return max((alpha - report.greater / report.r) / (report.equal / report.r), 0.0)


def decide(report: PermutationReport, alpha: float = 0.05, tie_break: bool = False,
           u: float = 0.0, mode="paper") -> TestDecision:
    """Reject when the p-value is at most ``alpha``.

    Otherwise, with ``tie_break`` on and ties present, reject iff
    ``u < max((alpha - P{T_perm > T}) / P{T_perm = T}, 0)``.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    p = report.p_value(mode)
    if p <= alpha:
        return TestDecision(p, True, False, alpha)
    if tie_break and report.equal > 0:
        return TestDecision(p, bool(u < tie_break_probability(report, alpha)), True, alpha)
    return TestDecision(p, False, False, alpha)

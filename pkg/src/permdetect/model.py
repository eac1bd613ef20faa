"""Core data types: labelled two-class datasets, random streams, test decisions.

Random streams
--------------
Every random draw in the package comes from an :class:`RngStream`, identified by a
master ``seed`` and a ``path`` of non-negative integers (replication id, permutation
id, ...). The stream is a Philox-4x64 counter-based generator whose 256-bit key is
derived by numpy's ``SeedSequence`` hash with ``entropy=seed`` and
``spawn_key=path``. Both algorithms are fixed by numpy's stability policy for
bit-generators, so a given ``(seed, path)`` produces the same variates on every
platform, independently of how work is scheduled across processes.

Test vectors (first three ``uint64`` draws of ``derive_stream(42, [0])``) are pinned
in ``tests/test_model.py``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .exceptions import EmptyClass, NonFinite, ShapeMismatch

_U64 = (1 << 64) - 1


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    """An ``n x p`` feature matrix with binary labels in {0, 1}.

    Instances are immutable: both arrays are stored read-only. Build them with
    :func:`validate_dataset`; :meth:`with_labels` produces relabelled copies that
    share the feature matrix.
    """

    features: np.ndarray
    labels: np.ndarray
    n0: int = field(init=False)
    n1: int = field(init=False)

    def __post_init__(self):
        n1 = int(self.labels.sum())
        object.__setattr__(self, "n1", n1)
        object.__setattr__(self, "n0", int(self.labels.shape[0]) - n1)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def p(self) -> int:
        return self.features.shape[1]

    def with_labels(self, labels: np.ndarray) -> "LabeledDataset":
        """Same features, new labels (a permutation of the current ones is the usual case)."""
        labels = np.asarray(labels, dtype=np.int8)
        if labels.shape != self.labels.shape:
            raise ShapeMismatch(f"expected {self.labels.shape[0]} labels, got {labels.shape}")
        labels = labels.copy()
        labels.flags.writeable = False
        return LabeledDataset(self.features, labels)

    def __repr__(self):
        return f"LabeledDataset(n={self.n}, p={self.p}, n0={self.n0}, n1={self.n1})"


def validate_dataset(features, labels) -> LabeledDataset:
    """Check and freeze a feature matrix and its label vector.

    Raises
    ------
    ShapeMismatch
        ``features`` is not 2-D or its row count differs from ``len(labels)``, or fewer
        than 4 observations are given.
    NonFinite
        A feature value is NaN or infinite.
    EmptyClass
        Labels are not all in {0, 1}, or one class has no members.
    """
    X = np.array(features, dtype=np.float64, copy=True)
    y_raw = np.asarray(labels)
    if X.ndim != 2:
        raise ShapeMismatch(f"features must be a 2-D matrix, got ndim={X.ndim}")
    if y_raw.ndim != 1 or y_raw.shape[0] != X.shape[0]:
        raise ShapeMismatch(f"{X.shape[0]} rows but {y_raw.shape} labels")
    if X.shape[0] < 4:
        raise ShapeMismatch(f"need at least 4 observations, got {X.shape[0]}")
    if not np.all(np.isfinite(X)):
        raise NonFinite("features contain NaN or Inf")
    if not np.all((y_raw == 0) | (y_raw == 1)):
        raise EmptyClass("labels must be coded 0/1")
    y = y_raw.astype(np.int8)
    if y.sum() == 0 or y.sum() == y.shape[0]:
        raise EmptyClass("both classes must be non-empty")
    X.flags.writeable = False
    y.flags.writeable = False
    return LabeledDataset(X, y)


@dataclass(frozen=True)
class RngStream:
    """A reproducible, independently seeded random stream.

    ``path`` plays the role of a hierarchical stream id, e.g. ``(replication,)`` or
    ``(replication, 1, permutation)``. Use :meth:`child` to derive sub-streams and
    :meth:`generator` to obtain a fresh ``numpy.random.Generator`` positioned at the
    start of the stream.
    """

    seed: int
    path: tuple = ()

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=self.path)
        return np.random.Generator(np.random.Philox(ss))

    def child(self, *ids: int) -> "RngStream":
        return derive_stream(self.seed, self.path + tuple(ids))


def derive_stream(seed: int, path: Iterable[int] = ()) -> RngStream:
    """Stream for ``(seed, path)``; all ids are reduced to unsigned 64-bit integers."""
    seed = int(seed)
    if seed < 0 or seed > _U64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    ids = tuple(int(i) & _U64 for i in path)
    return RngStream(seed, ids)


@dataclass(frozen=True)
class TestDecision:
    """Outcome of a single permutation test at level ``alpha``."""

    __test__ = False  # keep pytest from collecting this class

    p_value: float
    rejected: bool
    tie_randomization_used: bool
    alpha: float


def as_stream(rng) -> RngStream:
    """Accept an RngStream, an int seed, or None (seed 0)."""
    if isinstance(rng, RngStream):
        return rng
    if rng is None:
        return derive_stream(0)
    if isinstance(rng, (int, np.integer)):
        return derive_stream(int(rng))
    raise TypeError(f"expected RngStream or int seed, got {type(rng).__name__}")


def class_counts(labels: Sequence[int]) -> tuple[int, int]:
    labels = np.asarray(labels)
    n1 = int(labels.sum())
    return labels.shape[0] - n1, n1

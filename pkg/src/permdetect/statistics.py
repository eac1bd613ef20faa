"""Named test statistics: the location tests plus classifier-accuracy tests.

A :class:`StatisticSpec` is everything needed to recompute a statistic on a
relabelled dataset. :func:`catalog` knows the standard battery by name::

    location:   oracle, hotelling, hotelling_shrink, goeman, sd
    V-fold:     lda.CV.1, svm.CV.1 (cost 10), svm.CV.2 (0.1), svm.CV.5 (100),
                svm.CV.6 (0.01), lda.highdim.1 (dlda), lda.highdim.2 (hdrda),
                lda.highdim.3 (sdlda)
    resub:      lda.noCV.1, svm.noCV.1 (10), svm.noCV.2 (0.1)
    bootstrap:  LDA.Boot.1 (B=10), SVM.Boot.1 (B=10, 10), SVM.Boot.2 (B=10, 0.1),
                SVM.Boot.3 (B=50, 10), SVM.Boot.4 (B=50, 0.1),
                lda.highdim.4 (sdlda, B=50)
"""
from __future__ import annotations

import zlib
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from . import accuracy as _acc
from .classifiers import ClassifierSpec
from .location import LOCATION_NAMES, LocationStatSpec, _quadratic_value
from .model import LabeledDataset, RngStream, as_stream

ESTIMATORS = ("resub", "vfold", "bloo")


@dataclass(frozen=True, eq=False)
class StatisticSpec:
    name: str
    location: Optional[LocationStatSpec] = None
    classifier: Optional[ClassifierSpec] = None
    estimator: Optional[str] = None
    V: int = 4
    balanced: bool = True
    B: int = 50

    def __post_init__(self):
        if (self.location is None) == (self.classifier is None):
            raise ValueError("a statistic is either a location test or an accuracy test")
        if self.classifier is not None and self.estimator not in ESTIMATORS:
            raise ValueError(f"accuracy statistics need an estimator in {ESTIMATORS}")

    @property
    def kind(self) -> str:
        return "location" if self.location is not None else "accuracy"

    @property
    def resamples(self) -> bool:
        """True when the value depends on random folds or bootstrap draws."""
        return self.estimator in ("vfold", "bloo")

    @property
    def key(self) -> int:
        """Stable 32-bit id used to derive this statistic's random streams."""
        return zlib.crc32(self.name.encode("utf-8"))

    def value(self, X, y, stream: Optional[RngStream] = None) -> float:
        """Statistic on raw arrays; ``stream`` seeds folds or bootstrap draws."""
        if self.location is not None:
            return _quadratic_value(X, y, self.location)[0]
        if self.estimator == "resub":
            return _acc._resub(X, y, self.classifier)
        gen = as_stream(stream).generator()
        if self.estimator == "vfold":
            if self.V > y.shape[0]:
                raise _acc.TooManyFolds(f"V={self.V} exceeds n={y.shape[0]}")
            fold_of = _acc._assign_folds(y, self.V, self.balanced, gen)
            return _acc._vfold(X, y, self.classifier, fold_of, self.V)
        return _acc._bloo(X, y, self.classifier, self.B, gen)[0]

    def evaluate(self, ds: LabeledDataset, rng=None) -> float:
        return self.value(ds.features, ds.labels, as_stream(rng))


_ACCURACY_TABLE = {
    # name: (family, cost, estimator, B)
    "lda.CV.1": ("lda", None, "vfold", None),
    "lda.noCV.1": ("lda", None, "resub", None),
    "svm.CV.1": ("linear_svm", 10.0, "vfold", None),
    "svm.CV.2": ("linear_svm", 0.1, "vfold", None),
    "svm.noCV.1": ("linear_svm", 10.0, "resub", None),
    "svm.noCV.2": ("linear_svm", 0.1, "resub", None),
    "LDA.Boot.1": ("lda", None, "bloo", 10),
    "SVM.Boot.1": ("linear_svm", 10.0, "bloo", 10),
    "SVM.Boot.2": ("linear_svm", 0.1, "bloo", 10),
    "SVM.Boot.3": ("linear_svm", 10.0, "bloo", 50),
    "SVM.Boot.4": ("linear_svm", 0.1, "bloo", 50),
    "svm.CV.5": ("linear_svm", 100.0, "vfold", None),
    "svm.CV.6": ("linear_svm", 0.01, "vfold", None),
    "lda.highdim.1": ("dlda", None, "vfold", None),
    "lda.highdim.2": ("hdrda", None, "vfold", None),
    "lda.highdim.3": ("sdlda", None, "vfold", None),
    "lda.highdim.4": ("sdlda", None, "bloo", 50),
}

TABLE_LOCATION = ("oracle", "hotelling", "hotelling_shrink", "goeman", "sd")
TABLE_BASIC = TABLE_LOCATION + (
    "lda.CV.1", "lda.noCV.1", "svm.CV.1", "svm.CV.2", "svm.noCV.1", "svm.noCV.2",
)
TABLE_BOOTSTRAP = ("LDA.Boot.1", "SVM.Boot.1", "SVM.Boot.2", "SVM.Boot.3", "SVM.Boot.4")
TABLE_HIGHDIM = ("svm.CV.5", "svm.CV.6", "lda.highdim.1", "lda.highdim.2",
                 "lda.highdim.3", "lda.highdim.4")
KNOWN_NAMES = TABLE_LOCATION + tuple(_ACCURACY_TABLE)


def statistic(name: str, *, sigma=None, V: int = 4, balanced: bool = True,
              hdrda_mix: float = 0.5, B: Optional[int] = None, cost: Optional[float] = None,
              ) -> StatisticSpec:
    """Build one named statistic. ``sigma`` is required for ``oracle``.

    ``B`` and ``cost`` override the table defaults, for ad-hoc variants.
    """
    if name in LOCATION_NAMES:
        return StatisticSpec(name, location=LocationStatSpec(name, sigma if name == "oracle" else None))
    if name not in _ACCURACY_TABLE:
        raise KeyError(f"unknown statistic {name!r}")
    family, tab_cost, estimator, tab_B = _ACCURACY_TABLE[name]
    clf = ClassifierSpec(family, cost=cost if cost is not None else tab_cost, hdrda_mix=hdrda_mix)
    return StatisticSpec(name, classifier=clf, estimator=estimator, V=V, balanced=balanced,
                         B=B if B is not None else (tab_B or 50))


def catalog(names: Sequence[str], **kw) -> list[StatisticSpec]:
    return [statistic(nm, **kw) for nm in names]


def renamed(spec: StatisticSpec, name: str) -> StatisticSpec:
    return replace(spec, name=name)

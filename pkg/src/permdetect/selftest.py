"""Fast built-in consistency checks (the ``selftest`` CLI subcommand)."""
from __future__ import annotations

import numpy as np

from . import svm as _svm
from ._reference import pooled_covariance_loops, svm_dual_by_enumeration
from .location import LocationStatSpec, goeman_equivalence_check, location_statistic
from .model import derive_stream, validate_dataset
from .permutation import PermutationReport, decide, permutation_test_many
from .statistics import statistic
from .stats_kernel import pooled_covariance


def _data(seed, n=20, p=4):
    g = derive_stream(seed, (99,)).generator()
    X = g.standard_normal((n, p))
    y = np.repeat([0, 1], n // 2)
    return validate_dataset(X, y), g


def check_streams():
    a = derive_stream(42, [0]).generator().integers(0, 2**63, 3)
    b = derive_stream(42, [0]).generator().integers(0, 2**63, 3)
    c = derive_stream(42, [1]).generator().integers(0, 2**63, 3)
    return bool(np.array_equal(a, b) and not np.array_equal(a, c))


def check_pooled_covariance():
    ds, _ = _data(1, n=10, p=3)
    ref = pooled_covariance_loops(ds.features, ds.labels)
    return bool(np.allclose(pooled_covariance(ds).matrix, ref, rtol=0, atol=1e-12))


def check_goeman():
    ds, _ = _data(2)
    a, b = goeman_equivalence_check(ds)
    return abs(a - b) <= 1e-12 * max(abs(b), 1e-300)


def check_hotelling_affine():
    ds, g = _data(3)
    A = g.standard_normal((ds.p, ds.p)) + 3 * np.eye(ds.p)
    moved = validate_dataset(ds.features @ A.T + g.standard_normal(ds.p), ds.labels)
    spec = LocationStatSpec("hotelling")
    t0, t1 = location_statistic(ds, spec), location_statistic(moved, spec)
    return abs(t0 - t1) <= 1e-8 * abs(t0)


def check_sd_scale():
    ds, g = _data(4)
    scaled = validate_dataset(ds.features * g.uniform(0.1, 10, ds.p), ds.labels)
    spec = LocationStatSpec("sd")
    t0, t1 = location_statistic(ds, spec), location_statistic(scaled, spec)
    return abs(t0 - t1) <= 1e-10 * abs(t0)


def check_monotone_transform():
    ds, _ = _data(5)
    st = statistic("goeman")
    rep = permutation_test_many(ds, [st], 50, rng=derive_stream(5))["goeman"]
    null = np.array([st.value(ds.features, ds.labels[np.asarray(p)], None)
                     for p in _perms(ds.n, 50, derive_stream(5))])
    g2 = int(np.sum(2 * null + 1 > 2 * rep.observed + 1))
    return g2 == rep.greater


def _perms(n, r, stream):
    from .permutation import draw_permutations
    return draw_permutations(n, r, stream)


def check_svm():
    for seed in range(3):
        g = derive_stream(seed, (7,)).generator()
        X = g.standard_normal((6, 2))
        y = np.array([0, 0, 0, 1, 1, 1], dtype=float)
        Xa = _svm.augment(X)
        ypm = 2 * y - 1
        for C in (0.1, 10.0):
            _, alpha, _, _ = _svm.dual_cd(Xa, ypm, C, _svm.DEFAULT_TOL, _svm.DEFAULT_MAX_EPOCHS)
            _, ref = svm_dual_by_enumeration(Xa, ypm, C)
            got = _svm.dual_objective(Xa, ypm, alpha)
            if abs(got - ref) > 1e-6 * max(1.0, abs(ref)):
                return False
    return True


def check_tie_rule():
    rep = PermutationReport(0.0, 100, 4, 10)
    return decide(rep, 0.05, True, 0.0999).rejected and not decide(rep, 0.05, True, 0.1001).rejected


CHECKS = {
    "rng streams deterministic and distinct": check_streams,
    "pooled covariance matches double loop": check_pooled_covariance,
    "goeman equals (n0 n1/n)|d|^2": check_goeman,
    "hotelling affine invariance": check_hotelling_affine,
    "sd scalar invariance": check_sd_scale,
    "permutation counts invariant to monotone maps": check_monotone_transform,
    "svm dual matches active-set enumeration": check_svm,
    "randomized tie-breaking threshold": check_tie_rule,
}


def run(out=print) -> bool:
    ok = True
    for label, fn in CHECKS.items():
        try:
            passed = bool(fn())
        except Exception as exc:  # report, keep going
            passed = False
            label = f"{label} ({exc!r})"
        ok &= passed
        out(f"{'PASS' if passed else 'FAIL'}  {label}")
    return ok

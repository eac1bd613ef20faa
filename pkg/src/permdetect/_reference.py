"""Slow, independent reference computations used as test oracles."""
from __future__ import annotations

import itertools

import numpy as np


def svm_dual_by_enumeration(Xa, ypm, C):
    """Exact optimum of the box-constrained SVM dual by active-set enumeration.

    Every coordinate is either at 0, at C, or free. For each of the ``3^n``
    patterns the free block of the stationarity system is solved exactly; the best
    feasible stationary point is the optimum (at an extreme point of the optimal
    set the free block is non-singular). Only practical for n <= 8.

    Returns ``(alpha, dual_value)`` with the dual in maximisation form.
    """
    n = Xa.shape[0]
    G = Xa @ Xa.T
    Q = G * np.outer(ypm, ypm)
    best_val, best = -np.inf, None
    for pattern in itertools.product((0, 1, 2), repeat=n):
        pattern = np.array(pattern)
        free = pattern == 2
        alpha = np.where(pattern == 1, C, 0.0).astype(float)
        if free.any():
            Qff = Q[np.ix_(free, free)]
            rhs = 1.0 - Q[np.ix_(free, ~free)] @ alpha[~free]
            if np.linalg.matrix_rank(Qff) < free.sum():
                continue
            alpha[free] = np.linalg.solve(Qff, rhs)
            if np.any(alpha[free] < -1e-12) or np.any(alpha[free] > C + 1e-12):
                continue
            alpha = np.clip(alpha, 0.0, C)
        val = alpha.sum() - 0.5 * alpha @ Q @ alpha
        if val > best_val:
            best_val, best = val, alpha
    return best, float(best_val)


def pooled_covariance_loops(X, y):
    """Pooled within-class covariance by explicit double loops."""
    n, p = X.shape
    S = np.zeros((p, p))
    for cls in (0, 1):
        rows = [X[i] for i in range(n) if y[i] == cls]
        m = [sum(r[j] for r in rows) / len(rows) for j in range(p)]
        for r in rows:
            for a in range(p):
                for b in range(p):
                    S[a, b] += (r[a] - m[a]) * (r[b] - m[b])
    return S / (n - 2)

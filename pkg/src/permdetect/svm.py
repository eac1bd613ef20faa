"""Linear SVM (L1 hinge) by dual coordinate descent.

Primal, with the intercept folded into an augmented constant feature::

    min_w  0.5 * |w|^2 + C * sum_i max(0, 1 - y_i w.x_i)

Dual::

    min_a  0.5 * a' Q a - sum_i a_i,   0 <= a_i <= C,   Q_ij = y_i y_j x_i.x_j

Coordinates are visited in fixed cyclic order. The run stops once the largest
projected-gradient magnitude over a full sweep drops below ``tol`` or after
``max_epochs`` sweeps.
"""
from __future__ import annotations

import numba
import numpy as np

DEFAULT_TOL = 1e-4
DEFAULT_MAX_EPOCHS = 10_000


@numba.njit(cache=True, nogil=True)
def dual_cd(Xa, ypm, C, tol, max_epochs):
    n, q = Xa.shape
    alpha = np.zeros(n)
    w = np.zeros(q)
    qdiag = np.empty(n)
    for i in range(n):
        s = 0.0
        for k in range(q):
            s += Xa[i, k] * Xa[i, k]
        qdiag[i] = s
    epoch = 0
    worst = np.inf
    while epoch < max_epochs:
        epoch += 1
        worst = 0.0
        for i in range(n):
            s = 0.0
            for k in range(q):
                s += w[k] * Xa[i, k]
            g = ypm[i] * s - 1.0
            a = alpha[i]
            if a <= 0.0:
                pg = g if g < 0.0 else 0.0
            elif a >= C:
                pg = g if g > 0.0 else 0.0
            else:
                pg = g
            if pg < 0.0:
                viol = -pg
            else:
                viol = pg
            if viol > worst:
                worst = viol
            if viol > 1e-15:
                a_new = a - g / qdiag[i]
                if a_new < 0.0:
                    a_new = 0.0
                elif a_new > C:
                    a_new = C
                step = (a_new - a) * ypm[i]
                if step != 0.0:
                    for k in range(q):
                        w[k] += step * Xa[i, k]
                alpha[i] = a_new
        if worst < tol:
            break
    return w, alpha, epoch, worst


def augment(X):
    n = X.shape[0]
    Xa = np.empty((n, X.shape[1] + 1))
    Xa[:, :-1] = X
    Xa[:, -1] = 1.0
    return Xa


def primal_objective(Xa, ypm, C, w):
    margins = ypm * (Xa @ w)
    return 0.5 * float(w @ w) + C * float(np.sum(np.maximum(0.0, 1.0 - margins)))


def dual_objective(Xa, ypm, alpha):
    """Dual in maximisation form: ``sum(a) - 0.5 |sum_i a_i y_i x_i|^2``."""
    w = (alpha * ypm) @ Xa
    return float(alpha.sum()) - 0.5 * float(w @ w)

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from permdetect._reference import pooled_covariance_loops
from permdetect.exceptions import NotSymmetric
from permdetect.model import derive_stream, validate_dataset
from permdetect.simgen import CovarianceSpec, make_covariance
from permdetect.stats_kernel import (
    group_summary,
    pooled_covariance,
    principal_axes,
    shrink_covariance,
    solve_spd,
)


def _ds(rows0, rows1):
    X = np.array(list(rows0) + list(rows1), dtype=float)
    return validate_dataset(X, [0] * len(rows0) + [1] * len(rows1))


class TestGroupSummary:
    def test_single_points(self):
        ds = _ds([(0, 0), (0, 0)], [(2, 4), (2, 4)])
        assert group_summary(ds).diff.tolist() == [2, 4]

    def test_identical_classes(self):
        ds = _ds([(1, 2), (3, 5)], [(1, 2), (3, 5)])
        assert np.all(group_summary(ds).diff == 0)

    def test_hand_arithmetic(self):
        gs = group_summary(_ds([(1, 1), (3, 3)], [(0, 2), (2, 4)]))
        assert gs.mean0.tolist() == [2, 2]
        assert gs.mean1.tolist() == [1, 3]
        assert gs.diff.tolist() == [-1, 1]


class TestPooledCovariance:
    def test_duplicated_points_give_zero(self):
        S = pooled_covariance(_ds([(1, 2), (1, 2)], [(5, 0), (5, 0)])).matrix
        assert np.all(S == 0)

    def test_univariate_hand_value(self):
        # S0 = 2, S1 = 2, pooled = (1*2 + 1*2) / 2
        S = pooled_covariance(_ds([(0,), (2,)], [(1,), (3,)])).matrix
        assert S.shape == (1, 1)
        assert S[0, 0] == pytest.approx(2.0, abs=1e-15)

    def test_random_10x3_against_loops(self):
        g = derive_stream(3).generator()
        X = g.standard_normal((10, 3))
        ds = validate_dataset(X, [0] * 4 + [1] * 6)
        ref = pooled_covariance_loops(ds.features, ds.labels)
        assert np.allclose(pooled_covariance(ds).matrix, ref, rtol=0, atol=1e-12)

    @settings(max_examples=60, deadline=None)
    @given(n=st.integers(5, 20), p=st.integers(1, 6), seed=st.integers(0, 2**32 - 1))
    def test_brute_force_property(self, n, p, seed):
        g = np.random.default_rng(seed)
        X = g.standard_normal((n, p)) * g.uniform(0.1, 5, p)
        y = np.zeros(n, dtype=int)
        y[g.choice(n, size=g.integers(1, n), replace=False)] = 1
        ds = validate_dataset(X, y)
        ref = pooled_covariance_loops(ds.features, ds.labels)
        assert np.allclose(pooled_covariance(ds).matrix, ref, rtol=1e-12, atol=1e-12)


class TestShrinkage:
    def test_univariate_is_unchanged(self):
        ds = _ds([(0,), (2,), (5,)], [(1,), (3,), (4,)])
        assert shrink_covariance(ds).matrix[0, 0] == pytest.approx(pooled_covariance(ds).matrix[0, 0])

    def test_constant_feature(self):
        g = derive_stream(11).generator()
        X = np.column_stack([g.standard_normal(12), np.full(12, 3.0)])
        ds = validate_dataset(X, [0] * 6 + [1] * 6)
        S = pooled_covariance(ds).matrix
        est = shrink_covariance(ds)
        lam = est.shrinkage_weight
        assert est.matrix[0, 1] == pytest.approx((1 - lam) * S[0, 1], abs=1e-15)
        assert np.allclose(np.diag(est.matrix), np.diag(S))

    def test_weight_decreases_with_n(self):
        # nested samples from a correlated design (the diagonal target is wrong)
        sigma = make_covariance(CovarianceSpec("ar1", p=5, rho=0.6))
        g = derive_stream(12).generator()
        X = g.standard_normal((2560, 5)) @ np.linalg.cholesky(sigma).T
        y = np.tile([0, 1], 1280)
        lams = [shrink_covariance(validate_dataset(X[:m], y[:m])).shrinkage_weight
                for m in (20, 80, 320, 1280, 2560)]
        assert all(a > b for a, b in zip(lams, lams[1:])), lams
        assert lams[-1] < 0.01

    def test_weight_in_unit_interval_and_degenerate(self):
        ds = _ds([(1, 2), (1, 2)], [(5, 0), (5, 0)])
        est = shrink_covariance(ds)
        assert est.shrinkage_weight == 1.0
        assert est.kind == "shrunk"

    @settings(max_examples=40, deadline=None)
    @given(n=st.integers(6, 30), p=st.integers(2, 12), seed=st.integers(0, 2**32 - 1))
    def test_positive_definite(self, n, p, seed):
        g = np.random.default_rng(seed)
        ds = validate_dataset(g.standard_normal((n, p)), np.arange(n) % 2)
        est = shrink_covariance(ds)
        assert 0.0 <= est.shrinkage_weight <= 1.0
        if est.shrinkage_weight > 0:
            assert np.linalg.eigvalsh(est.matrix).min() > 0
        assert np.allclose(est.matrix, est.matrix.T, rtol=1e-12, atol=0)


class TestSolve:
    def test_identity(self):
        x, flag = solve_spd(np.eye(2), [3, 5])
        assert np.allclose(x, [3, 5]) and not flag

    def test_diagonal(self):
        x, flag = solve_spd(np.diag([2.0, 4.0]), [2, 4])
        assert np.allclose(x, [1, 1]) and not flag

    def test_rank_one_minimum_norm(self):
        M = np.array([[1.0, 1.0], [1.0, 1.0]])
        x, flag = solve_spd(M, [1, 1])
        # oracle: eigenpair (2, (1,1)/sqrt2); M^+ v = (1/2) * <u, v> u
        u = np.array([1.0, 1.0]) / np.sqrt(2)
        assert flag
        assert np.allclose(x, 0.5 * (u @ [1, 1]) * u)
        assert np.allclose(x, [0.5, 0.5])

    def test_not_symmetric(self):
        with pytest.raises(NotSymmetric):
            solve_spd(np.array([[1.0, 2.0], [0.0, 1.0]]), [1, 1])

    @settings(max_examples=50, deadline=None)
    @given(p=st.integers(1, 8), seed=st.integers(0, 2**32 - 1))
    def test_residual_well_conditioned(self, p, seed):
        g = np.random.default_rng(seed)
        A = g.standard_normal((p, p))
        M = A @ A.T + p * np.eye(p)
        v = g.standard_normal(p)
        x, flag = solve_spd(M, v)
        assert not flag
        assert np.linalg.norm(M @ x - v) <= 1e-8 * np.linalg.norm(v)

    @settings(max_examples=50, deadline=None)
    @given(p=st.integers(2, 8), rank=st.integers(1, 7), seed=st.integers(0, 2**32 - 1))
    def test_pseudo_inverse_path(self, p, rank, seed):
        rank = min(rank, p - 1)
        g = np.random.default_rng(seed)
        B = g.standard_normal((p, rank))
        M = B @ B.T
        v = g.standard_normal(p)
        x, flag = solve_spd(M, v)
        vals, vecs = np.linalg.eigh(M)
        big = vals > 1e-9 * vals.max()
        oracle = vecs[:, big] @ ((vecs[:, big].T @ v) / vals[big])
        assert flag
        assert np.allclose(x, oracle, rtol=1e-8, atol=1e-10)


class TestPrincipalAxes:
    def test_diagonal(self):
        p = 5
        ax = principal_axes(np.diag(np.arange(1.0, p + 1)))
        assert ax.values.tolist() == [5, 4, 3, 2, 1]
        assert np.array_equal(ax.vectors, np.eye(p)[:, ::-1])

    def test_identity_reconstructs(self):
        ax = principal_axes(np.eye(4))
        assert np.allclose(ax.values, 1)
        assert np.allclose(ax.vectors @ np.diag(ax.values) @ ax.vectors.T, np.eye(4), atol=1e-12)

    def test_ar1_reconstruction(self):
        sigma = make_covariance(CovarianceSpec("ar1", p=23, rho=0.6))
        ax = principal_axes(sigma)
        V, lam = ax.vectors, ax.values
        assert np.all(np.diff(lam) <= 0)
        assert np.allclose(V @ np.diag(lam) @ V.T, sigma, rtol=0, atol=1e-10)
        assert np.allclose(V.T @ V, np.eye(23), rtol=0, atol=1e-10)

    def test_sign_convention(self):
        sigma = make_covariance(CovarianceSpec("brownian", p=10))
        V = principal_axes(sigma).vectors
        for j in range(10):
            first = V[np.flatnonzero(np.abs(V[:, j]) > 1e-12)[0], j]
            assert first > 0

    def test_not_symmetric(self):
        with pytest.raises(NotSymmetric):
            principal_axes(np.array([[1.0, 0.5], [0.0, 1.0]]))

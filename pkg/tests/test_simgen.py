from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats as sps

from permdetect.exceptions import BadRho, ConfigError, SingularSigma
from permdetect.location import location_statistic, LocationStatSpec
from permdetect.model import derive_stream, validate_dataset
from permdetect.simgen import (
    COVARIANCE_KINDS,
    CovarianceSpec,
    MixtureSpec,
    ScenarioConfig,
    SignalSpec,
    draw_dataset,
    make_covariance,
    make_signal,
    prepare,
)
from permdetect.stats_kernel import principal_axes


def _mahal2(mu, sigma):
    return float(mu @ np.linalg.solve(sigma, mu))


class TestCovariance:
    def test_ar1_entry(self):
        S = make_covariance(CovarianceSpec("ar1", p=5, rho=0.6))
        assert S[0, 2] == pytest.approx(0.36, abs=1e-15)

    def test_ar1_zero_rho(self):
        assert np.array_equal(make_covariance(CovarianceSpec("ar1", p=4, rho=0.0)), np.eye(4))

    def test_bad_rho(self):
        with pytest.raises(BadRho):
            make_covariance(CovarianceSpec("ar1", p=3, rho=1.0))

    def test_brownian_entry(self):
        S = make_covariance(CovarianceSpec("brownian", p=4))
        assert S[0, 1] == pytest.approx(1 / np.sqrt(2), abs=1e-15)
        assert S[1, 3] == pytest.approx(2 / np.sqrt(2 * 4), abs=1e-15)

    def test_hetero_diag(self):
        assert np.array_equal(make_covariance(CovarianceSpec("hetero_diag", p=3)), np.diag([1.0, 2, 3]))

    def test_random_corr_fixed_by_seed(self):
        a = make_covariance(CovarianceSpec("random_corr", p=6, seed=1))
        b = make_covariance(CovarianceSpec("random_corr", p=6, seed=1))
        c = make_covariance(CovarianceSpec("random_corr", p=6, seed=2))
        assert np.array_equal(a, b) and not np.allclose(a, c)

    def test_unknown_kind(self):
        with pytest.raises(ConfigError):
            CovarianceSpec("toeplitz")

    @pytest.mark.parametrize("kind", COVARIANCE_KINDS)
    @pytest.mark.parametrize("p", [1, 2, 23, 60])
    def test_valid_covariance(self, kind, p):
        S = make_covariance(CovarianceSpec(kind, p=p, rho=0.6, seed=3))
        assert np.array_equal(S, S.T)
        ev = np.linalg.eigvalsh(S)
        assert ev.min() >= -1e-10 * ev.max()
        if kind != "hetero_diag":
            assert np.all(np.diag(S) == 1.0)


class TestSignal:
    def test_basic_effect_size(self):
        mu = make_signal(SignalSpec(c=0.5), np.eye(23))
        assert _mahal2(mu, np.eye(23)) == pytest.approx(5.75, rel=1e-12)
        assert np.allclose(mu, 0.5)

    def test_zero_effect(self):
        for mode in ("mahalanobis", "euclidean"):
            for direction in ("constant", "pc"):
                mu = make_signal(SignalSpec(direction, c=0.0, norm_mode=mode), np.eye(5))
                assert np.all(mu == 0)

    def test_pc_highest_on_diagonal(self):
        p = 10
        sigma = np.diag(np.arange(1.0, p + 1))
        mu = make_signal(SignalSpec("pc", "highest", c=0.25), sigma)
        a = 0.25 * np.sqrt(p * p)
        expect = np.zeros(p)
        expect[-1] = a
        assert np.allclose(mu, expect, rtol=1e-12, atol=1e-14)
        assert mu @ (mu / np.diag(sigma)) == pytest.approx(0.25**2 * p, rel=1e-10)

    def test_pc_lowest_and_index(self):
        sigma = make_covariance(CovarianceSpec("ar1", p=23))
        axes = principal_axes(sigma)
        lo = make_signal(SignalSpec("pc", "lowest", c=0.5), sigma)
        assert abs(lo @ axes.vectors[:, -1]) == pytest.approx(np.linalg.norm(lo), rel=1e-12)
        seven = make_signal(SignalSpec("pc", 7, c=0.5, norm_mode="euclidean"), sigma)
        assert abs(seven @ axes.vectors[:, 6]) == pytest.approx(np.linalg.norm(seven), rel=1e-12)
        with pytest.raises(ConfigError):
            make_signal(SignalSpec("pc", 24, c=0.5), sigma)

    def test_singular_sigma(self):
        sigma = np.array([[1.0, 1.0], [1.0, 1.0]])
        with pytest.raises(SingularSigma):
            make_signal(SignalSpec(c=0.5), sigma)

    @settings(max_examples=60, deadline=None)
    @given(kind=st.sampled_from(COVARIANCE_KINDS), p=st.integers(1, 40),
           c=st.floats(0.01, 3.0), direction=st.sampled_from(["constant", "pc"]),
           pc=st.sampled_from(["highest", "lowest", 1]), seed=st.integers(0, 100))
    def test_norm_constraints(self, kind, p, c, direction, pc, seed):
        sigma = make_covariance(CovarianceSpec(kind, p=p, seed=seed))
        m = make_signal(SignalSpec(direction, pc, c, "mahalanobis"), sigma)
        assert _mahal2(m, sigma) == pytest.approx(c * c * p, rel=1e-10)
        e = make_signal(SignalSpec(direction, pc, c, "euclidean"), sigma)
        assert e @ e == pytest.approx(c * c * p, rel=1e-10)


class TestDraw:
    def test_balanced_ordered_labels(self):
        ds = draw_dataset(ScenarioConfig(n=10, p=3), derive_stream(1))
        assert ds.labels.tolist() == [0] * 5 + [1] * 5

    def test_odd_n_rejected(self):
        with pytest.raises(ConfigError):
            ScenarioConfig(n=41)

    def test_mean_difference_moment(self):
        cfg = ScenarioConfig(n=40, p=23)
        prep = prepare(cfg, 0.5)
        vals = np.empty(10_000)
        for r in range(vals.size):
            ds = prep.draw(derive_stream(11, (r,)))
            d = ds.features[20:].mean(0) - ds.features[:20].mean(0)
            vals[r] = d @ d
        expect = 5.75 + 2 * 23 / 20
        assert expect == pytest.approx(8.05)
        se = vals.std(ddof=1) / np.sqrt(vals.size)
        assert abs(vals.mean() - expect) < 3 * se

    def test_student_t_marginals(self):
        cfg = ScenarioConfig(n=40, p=4, noise="student_t", df=3)
        prep = prepare(cfg, 0.0)
        x = np.concatenate([prep.draw(derive_stream(12, (r,))).features.ravel() for r in range(300)])
        assert sps.kstest(x, sps.t(df=3).cdf).pvalue > 1e-3
        # not rescaled: the t(3) spread, clearly wider than N(0, 1)
        assert np.quantile(np.abs(x), 0.99) > 4.0

    def test_mixture_endpoints(self):
        p = 16
        mix = MixtureSpec()
        cfg = ScenarioConfig(n=40, p=p, signal=mix, effects=(0.0, 0.5))
        mu = np.full(p, 3 / np.sqrt(p))
        full = prepare(cfg, 0.5)
        null = prepare(cfg, 0.0)
        m1, m0, n0, n1 = [], [], [], []
        for r in range(400):
            ds = full.draw(derive_stream(13, (r,)))
            m0.append(ds.features[:20].mean(0))
            m1.append(ds.features[20:].mean(0))
            ds = null.draw(derive_stream(14, (r,)))
            n0.append(ds.features[:20].mean(0))
            n1.append(ds.features[20:].mean(0))
        assert np.allclose(np.mean(m1, 0), mu, atol=0.05)
        assert np.allclose(np.mean(m0, 0), 0, atol=0.05)
        assert np.allclose(np.mean(n0, 0), mu / 2, atol=0.06)
        assert np.allclose(np.mean(n1, 0), mu / 2, atol=0.06)

    def test_mixture_pi_range(self):
        with pytest.raises(ConfigError):
            MixtureSpec(pi=0.6)

    def test_deterministic(self):
        cfg = ScenarioConfig()
        a = draw_dataset(cfg, derive_stream(15), effect=0.25)
        b = draw_dataset(cfg, derive_stream(15), effect=0.25)
        assert a.features.tobytes() == b.features.tobytes()

    def test_label_swap_symmetry(self):
        cfg = ScenarioConfig(n=20, p=5)
        prep = prepare(cfg, 0.5)
        neg = replace(prep, mu=-prep.mu)
        spec = LocationStatSpec("hotelling")
        swapped, negated = [], []
        for r in range(400):
            ds = prep.draw(derive_stream(16, (r,)))
            moved = validate_dataset(ds.features - prep.mu, 1 - ds.labels)
            swapped.append(location_statistic(moved, spec))
            negated.append(location_statistic(neg.draw(derive_stream(17, (r,))), spec))
        assert sps.ks_2samp(swapped, negated).pvalue > 1e-3

import numpy as np
import pytest

from slicereg import (
    ConfigError,
    Dataset,
    DgpConfig,
    ZeroSignal,
    compute_sufficient_stats,
    estimation_error,
    gen_dataset,
    gen_regressors,
    gen_response,
    gen_sparse_beta,
)
from slicereg.simulation import factor_loadings


class TestConfig:
    def test_default_sparsity_is_ceil_sqrt_p(self):
        assert DgpConfig(p=100, n=10).effective_sparsity == 10
        assert DgpConfig(p=10, n=10).effective_sparsity == 4

    def test_factor_needs_p_multiple_of_five(self):
        with pytest.raises(ConfigError):
            DgpConfig(p=7, n=10, regressor_kind="factor")

    def test_sparsity_bounds(self):
        with pytest.raises(ConfigError):
            DgpConfig(p=10, n=10, sparsity=11)


class TestSparseBeta:
    def test_default_nonzero_count(self):
        beta = gen_sparse_beta(DgpConfig(p=100, n=10, seed=0))
        assert np.sum(beta != 0) == 10

    def test_full_sparsity_has_no_zeros(self):
        beta = gen_sparse_beta(DgpConfig(p=20, n=10, sparsity=20, seed=1))
        assert np.all(beta != 0)

    def test_seed_reproducibility(self):
        a = gen_sparse_beta(DgpConfig(p=50, n=10, seed=2))
        b = gen_sparse_beta(DgpConfig(p=50, n=10, seed=2))
        assert np.array_equal(a, b)


class TestRegressors:
    def test_independent_columns_uncorrelated(self):
        X = gen_regressors(DgpConfig(p=2, n=100_000, seed=3))
        corr = np.corrcoef(X.T)[0, 1]
        assert abs(corr) < 0.01

    def test_factor_correlation_structure(self):
        X = gen_regressors(DgpConfig(p=10, n=100_000, regressor_kind="factor", seed=4))
        corr = np.corrcoef(X.T)
        within = corr[0, 1]  # same block (coords 0..4)
        cross = corr[0, 7]   # different block
        assert within == pytest.approx(1.0 / 1.01, abs=0.005)
        assert abs(cross) < 0.01

    def test_loading_matrix_sums(self):
        B = factor_loadings(100)
        assert B.shape == (100, 20)
        np.testing.assert_array_equal(B.sum(axis=1), np.ones(100))
        np.testing.assert_array_equal(B.sum(axis=0), np.full(20, 5.0))


class TestResponse:
    def test_pythagorean_sigma(self):
        beta = np.zeros(10)
        beta[0], beta[1] = 3.0, 4.0
        rng = np.random.default_rng(5)
        X = rng.standard_normal((50, 10))
        _y, sigma = gen_response(X, beta, kappa=1.0, rng=rng)
        assert sigma == pytest.approx(5.0, rel=1e-12)

    def test_kappa_doubles_sigma(self):
        beta = np.ones(4)
        rng = np.random.default_rng(6)
        X = rng.standard_normal((20, 4))
        _, s1 = gen_response(X, beta, 1.0, np.random.default_rng(7))
        _, s2 = gen_response(X, beta, 2.0, np.random.default_rng(7))
        assert s2 == pytest.approx(2.0 * s1, rel=1e-12)

    def test_zero_beta_raises(self):
        rng = np.random.default_rng(8)
        with pytest.raises(ZeroSignal):
            gen_response(rng.standard_normal((10, 3)), np.zeros(3), 1.0, rng)

    def test_residual_variance_matches_sigma(self):
        n = 100_000
        rng = np.random.default_rng(9)
        X = rng.standard_normal((n, 3))
        beta = np.array([1.0, -0.5, 2.0])
        y, sigma = gen_response(X, beta, 1.0, rng)
        resid = y - X @ beta
        var_hat = resid.var(ddof=1)
        se = sigma**2 * np.sqrt(2.0 / n)
        assert abs(var_hat - sigma**2) < 3 * se


class TestEndToEnd:
    def test_gen_dataset_deterministic(self):
        cfg = DgpConfig(p=10, n=100, seed=10)
        d1, b1, s1 = gen_dataset(cfg)
        d2, b2, s2 = gen_dataset(cfg)
        assert np.array_equal(d1.X, d2.X)
        assert np.array_equal(d1.y, d2.y)
        assert np.array_equal(b1, b2) and s1 == s2

    def test_ols_error_shrinks_with_n(self):
        # over replicates, OLS at n = 100p beats OLS at n = 10p on average
        p = 10
        errors = {10: [], 100: []}
        for mult in (10, 100):
            for rep in range(5):
                cfg = DgpConfig(p=p, n=mult * p, seed=20 + rep)
                data, beta, _sigma = gen_dataset(cfg)
                ols = compute_sufficient_stats(data).center
                errors[mult].append(estimation_error(ols, beta))
        assert np.mean(errors[100]) < np.mean(errors[10])

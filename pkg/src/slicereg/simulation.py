"""Synthetic data generators: sparse-Gaussian coefficients, independent or
factor-structured regressors, and noise scaled by kappa (sigma = kappa * ||beta||)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadShape, ConfigError, ZeroSignal
from .model import Dataset

FACTOR_NOISE_SD = 0.1


@dataclass(frozen=True)
class DgpConfig:
    """Data-generating-process controls.

    ``sparsity`` is the number of nonzero coefficients; the default
    ceil(sqrt(p)) keeps the problem genuinely sparse.  The factor design
    needs p divisible by 5 (k = p/5 factors, five loadings per factor).
    """

    p: int
    n: int
    regressor_kind: str = "independent"
    kappa: float = 1.0
    sparsity: int | None = None
    factor_noise_sd: float = FACTOR_NOISE_SD
    seed: int = 0

    def __post_init__(self):
        if self.p < 1 or self.n < 1:
            raise ConfigError("p and n must be >= 1")
        if self.regressor_kind not in ("independent", "factor"):
            raise ConfigError(f"unknown regressor kind {self.regressor_kind!r}")
        if self.regressor_kind == "factor" and self.p % 5 != 0:
            raise ConfigError("factor design needs p divisible by 5")
        if self.kappa <= 0:
            raise ConfigError("kappa must be positive")
        s = self.effective_sparsity
        if not (1 <= s <= self.p):
            raise ConfigError(f"sparsity must lie in [1, p], got {s}")

    @property
    def effective_sparsity(self) -> int:
        return self.sparsity if self.sparsity is not None else math.ceil(math.sqrt(self.p))


def gen_sparse_beta(config: DgpConfig, rng: np.random.Generator | None = None) -> np.ndarray:
    """Sparse-Gaussian coefficients: chosen positions get iid N(0,1), rest 0."""
    rng = rng if rng is not None else np.random.default_rng(config.seed)
    beta = np.zeros(config.p)
    support = rng.choice(config.p, size=config.effective_sparsity, replace=False)
    beta[support] = rng.standard_normal(config.effective_sparsity)
    return beta


def factor_loadings(p: int) -> np.ndarray:
    """0/1 loading matrix: rows 5j..5j+4 load on factor j (row sums 1, column sums 5)."""
    if p % 5 != 0:
        raise BadShape("factor design needs p divisible by 5")
    k = p // 5
    B = np.zeros((p, k))
    for j in range(k):
        B[5 * j: 5 * (j + 1), j] = 1.0
    return B


def gen_regressors(config: DgpConfig, rng: np.random.Generator | None = None) -> np.ndarray:
    """Draw the n-by-p design: iid standard normal, or X = (B F)^T + noise."""
    rng = rng if rng is not None else np.random.default_rng(config.seed)
    if config.regressor_kind == "independent":
        return rng.standard_normal((config.n, config.p))
    k = config.p // 5
    F = rng.standard_normal((k, config.n))
    B = factor_loadings(config.p)
    eps = rng.normal(0.0, config.factor_noise_sd, size=(config.n, config.p))
    return (B @ F).T + eps


def gen_response(X: np.ndarray, beta: np.ndarray, kappa: float,
                 rng: np.random.Generator) -> tuple[np.ndarray, float]:
    """y = X beta + N(0, sigma^2) with sigma = kappa * ||beta||_2."""
    X = np.asarray(X, dtype=np.float64)
    beta = np.asarray(beta, dtype=np.float64)
    if X.ndim != 2 or beta.shape != (X.shape[1],):
        raise BadShape(f"X is {X.shape}, beta is {beta.shape}")
    norm2 = float(beta @ beta)
    if norm2 == 0.0:
        raise ZeroSignal("beta is identically zero, sigma would be 0")
    sigma = kappa * math.sqrt(norm2)
    y = X @ beta + rng.normal(0.0, sigma, size=X.shape[0])
    return y, sigma


def gen_dataset(config: DgpConfig) -> tuple[Dataset, np.ndarray, float]:
    """Full DGP with one generator seeded from the config: (data, beta, sigma)."""
    rng = np.random.default_rng(config.seed)
    beta = gen_sparse_beta(config, rng)
    X = gen_regressors(config, rng)
    y, sigma = gen_response(X, beta, config.kappa, rng)
    return Dataset(X=X, y=y), beta, sigma

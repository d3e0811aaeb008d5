"""Independent ground-truth posteriors used to check the samplers.

Two routes that share no code with the chain: the closed-form conjugate
posterior for Gaussian (ridge) priors, and trapezoid-rule quadrature of the
unnormalized posterior on a dense grid for p <= 2.  Brute force on purpose —
the oracle must stay simpler than the thing it checks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadShape, GridTooCoarse
from .model import Dataset, SufficientStatistics, compute_sufficient_stats
from .priors import PriorSpec

BOUNDARY_MASS_TOL = 1e-6


@dataclass(frozen=True)
class GaussianPosterior:
    """Exact Gaussian posterior: mean vector and covariance matrix."""

    mean: np.ndarray
    covariance: np.ndarray


@dataclass(frozen=True)
class QuadratureSpec:
    """Grid controls: explicit per-dimension (lo, hi) bounds or a width in
    flat-prior posterior standard deviations around the center."""

    bounds: tuple[tuple[float, float], ...] | None = None
    n_points: int = 2001
    sd_multiplier: float = 10.0

    def __post_init__(self):
        if self.n_points < 101:
            raise BadShape("quadrature needs at least 101 points per axis")
        if self.bounds is not None:
            for lo, hi in self.bounds:
                if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
                    raise BadShape("quadrature bounds must be finite with lo < hi")


def conjugate_ridge_posterior(stats: SufficientStatistics, lam: float,
                              sigma2: float) -> GaussianPosterior:
    """Closed-form posterior under beta ~ N(0, lam^2 I), fixed sigma2.

    mean = (X^T X + (sigma2/lam^2) I)^-1 X^T y and covariance
    sigma2 (X^T X + (sigma2/lam^2) I)^-1; always proper.
    """
    if lam <= 0 or sigma2 <= 0:
        raise ValueError("lam and sigma2 must be positive")
    p = stats.p
    M = stats.raw_gram + (sigma2 / lam**2) * np.eye(p)
    cov = sigma2 * np.linalg.inv(M)
    cov = 0.5 * (cov + cov.T)
    mean = np.linalg.solve(M, stats.xty)
    return GaussianPosterior(mean=mean, covariance=cov)


def quadrature_posterior_moments(data: Dataset, prior: PriorSpec, sigma2: float,
                                 lam: float, grid: QuadratureSpec | None = None
                                 ) -> tuple[np.ndarray, np.ndarray]:
    """Posterior mean and variance per coordinate by grid quadrature (p <= 2).

    Normalizes exp(Gaussian log likelihood factor + log prior) with the
    trapezoid rule.  Raises GridTooCoarse when the renormalized mass on the
    boundary cells exceeds 1e-6, which means the grid window clipped the
    posterior.
    """
    if data.p > 2:
        raise BadShape("quadrature oracle is restricted to p <= 2")
    if not prior.blockwise:
        raise BadShape("quadrature oracle supports built-in families only")
    if grid is None:
        grid = QuadratureSpec()

    stats = compute_sufficient_stats(data)
    A = stats.raw_gram
    center = stats.center
    flat_sd = np.sqrt(np.diag(sigma2 * np.linalg.inv(A)))

    axes = []
    for j in range(data.p):
        if grid.bounds is not None:
            lo, hi = grid.bounds[j]
        else:
            lo = center[j] - grid.sd_multiplier * flat_sd[j]
            hi = center[j] + grid.sd_multiplier * flat_sd[j]
        axes.append(np.linspace(lo, hi, grid.n_points))

    if data.p == 1:
        x = axes[0]
        d = x - center[0]
        log_post = -0.5 / sigma2 * A[0, 0] * d * d
        log_post += prior.coord_log_density(0, x, lam)
        weights = np.ones_like(x)
        weights[0] = weights[-1] = 0.5
        mass = np.exp(log_post - np.max(log_post)) * weights
        total = float(np.sum(mass))
        boundary = float(mass[0] + mass[-1])
        if boundary / total > BOUNDARY_MASS_TOL:
            raise GridTooCoarse(f"boundary mass fraction {boundary / total:.2e}")
        mean = float(np.sum(mass * x)) / total
        var = float(np.sum(mass * x * x)) / total - mean**2
        return np.array([mean]), np.array([var])

    x1 = axes[0][:, None]
    x2 = axes[1][None, :]
    d1 = x1 - center[0]
    d2 = x2 - center[1]
    log_post = -0.5 / sigma2 * (A[0, 0] * d1 * d1 + 2.0 * A[0, 1] * d1 * d2
                                + A[1, 1] * d2 * d2)
    log_post = log_post + prior.coord_log_density(0, x1, lam) \
        + prior.coord_log_density(1, x2, lam)
    w1 = np.ones(grid.n_points)
    w1[0] = w1[-1] = 0.5
    weights = w1[:, None] * w1[None, :]
    mass = np.exp(log_post - np.max(log_post)) * weights
    total = float(np.sum(mass))
    boundary = float(np.sum(mass[0, :]) + np.sum(mass[-1, :])
                     + np.sum(mass[1:-1, 0]) + np.sum(mass[1:-1, -1]))
    if boundary / total > BOUNDARY_MASS_TOL:
        raise GridTooCoarse(f"boundary mass fraction {boundary / total:.2e}")
    mean = np.array([float(np.sum(mass * x1)) / total, float(np.sum(mass * x2)) / total])
    second = np.array([float(np.sum(mass * x1 * x1)) / total,
                       float(np.sum(mass * x2 * x2)) / total])
    return mean, second - mean**2


def quadrature_posterior_cdf(data: Dataset, prior: PriorSpec, sigma2: float,
                             lam: float, grid: QuadratureSpec | None = None
                             ) -> tuple[np.ndarray, np.ndarray]:
    """Marginal posterior CDF on the grid for p = 1 (for KS-style checks)."""
    if data.p != 1:
        raise BadShape("cdf oracle is for p = 1 only")
    if grid is None:
        grid = QuadratureSpec()
    stats = compute_sufficient_stats(data)
    A = stats.raw_gram
    flat_sd = float(np.sqrt(sigma2 / A[0, 0]))
    if grid.bounds is not None:
        lo, hi = grid.bounds[0]
    else:
        lo = stats.center[0] - grid.sd_multiplier * flat_sd
        hi = stats.center[0] + grid.sd_multiplier * flat_sd
    x = np.linspace(lo, hi, grid.n_points)
    d = x - stats.center[0]
    log_post = -0.5 / sigma2 * A[0, 0] * d * d + prior.coord_log_density(0, x, lam)
    dens = np.exp(log_post - np.max(log_post))
    cdf = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]))])
    cdf /= cdf[-1]
    return x, cdf

"""Chain diagnostics: autocorrelation, effective sample size, summaries.

ESS follows N / (1 + 2 sum rho_k) with the infinite sum truncated by Geyer's
initial positive sequence rule (keep adding consecutive lag-pair sums while
they stay positive) and the result clamped to (0, N].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSeries, NonFiniteInput, ZeroTruth
from .sampler import DrawsMatrix


def _autocovariance(x: np.ndarray, max_lag: int) -> np.ndarray:
    """Biased-normalization autocovariances via FFT, lags 0..max_lag."""
    n = x.shape[0]
    xc = x - x.mean()
    nfft = 1 << int(np.ceil(np.log2(2 * n)))
    f = np.fft.rfft(xc, nfft)
    acov = np.fft.irfft(f * np.conj(f), nfft)[: max_lag + 1].real
    return acov / n


def _validate_series(series: np.ndarray) -> np.ndarray:
    x = np.asarray(series, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] < 10:
        raise DegenerateSeries("need a 1-d series of length >= 10")
    if not np.all(np.isfinite(x)):
        raise NonFiniteInput("series contains non-finite values")
    if np.min(x) == np.max(x):
        raise DegenerateSeries("series is constant")
    return x


def autocorrelation(series: np.ndarray, max_lag: int) -> np.ndarray:
    """Autocorrelations rho_0..rho_max_lag; rho_0 is exactly 1."""
    x = _validate_series(series)
    max_lag = min(int(max_lag), x.shape[0] - 1)
    acov = _autocovariance(x, max_lag)
    if acov[0] <= 0:
        raise DegenerateSeries("zero variance")
    return acov / acov[0]


def effective_sample_size(series: np.ndarray) -> float:
    """ESS by the initial-positive-sequence truncation, clamped to (0, N]."""
    x = _validate_series(series)
    n = x.shape[0]
    rho = autocorrelation(x, n - 1)
    tau = -1.0
    m = 0
    while 2 * m + 1 < rho.shape[0]:
        pair = rho[2 * m] + rho[2 * m + 1]
        if pair <= 0.0:
            break
        tau += 2.0 * pair
        m += 1
    if tau <= 0.0:
        return float(n)
    return float(min(n / tau, n))


def estimation_error(beta_means: np.ndarray, beta_true: np.ndarray) -> float:
    """Relative L2 error sqrt(sum (est - true)^2 / sum true^2)."""
    est = np.asarray(beta_means, dtype=np.float64)
    true = np.asarray(beta_true, dtype=np.float64)
    if est.shape != true.shape:
        raise ZeroTruth(f"shape mismatch: {est.shape} vs {true.shape}")
    denom = float(true @ true)
    if denom == 0.0:
        raise ZeroTruth("true coefficients are all zero")
    diff = est - true
    return float(np.sqrt((diff @ diff) / denom))


@dataclass(frozen=True)
class ChainSummary:
    """Per-column posterior summaries plus chain-level efficiency numbers.

    Column order matches DrawsMatrix: p coefficients, then sigma2, lambda.
    ``ess`` holds NaN for columns where the estimate is undefined (constant
    or too-short series).  min/median ESS and ESS per second aggregate over
    the coefficient columns only.
    """

    mean: np.ndarray
    sd: np.ndarray
    q2_5: np.ndarray
    q97_5: np.ndarray
    ess: np.ndarray
    min_ess: float
    median_ess: float
    ess_per_second: float
    rejections_per_iteration: float
    wall_time_seconds: float
    error: float | None = None


def summarize(draws: DrawsMatrix, beta_true: np.ndarray | None = None) -> ChainSummary:
    """Summarize kept draws; includes estimation error when truth is given."""
    mat = draws.draws
    if mat.shape[0] < 1:
        raise DegenerateSeries("no kept draws")
    mean = mat.mean(axis=0)
    sd = mat.std(axis=0, ddof=1) if mat.shape[0] > 1 else np.zeros(mat.shape[1])
    q2_5, q97_5 = np.quantile(mat, [0.025, 0.975], axis=0)
    ess = np.full(mat.shape[1], np.nan)
    for j in range(mat.shape[1]):
        try:
            ess[j] = effective_sample_size(mat[:, j])
        except DegenerateSeries:
            pass
    beta_ess = ess[: draws.p]
    if np.all(np.isnan(beta_ess)):
        min_ess = median_ess = eps = float("nan")
    else:
        min_ess = float(np.nanmin(beta_ess))
        median_ess = float(np.nanmedian(beta_ess))
        eps = min_ess / draws.wall_time_seconds if draws.wall_time_seconds > 0 else float("nan")
    error = None
    if beta_true is not None:
        error = estimation_error(mean[: draws.p], beta_true)
    return ChainSummary(
        mean=mean, sd=sd, q2_5=q2_5, q97_5=q97_5, ess=ess,
        min_ess=min_ess, median_ess=median_ess, ess_per_second=eps,
        rejections_per_iteration=draws.rejections_per_iteration,
        wall_time_seconds=draws.wall_time_seconds, error=error,
    )

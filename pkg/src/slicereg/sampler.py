"""Elliptical slice and slice-within-Gibbs samplers for linear regression.

One iteration sweeps all coordinate blocks with the elliptical slice move
against the precomputed Gaussian conditionals, then (optionally) refreshes
sigma^2 from its inverse-gamma conditional and the global scale lambda via a
random-walk Metropolis-Hastings step on the log scale.

Two execution engines produce bit-identical chains from one seed: a numba
kernel for the default singleton blocking with built-in priors, and a plain
Python path that also covers arbitrary blockings and user-defined priors.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from . import _kernels
from .errors import ConfigError, NonFiniteInput, ShrinkExhausted
from .model import (
    Blocking,
    ConditionalCache,
    Dataset,
    SufficientStatistics,
    build_conditional_cache,
    compute_sufficient_stats,
    conditional_params,
)
from .priors import PriorSpec

_TWO_PI = 2.0 * math.pi

_FAMILY_CODES = {
    "flat": _kernels.FLAT,
    "horseshoe": _kernels.HORSESHOE,
    "laplace": _kernels.LAPLACE,
    "ridge": _kernels.RIDGE,
    "sharkfin": _kernels.SHARKFIN,
    "nonlocal": _kernels.NONLOCAL,
}


@dataclass
class SamplerConfig:
    """Chain length, blocking, update toggles and tuning constants.

    ``n_draws`` counts total iterations including the ``burn_in`` discarded
    ones.  ``blocking`` is "singleton" (default, K = p), "full" (K = 1), or
    an explicit Blocking.  ``engine`` picks the sweep implementation: "auto"
    uses the compiled kernel whenever the run is eligible.
    """

    n_draws: int
    burn_in: int = 0
    blocking: Union[Blocking, str] = "singleton"
    theta_init: float = math.pi / 2
    max_shrink_iters: int = 100
    ig_alpha: float = 1.0
    ig_gamma: float = 1.0
    mh_step_sd: float = 0.2
    lambda_logprior_sd: float = 10.0
    ridge_c: float | None = None
    sample_sigma2: bool = True
    sample_lambda: bool = True
    sigma2_init: float = 1.0
    lambda_init: float = 1.0
    seed: int = 0
    engine: str = "auto"

    def validate(self) -> None:
        if not (self.n_draws > self.burn_in >= 0):
            raise ConfigError(f"need n_draws > burn_in >= 0, got {self.n_draws}, {self.burn_in}")
        if not (0.0 <= self.theta_init < _TWO_PI):
            raise ConfigError("theta_init must lie in [0, 2*pi)")
        if self.max_shrink_iters < 1:
            raise ConfigError("max_shrink_iters must be >= 1")
        for name in ("ig_alpha", "ig_gamma", "mh_step_sd", "lambda_logprior_sd",
                     "sigma2_init", "lambda_init"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.ridge_c is not None and self.ridge_c < 0:
            raise ConfigError("ridge_c must be nonnegative")
        if self.engine not in ("auto", "python", "numba"):
            raise ConfigError(f"unknown engine {self.engine!r}")
        if isinstance(self.blocking, str) and self.blocking not in ("singleton", "full"):
            raise ConfigError(f"unknown blocking {self.blocking!r}")


@dataclass
class ChainState:
    """Mutable state of one chain: current point, angles, rng and tallies."""

    beta: np.ndarray
    sigma2: float
    lam: float
    theta: np.ndarray
    rng: np.random.Generator
    rejections: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.rejections is None:
            self.rejections = np.zeros(self.theta.shape[0], dtype=np.int64)
        if self.sigma2 <= 0 or self.lam <= 0:
            raise ConfigError("sigma2 and lambda must be positive")


@dataclass(frozen=True)
class DrawsMatrix:
    """Kept posterior draws, one row per iteration: (beta..., sigma2, lambda)."""

    draws: np.ndarray
    wall_time_seconds: float
    total_rejections: int
    iterations: int

    def __post_init__(self):
        if not np.all(np.isfinite(self.draws)):
            raise NonFiniteInput("draws contain non-finite entries")

    @property
    def n_kept(self) -> int:
        return self.draws.shape[0]

    @property
    def p(self) -> int:
        return self.draws.shape[1] - 2

    @property
    def beta_draws(self) -> np.ndarray:
        return self.draws[:, : self.p]

    @property
    def sigma2_draws(self) -> np.ndarray:
        return self.draws[:, self.p]

    @property
    def lambda_draws(self) -> np.ndarray:
        return self.draws[:, self.p + 1]

    @property
    def rejections_per_iteration(self) -> float:
        return self.total_rejections / self.iterations


def _ridge_adjustment(stats: SufficientStatistics, sigma2: float) -> float:
    """Coefficient of the +beta_j^2 term that divides out N(0, c sigma^2 I)."""
    if stats.ridge_c is None:
        return 0.0
    return 1.0 / (2.0 * stats.ridge_c * sigma2)


def family_tables(prior: PriorSpec, p: int):
    """Per-coordinate (code, param) arrays for the compiled kernel, or None."""
    if not prior.blockwise:
        return None
    fams = prior.coord_families(p)
    codes = np.empty(p, dtype=np.int64)
    a1 = np.zeros(p)
    a2 = np.zeros(p)
    a3 = np.zeros(p)
    for j, fam in enumerate(fams):
        codes[j] = _FAMILY_CODES[fam]
        if fam == "sharkfin":
            a1[j] = prior.coord_q(j)
        elif fam == "nonlocal":
            a1[j], a2[j] = prior.locations
            a3[j] = prior.mix_weights[0]
    return codes, a1, a2, a3


def ess_block_step(state: ChainState, cache: ConditionalCache, k: int,
                   prior: PriorSpec, stats: SufficientStatistics,
                   max_shrink_iters: int = 100) -> int:
    """One elliptical slice update of block k given the rest, in place.

    Returns the number of rejected proposals before acceptance (the shrink
    count).  The stationary distribution of the move is the conditional
    Gaussian times the prior restricted to the block.
    """
    blk = cache.blocks[k]
    rng = state.rng
    mean, scaled_chol = conditional_params(cache, k, state.beta, stats.center, state.sigma2)
    delta = state.beta[blk.idx] - mean
    z = rng.standard_normal(blk.idx.size)
    v = scaled_chol @ z
    th = float(state.theta[k])
    v0 = delta * math.sin(th) + v * math.cos(th)
    v1 = delta * math.cos(th) - v * math.sin(th)

    adj = _ridge_adjustment(stats, state.sigma2)
    if prior.blockwise:
        def logprior(vals):
            lp = prior.block_log_density(vals, blk.idx, state.lam)
            return lp + adj * float(vals @ vals) if adj > 0.0 else lp
    else:
        def logprior(vals):
            full = state.beta.copy()
            full[blk.idx] = vals
            lp = prior.log_density(full, state.lam)
            return lp + adj * float(vals @ vals) if adj > 0.0 else lp

    level = logprior(state.beta[blk.idx]) + math.log(rng.random())
    a, b = 0.0, _TWO_PI
    rej = 0
    while True:
        tp = float(_kernels.bracket_draw(a, b, rng.random()))
        prop = mean + v0 * math.sin(tp) + v1 * math.cos(tp)
        if logprior(prop) > level:
            state.theta[k] = tp
            state.beta[blk.idx] = prop
            break
        rej += 1
        if rej >= max_shrink_iters:
            raise ShrinkExhausted(
                f"block {k} rejected {rej} proposals; prior evaluation is broken "
                "(acceptance at the current angle is guaranteed in exact arithmetic)"
            )
        if tp < th:
            a = tp
        else:
            b = tp
    state.rejections[k] += rej
    return rej


def ess_full_step(state: ChainState, stats: SufficientStatistics, prior: PriorSpec,
                  cache: ConditionalCache | None = None,
                  max_shrink_iters: int = 100) -> int:
    """Full-block elliptical slice update (K = 1); see ess_block_step."""
    if cache is None:
        cache = build_conditional_cache(stats, Blocking.single(stats.p))
    if cache.k != 1:
        raise ConfigError("ess_full_step needs a single-block cache")
    return ess_block_step(state, cache, 0, prior, stats, max_shrink_iters)


def update_sigma2(state: ChainState, data: Dataset,
                  ig_alpha: float = 1.0, ig_gamma: float = 1.0) -> float:
    """Inverse-gamma refresh of sigma^2 given the current beta, in place."""
    resid = data.y - data.X @ state.beta
    s = float(resid @ resid)
    state.sigma2 = _draw_inverse_gamma(state.rng, 0.5 * (data.n + ig_alpha),
                                       0.5 * (s + ig_gamma))
    return state.sigma2


def _draw_inverse_gamma(rng: np.random.Generator, shape: float, scale: float) -> float:
    # If G ~ Gamma(shape, rate=scale) then 1/G ~ InvGamma(shape, scale).
    g = rng.gamma(shape, 1.0 / scale)
    return 1.0 / max(g, 1e-300)


def _log_normal_density(x: float, sd: float) -> float:
    return -0.5 * math.log(2.0 * math.pi * sd * sd) - 0.5 * (x / sd) ** 2


def update_lambda(state: ChainState, prior: PriorSpec,
                  mh_step_sd: float = 0.2, lambda_logprior_sd: float = 10.0) -> tuple[float, bool]:
    """Random-walk MH update of the global scale on the log scale, in place.

    The acceptance ratio multiplies the prior ratio at (beta, lambda') vs
    (beta, lambda) — including the diffuse Gaussian hyperprior on log lambda —
    by the explicit lambda'/lambda proposal term.
    """
    if not prior.sample_lambda:
        raise ConfigError("this prior does not use a sampled global scale")
    rng = state.rng
    lam = state.lam
    r = rng.normal(0.0, mh_step_sd)
    lam_prop = math.exp(math.log(lam) + r)
    lp_cur = prior.log_density(state.beta, lam) + _log_normal_density(math.log(lam), lambda_logprior_sd)
    lp_prop = prior.log_density(state.beta, lam_prop) + _log_normal_density(math.log(lam_prop), lambda_logprior_sd)
    u = rng.random()
    if lp_prop == -math.inf:
        accepted = False
    elif lp_cur == -math.inf:
        accepted = True
    else:
        log_eta = lp_prop - lp_cur + math.log(lam_prop) - math.log(lam)
        accepted = math.log(u) < log_eta
    if accepted:
        state.lam = lam_prop
    return state.lam, accepted


def _resolve_blocking(blocking: Union[Blocking, str], p: int) -> Blocking:
    if isinstance(blocking, Blocking):
        if blocking.p != p:
            raise ConfigError(f"blocking covers {blocking.p} coordinates, data has {p}")
        return blocking
    if blocking == "singleton":
        return Blocking.singleton(p)
    if blocking == "full":
        return Blocking.single(p)
    raise ConfigError(f"unknown blocking {blocking!r}")


def _resolve_engine(engine: str, cache: ConditionalCache, prior: PriorSpec) -> str:
    fast_eligible = cache.is_singleton() and prior.blockwise
    if engine == "numba":
        if not _kernels.HAS_NUMBA:
            raise ConfigError("numba engine requested but numba is unavailable")
        if not fast_eligible:
            raise ConfigError("numba engine needs singleton blocking and a built-in prior")
        return "numba"
    if engine == "python":
        return "mirror" if fast_eligible else "general"
    # auto
    if fast_eligible and _kernels.HAS_NUMBA:
        return "numba"
    return "mirror" if fast_eligible else "general"


def run_chain(data: Dataset, prior: PriorSpec, config: SamplerConfig) -> DrawsMatrix:
    """Run one chain and return the kept draws with timing and rejection tallies.

    Deterministic given the seed: the same configuration reproduces the draws
    matrix bit for bit.
    """
    config.validate()
    stats = compute_sufficient_stats(data, config.ridge_c)
    blocking = _resolve_blocking(config.blocking, stats.p)
    cache = build_conditional_cache(stats, blocking)
    mode = _resolve_engine(config.engine, cache, prior)

    p = stats.p
    rng = np.random.default_rng(config.seed)
    state = ChainState(
        beta=stats.center.copy(),
        sigma2=config.sigma2_init,
        lam=config.lambda_init,
        theta=np.full(cache.k, config.theta_init),
        rng=rng,
    )
    sample_lambda = config.sample_lambda and prior.sample_lambda
    kept = config.n_draws - config.burn_in
    draws = np.empty((kept, p + 2))
    total_rej = 0

    if mode in ("numba", "mirror"):
        codes, a1, a2, a3 = family_tables(prior, p)
        sweep = _kernels.singleton_sweep if mode == "numba" else _kernels.singleton_sweep_py
        bc = state.beta - stats.center
        weights = cache.weights_full
        cond_sd = cache.cond_sd_unit

    t0 = time.perf_counter()
    for it in range(config.n_draws):
        if mode in ("numba", "mirror"):
            rej, status = sweep(rng, state.beta, bc, state.theta, stats.center,
                                weights, cond_sd, state.sigma2, state.lam,
                                codes, a1, a2, a3,
                                _ridge_adjustment(stats, state.sigma2),
                                config.max_shrink_iters, state.rejections)
            if status == _kernels.STATUS_SHRINK_EXHAUSTED:
                raise ShrinkExhausted(
                    f"a coordinate rejected {config.max_shrink_iters} proposals at "
                    f"iteration {it}; prior evaluation is broken"
                )
        else:
            rej = 0
            for k in range(cache.k):
                rej += ess_block_step(state, cache, k, prior, stats,
                                      config.max_shrink_iters)
        total_rej += rej
        if config.sample_sigma2:
            s = stats.yty - 2.0 * float(state.beta @ stats.xty) \
                + float(state.beta @ (stats.raw_gram @ state.beta))
            state.sigma2 = _draw_inverse_gamma(
                rng, 0.5 * (stats.n + config.ig_alpha), 0.5 * (max(s, 0.0) + config.ig_gamma))
        if sample_lambda:
            update_lambda(state, prior, config.mh_step_sd, config.lambda_logprior_sd)
        if it >= config.burn_in:
            row = draws[it - config.burn_in]
            row[:p] = state.beta
            row[p] = state.sigma2
            row[p + 1] = state.lam
    wall = time.perf_counter() - t0

    return DrawsMatrix(draws=draws, wall_time_seconds=wall,
                       total_rejections=int(total_rej), iterations=config.n_draws)

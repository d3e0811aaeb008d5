"""Elliptical slice sampling for Bayesian linear regression with arbitrary priors."""

from .diagnostics import (
    ChainSummary,
    autocorrelation,
    effective_sample_size,
    estimation_error,
    summarize,
)
from .errors import (
    BadShape,
    CholeskyFailure,
    ConfigError,
    DegenerateSeries,
    EvaluationError,
    GridTooCoarse,
    NonFiniteInput,
    ShrinkExhausted,
    SingularGram,
    SliceRegError,
    ZeroSignal,
    ZeroTruth,
)
from .model import (
    Blocking,
    ConditionalCache,
    Dataset,
    SufficientStatistics,
    build_conditional_cache,
    compute_sufficient_stats,
    conditional_params,
)
from .oracles import (
    GaussianPosterior,
    QuadratureSpec,
    conjugate_ridge_posterior,
    quadrature_posterior_moments,
)
from .priors import (
    PriorSpec,
    log_horseshoe,
    log_laplace,
    log_nonlocal_mix,
    log_prior,
    log_ridge,
    log_sharkfin,
)
from .sampler import (
    ChainState,
    DrawsMatrix,
    SamplerConfig,
    ess_block_step,
    ess_full_step,
    run_chain,
    update_lambda,
    update_sigma2,
)
from .simulation import DgpConfig, gen_dataset, gen_regressors, gen_response, gen_sparse_beta

__version__ = "0.1.0"

__all__ = [
    "Blocking", "ChainState", "ChainSummary", "ConditionalCache", "Dataset",
    "DgpConfig", "DrawsMatrix", "GaussianPosterior", "PriorSpec",
    "QuadratureSpec", "SamplerConfig", "SufficientStatistics",
    "autocorrelation", "build_conditional_cache", "compute_sufficient_stats",
    "conditional_params", "conjugate_ridge_posterior", "effective_sample_size",
    "ess_block_step", "ess_full_step", "estimation_error", "gen_dataset",
    "gen_regressors", "gen_response", "gen_sparse_beta", "log_horseshoe",
    "log_laplace", "log_nonlocal_mix", "log_prior", "log_ridge",
    "log_sharkfin", "quadrature_posterior_moments", "run_chain", "summarize",
    "update_lambda", "update_sigma2",
    "SliceRegError", "BadShape", "CholeskyFailure", "ConfigError",
    "DegenerateSeries", "EvaluationError", "GridTooCoarse", "NonFiniteInput",
    "ShrinkExhausted", "SingularGram", "ZeroSignal", "ZeroTruth",
]

"""Design-matrix ingestion and the precomputed Gaussian conditional cache.

The samplers treat the regression likelihood as a p-dimensional Gaussian
centered at the (possibly ridge-adjusted) least-squares solution.  Everything
that is expensive about that Gaussian — the gram matrix, its center, and the
per-block conditional weights and Cholesky factors — is computed once here
and shared read-only by every chain.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BadShape, CholeskyFailure, NonFiniteInput, SingularGram

# Relative eigenvalue cutoff below which X^T X counts as rank-deficient.
SINGULARITY_RTOL = 1e-12


@dataclass(frozen=True)
class Dataset:
    """An (X, y) regression problem: X is n-by-p, y has length n."""

    X: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        X = np.ascontiguousarray(np.asarray(self.X, dtype=np.float64))
        y = np.ascontiguousarray(np.asarray(self.y, dtype=np.float64))
        if X.ndim != 2:
            raise BadShape(f"X must be 2-d, got ndim={X.ndim}")
        if y.ndim != 1:
            raise BadShape(f"y must be 1-d, got ndim={y.ndim}")
        if X.shape[0] != y.shape[0]:
            raise BadShape(f"X has {X.shape[0]} rows but y has {y.shape[0]}")
        if X.shape[0] < 1 or X.shape[1] < 1:
            raise BadShape("need at least one observation and one regressor")
        if not np.all(np.isfinite(X)) or not np.all(np.isfinite(y)):
            raise NonFiniteInput("X and y must be finite")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]


@dataclass(frozen=True)
class SufficientStatistics:
    """Gram matrix, cross-products and center of the Gaussian likelihood factor.

    ``gram`` is X^T X plus c^-1 I when a ridge adjustment c was requested, in
    which case ``center`` is the ridge solution rather than the OLS estimate.
    ``raw_gram`` is always the unadjusted X^T X (used for residual sums of
    squares and by the conjugate oracles).
    """

    gram: np.ndarray
    raw_gram: np.ndarray
    xty: np.ndarray
    center: np.ndarray
    yty: float
    n: int
    p: int
    ridge_c: float | None = None


@dataclass(frozen=True)
class Blocking:
    """An ordered partition of coordinate indices {0, ..., p-1}."""

    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not self.blocks:
            raise BadShape("blocking needs at least one block")
        blocks = tuple(tuple(int(i) for i in b) for b in self.blocks)
        seen: set[int] = set()
        for b in blocks:
            if not b:
                raise BadShape("empty block in blocking")
            for i in b:
                if i in seen:
                    raise BadShape(f"index {i} appears in more than one block")
                seen.add(i)
        p = len(seen)
        if seen != set(range(p)):
            raise BadShape("blocks must partition {0..p-1} with no gaps")
        object.__setattr__(self, "blocks", blocks)

    @property
    def p(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def k(self) -> int:
        return len(self.blocks)

    def is_singleton(self) -> bool:
        return all(len(b) == 1 for b in self.blocks)

    @staticmethod
    def singleton(p: int) -> "Blocking":
        """One coordinate per block (the default, K = p)."""
        return Blocking(tuple((j,) for j in range(p)))

    @staticmethod
    def single(p: int) -> "Blocking":
        """Everything in one block (K = 1, the full elliptical slice move)."""
        return Blocking((tuple(range(p)),))

    @staticmethod
    def chunked(p: int, size: int) -> "Blocking":
        """Consecutive blocks of the given size (last may be smaller)."""
        if size < 1:
            raise BadShape("block size must be >= 1")
        return Blocking(tuple(
            tuple(range(start, min(start + size, p))) for start in range(0, p, size)
        ))


@dataclass(frozen=True)
class BlockConditional:
    """Precomputed conditional pieces for one block k.

    ``weights`` maps (beta_{-k} - center_{-k}) to the conditional mean offset;
    ``chol_unit`` is the lower Cholesky factor of the conditional covariance
    with sigma^2 factored out.
    """

    idx: np.ndarray
    comp: np.ndarray
    weights: np.ndarray
    chol_unit: np.ndarray


@dataclass(frozen=True)
class ConditionalCache:
    """All per-block conditionals, plus dense fast-path arrays when K = p.

    For singleton blockings ``weights_full`` stacks the per-coordinate weight
    rows into a p-by-p matrix with zero diagonal (so a full-length dot product
    gives the mean offset) and ``cond_sd_unit`` holds the unit-sigma
    conditional standard deviations.
    """

    blocks: tuple[BlockConditional, ...]
    p: int
    weights_full: np.ndarray | None = field(default=None, repr=False)
    cond_sd_unit: np.ndarray | None = field(default=None, repr=False)

    @property
    def k(self) -> int:
        return len(self.blocks)

    def is_singleton(self) -> bool:
        return self.weights_full is not None


def compute_sufficient_stats(data: Dataset, ridge_c: float | None = None) -> SufficientStatistics:
    """Form X^T X, X^T y and the (ridge-adjusted) least-squares center.

    A positive ``ridge_c`` adds c^-1 I to the gram matrix, which makes
    rank-deficient designs usable; without it a numerically singular gram
    raises SingularGram.
    """
    if ridge_c is not None:
        ridge_c = float(ridge_c)
        if not np.isfinite(ridge_c) or ridge_c < 0:
            raise NonFiniteInput("ridge_c must be a finite nonnegative scalar")
        if ridge_c == 0.0:
            ridge_c = None

    X, y = data.X, data.y
    raw_gram = X.T @ X
    raw_gram = 0.5 * (raw_gram + raw_gram.T)
    xty = X.T @ y
    yty = float(y @ y)

    eigvals = np.linalg.eigvalsh(raw_gram)
    singular = eigvals[0] <= SINGULARITY_RTOL * max(eigvals[-1], 0.0)
    if singular and ridge_c is None:
        raise SingularGram(
            "X^T X is numerically rank-deficient "
            f"(relative smallest eigenvalue {eigvals[0] / max(eigvals[-1], 1e-300):.2e}); "
            "supply a positive ridge_c"
        )

    gram = raw_gram if ridge_c is None else raw_gram + (1.0 / ridge_c) * np.eye(data.p)
    try:
        chol = np.linalg.cholesky(gram)
    except np.linalg.LinAlgError as exc:
        raise SingularGram("gram matrix is not positive definite") from exc
    center = _chol_solve(chol, xty)

    return SufficientStatistics(
        gram=gram, raw_gram=raw_gram, xty=xty, center=center,
        yty=yty, n=data.n, p=data.p, ridge_c=ridge_c,
    )


def _chol_solve(chol: np.ndarray, b: np.ndarray) -> np.ndarray:
    from scipy.linalg import solve_triangular

    z = solve_triangular(chol, b, lower=True)
    return solve_triangular(chol.T, z, lower=False)


def build_conditional_cache(stats: SufficientStatistics, blocking: Blocking) -> ConditionalCache:
    """Precompute every block's conditional-mean weights and Cholesky factor.

    Works in precision form: with A = gram, the conditional covariance of
    block k (unit sigma^2) is A_kk^-1 and the weights are -A_kk^-1 A_{k,-k},
    which equals the covariance-form Schur complement identities.
    """
    if blocking.p != stats.p:
        raise BadShape(f"blocking covers {blocking.p} coords but p = {stats.p}")
    A = stats.gram
    blocks = []
    for b in blocking.blocks:
        idx = np.asarray(b, dtype=np.intp)
        comp = np.setdiff1d(np.arange(stats.p), idx)
        A_kk = A[np.ix_(idx, idx)]
        try:
            chol_kk = np.linalg.cholesky(A_kk)
        except np.linalg.LinAlgError as exc:
            raise CholeskyFailure(f"block {tuple(b)} precision is not PD") from exc
        if comp.size:
            weights = -_chol_solve(chol_kk, A[np.ix_(idx, comp)])
        else:
            weights = np.zeros((idx.size, 0))
        cond_cov = _chol_solve(chol_kk, np.eye(idx.size))
        cond_cov = 0.5 * (cond_cov + cond_cov.T)
        try:
            chol_unit = np.linalg.cholesky(cond_cov)
        except np.linalg.LinAlgError as exc:
            raise CholeskyFailure(f"conditional covariance of block {tuple(b)} not PD") from exc
        blocks.append(BlockConditional(idx=idx, comp=comp, weights=weights, chol_unit=chol_unit))

    weights_full = None
    cond_sd_unit = None
    if blocking.is_singleton():
        diag = np.diag(A)
        if np.any(diag <= 0):
            raise CholeskyFailure("gram diagonal must be positive")
        weights_full = -A / diag[:, None]
        np.fill_diagonal(weights_full, 0.0)
        weights_full = np.ascontiguousarray(weights_full)
        cond_sd_unit = 1.0 / np.sqrt(diag)

    return ConditionalCache(
        blocks=tuple(blocks), p=stats.p,
        weights_full=weights_full, cond_sd_unit=cond_sd_unit,
    )


def conditional_params(
    cache: ConditionalCache,
    k: int,
    beta: np.ndarray,
    center: np.ndarray,
    sigma2: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Conditional mean and sigma-scaled Cholesky factor for block k.

    mean = center_k + W_k (beta_{-k} - center_{-k});  scaled_chol =
    sqrt(sigma2) * chol_unit.
    """
    if sigma2 <= 0:
        raise ValueError("sigma2 must be positive")
    blk = cache.blocks[k]
    mean = center[blk.idx] + blk.weights @ (beta[blk.comp] - center[blk.comp])
    return mean, np.sqrt(sigma2) * blk.chol_unit

"""Log prior densities, evaluated up to additive constants.

Every built-in family is a product of independent per-coordinate densities.
A global scale lambda enters each family through pi(beta/lambda)/lambda, so
for all of them log pi(beta; lambda) = log pi(beta/lambda; 1) - p*log(lambda)
holds exactly (flat coordinates contribute 0 and no Jacobian).

Evaluation stays in log space throughout; the samplers never exponentiate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from .errors import EvaluationError

FAMILIES = ("flat", "horseshoe", "laplace", "ridge", "sharkfin", "nonlocal", "user")

# log(1 / (2 sqrt(2 pi^3))), the constant of the horseshoe lower-bound density.
LOG_HS_CONST = -math.log(2.0) - 0.5 * math.log(2.0 * math.pi**3)
# |beta/lambda| is clamped below at this value; the lower bound diverges at 0
# and the slice level must stay finite.
HS_CLAMP = 1e-10

_LOG_PI = math.log(math.pi)
_LOG_2PI = math.log(2.0 * math.pi)


def _horseshoe_std(x):
    """Horseshoe lower-bound log density at unit scale, elementwise."""
    ax = np.maximum(np.abs(x), HS_CLAMP)
    with np.errstate(divide="ignore"):
        return LOG_HS_CONST + np.log(np.log1p(4.0 / (ax * ax)))


def _laplace_std(x):
    return -math.log(2.0) - np.abs(x)


def _ridge_std(x):
    return -0.5 * _LOG_2PI - 0.5 * x * x


def _cauchy_std(x):
    return -_LOG_PI - np.log1p(x * x)


def _sharkfin_std(x, q):
    """Asymmetric Cauchy: mass q below 0, right tail stretched by s=(1-q)/q."""
    s = (1.0 - q) / q
    neg = np.log(2.0 * q) + _cauchy_std(x)
    pos = np.log(2.0 * (1.0 - q) / s) + _cauchy_std(x / s)
    return np.where(x <= 0, neg, pos)


def _nonlocal_std(x, m1, m2, w1):
    """Two-component Cauchy mixture with locations m1, m2."""
    a = math.log(w1) + _cauchy_std(x - m1)
    b = math.log(1.0 - w1) + _cauchy_std(x - m2)
    return np.logaddexp(a, b)


@dataclass(frozen=True)
class PriorSpec:
    """A prior over regression coefficients, independent across coordinates.

    ``family`` is a single name applied to all coordinates or a per-coordinate
    sequence (families may be mixed).  ``q`` (shark-fin negative-mass) may be
    a scalar or per-coordinate.  The 'user' family delegates the entire
    evaluation to ``user_logpdf(beta, lam)`` and cannot be mixed.

    Instances are immutable and evaluation is pure, so one spec can be shared
    across concurrently running chains.
    """

    family: Union[str, Sequence[str]] = "flat"
    q: Union[float, Sequence[float]] = 0.5
    locations: tuple[float, float] = (-1.5, 1.5)
    mix_weights: tuple[float, float] = (0.5, 0.5)
    sample_lambda: bool = True
    user_logpdf: Callable[[np.ndarray, float], float] | None = None

    def __post_init__(self):
        fams = (self.family,) if isinstance(self.family, str) else tuple(self.family)
        for f in fams:
            if f not in FAMILIES:
                raise EvaluationError(f"unknown prior family {f!r}")
        if "user" in fams:
            if not isinstance(self.family, str):
                raise EvaluationError("the 'user' family cannot be mixed per-coordinate")
            if self.user_logpdf is None:
                raise EvaluationError("family 'user' requires user_logpdf")
        if not isinstance(self.family, str):
            object.__setattr__(self, "family", fams)
        if np.isscalar(self.q):
            qs = (float(self.q),)
        else:
            qs = tuple(float(v) for v in self.q)
            object.__setattr__(self, "q", qs)
        for v in qs:
            if not (0.0 < v < 1.0):
                raise EvaluationError(f"shark-fin q must lie in (0,1), got {v}")
        w1, w2 = self.mix_weights
        if w1 <= 0 or w2 <= 0 or abs(w1 + w2 - 1.0) > 1e-12:
            raise EvaluationError("mixture weights must be positive and sum to 1")
        if not all(np.isfinite(self.locations)):
            raise EvaluationError("mixture locations must be finite")

    # ---- constructors ----

    @staticmethod
    def flat() -> "PriorSpec":
        return PriorSpec(family="flat", sample_lambda=False)

    @staticmethod
    def horseshoe() -> "PriorSpec":
        return PriorSpec(family="horseshoe")

    @staticmethod
    def laplace() -> "PriorSpec":
        return PriorSpec(family="laplace")

    @staticmethod
    def ridge() -> "PriorSpec":
        return PriorSpec(family="ridge")

    @staticmethod
    def sharkfin(q: Union[float, Sequence[float]] = 0.5) -> "PriorSpec":
        return PriorSpec(family="sharkfin", q=q)

    @staticmethod
    def nonlocal_mix(locations=(-1.5, 1.5), weights=(0.5, 0.5)) -> "PriorSpec":
        return PriorSpec(family="nonlocal", locations=locations, mix_weights=weights)

    @staticmethod
    def mixed(families: Sequence[str], q: Union[float, Sequence[float]] = 0.5,
              locations=(-1.5, 1.5), weights=(0.5, 0.5)) -> "PriorSpec":
        sample_lambda = any(f != "flat" for f in families)
        return PriorSpec(family=tuple(families), q=q, locations=locations,
                         mix_weights=weights, sample_lambda=sample_lambda)

    @staticmethod
    def user_defined(fn: Callable[[np.ndarray, float], float],
                     sample_lambda: bool = True) -> "PriorSpec":
        return PriorSpec(family="user", user_logpdf=fn, sample_lambda=sample_lambda)

    # ---- structure helpers ----

    @property
    def blockwise(self) -> bool:
        """Whether coordinate subsets can be evaluated independently."""
        return self.family != "user"

    def coord_families(self, p: int) -> tuple[str, ...]:
        if isinstance(self.family, str):
            return (self.family,) * p
        if len(self.family) != p:
            raise EvaluationError(f"prior has {len(self.family)} coordinate families, need {p}")
        return self.family

    def coord_q(self, j: int) -> float:
        return float(self.q if np.isscalar(self.q) else self.q[j])

    def _family_of(self, j: int) -> str:
        return self.family if isinstance(self.family, str) else self.family[j]

    # ---- evaluation ----

    def coord_log_density(self, j: int, values, lam: float) -> np.ndarray:
        """Elementwise log density of coordinate j at the given values."""
        fam = self._family_of(j)
        values = np.asarray(values, dtype=np.float64)
        if fam == "flat":
            return np.zeros_like(values)
        x = values / lam
        if fam == "horseshoe":
            out = _horseshoe_std(x)
        elif fam == "laplace":
            out = _laplace_std(x)
        elif fam == "ridge":
            out = _ridge_std(x)
        elif fam == "sharkfin":
            out = _sharkfin_std(x, self.coord_q(j))
        elif fam == "nonlocal":
            m1, m2 = self.locations
            out = _nonlocal_std(x, m1, m2, self.mix_weights[0])
        else:
            raise EvaluationError(f"coordinate evaluation unsupported for family {fam!r}")
        return out - math.log(lam)

    def block_log_density(self, values, idx, lam: float) -> float:
        """Summed log density over the coordinates listed in ``idx``.

        Terms for the other coordinates are constant within a block update, so
        they cancel between the slice level and every proposal; this is the
        economical evaluation the block sampler uses.  Blockwise specs only.
        """
        if not self.blockwise:
            raise EvaluationError("user-defined priors cannot be evaluated blockwise")
        values = np.atleast_1d(np.asarray(values, dtype=np.float64))
        idx = np.atleast_1d(idx)
        total = 0.0
        for v, j in zip(values, idx):
            total += float(self.coord_log_density(int(j), v, lam))
        return _checked(total)

    def log_density(self, beta, lam: float) -> float:
        """Full log prior at beta; the single contract the samplers consume."""
        lam = _check_lambda(lam)
        beta = np.atleast_1d(np.asarray(beta, dtype=np.float64))
        p = beta.shape[0]
        if self.family == "user":
            try:
                val = float(self.user_logpdf(beta, lam))
            except EvaluationError:
                raise
            except Exception as exc:
                raise EvaluationError(f"user prior evaluation failed: {exc}") from exc
            return _checked(val)
        if self.family == "flat":
            return 0.0
        if isinstance(self.family, str) and (self.family != "sharkfin" or np.isscalar(self.q)):
            terms = self.coord_log_density(0, beta, lam)
            return _checked(float(np.sum(terms)))
        self.coord_families(p)  # length check for per-coordinate specs
        total = 0.0
        for j in range(p):
            total += float(self.coord_log_density(j, beta[j], lam))
        return _checked(total)


def _checked(val: float) -> float:
    if math.isnan(val):
        raise EvaluationError("prior evaluation produced NaN")
    if val == math.inf:
        raise EvaluationError("prior evaluation produced +inf")
    return val


def _check_lambda(lam: float) -> float:
    lam = float(lam)
    if lam <= 0 or not math.isfinite(lam):
        raise EvaluationError(f"lambda must be positive and finite, got {lam}")
    return lam


def log_horseshoe(beta, lam: float) -> float:
    """Horseshoe log prior via the lower bound on the marginal density."""
    lam = _check_lambda(lam)
    beta = np.atleast_1d(np.asarray(beta, dtype=np.float64))
    return _checked(float(np.sum(_horseshoe_std(beta / lam))) - beta.size * math.log(lam))


def log_laplace(beta, lam: float) -> float:
    """Double-exponential log prior with scale lambda."""
    lam = _check_lambda(lam)
    beta = np.atleast_1d(np.asarray(beta, dtype=np.float64))
    return _checked(float(np.sum(_laplace_std(beta / lam))) - beta.size * math.log(lam))


def log_ridge(beta, lam: float) -> float:
    """Independent Gaussian log prior with standard deviation lambda."""
    lam = _check_lambda(lam)
    beta = np.atleast_1d(np.asarray(beta, dtype=np.float64))
    return _checked(float(np.sum(_ridge_std(beta / lam))) - beta.size * math.log(lam))


def log_sharkfin(beta, q, lam: float) -> float:
    """Asymmetric-Cauchy (shark fin) log prior; q is scalar or per-coordinate."""
    lam = _check_lambda(lam)
    beta = np.atleast_1d(np.asarray(beta, dtype=np.float64))
    q = np.asarray(q, dtype=np.float64)
    if np.any(q <= 0) or np.any(q >= 1):
        raise EvaluationError("q must lie in (0,1)")
    return _checked(float(np.sum(_sharkfin_std(beta / lam, q))) - beta.size * math.log(lam))


def log_nonlocal_mix(beta, lam: float, locations=(-1.5, 1.5), weights=(0.5, 0.5)) -> float:
    """Two-component Cauchy-mixture ("anti-sparsity") log prior."""
    lam = _check_lambda(lam)
    beta = np.atleast_1d(np.asarray(beta, dtype=np.float64))
    terms = _nonlocal_std(beta / lam, locations[0], locations[1], weights[0])
    return _checked(float(np.sum(terms)) - beta.size * math.log(lam))


def log_prior(spec: PriorSpec, beta, lam: float) -> float:
    """Dispatch to the spec's families and sum the coordinate terms."""
    return spec.log_density(beta, lam)

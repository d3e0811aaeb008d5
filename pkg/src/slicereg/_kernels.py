"""Compiled inner loop for the singleton-block sweep.

The kernel mirrors the readable Python implementation exactly: same
arithmetic, same generator calls in the same order, so the two engines
produce bit-identical chains from one seed (asserted in the test suite).
Numba consumes numpy Generator objects natively with stream-compatible
draws, which is what makes the parity contract possible.

Every multiply-add expression lives in a small jitted helper that both the
compiled sweep and its interpreted twin call: the LLVM backend is free to
contract a*b+c into a fused multiply-add, so leaving such expressions inline
would let the compiled and interpreted paths round differently.

Family codes: 0 flat, 1 horseshoe, 2 laplace, 3 ridge, 4 sharkfin
(param1 = q), 5 nonlocal mixture (param1 = m1, param2 = m2, param3 = w1).
"""

from __future__ import annotations

import math

import numpy as np

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            fn.py_func = fn
            return fn

        if args and callable(args[0]):
            return wrap(args[0])
        return wrap

from .priors import HS_CLAMP, LOG_HS_CONST

FLAT, HORSESHOE, LAPLACE, RIDGE, SHARKFIN, NONLOCAL = 0, 1, 2, 3, 4, 5

_LOG_PI = math.log(math.pi)
_LOG_2PI = math.log(2.0 * math.pi)
_LOG_2 = math.log(2.0)
_TWO_PI = 2.0 * math.pi

STATUS_OK = 0
STATUS_SHRINK_EXHAUSTED = -1


@njit(cache=True)
def coord_logpdf(code: int, b: float, lam: float, a1: float, a2: float, a3: float) -> float:
    """Log prior density of one coordinate (scalar), including the -log lam."""
    if code == FLAT:
        return 0.0
    x = b / lam
    if code == HORSESHOE:
        ax = abs(x)
        if ax < HS_CLAMP:
            ax = HS_CLAMP
        return LOG_HS_CONST + math.log(math.log1p(4.0 / (ax * ax))) - math.log(lam)
    if code == LAPLACE:
        return -_LOG_2 - abs(x) - math.log(lam)
    if code == RIDGE:
        q = 0.5 * x * x
        return -0.5 * _LOG_2PI - q - math.log(lam)
    if code == SHARKFIN:
        q = a1
        s = (1.0 - q) / q
        if x <= 0.0:
            return math.log(2.0 * q) - _LOG_PI - math.log1p(x * x) - math.log(lam)
        xs = x / s
        return (math.log(2.0 * (1.0 - q) / s) - _LOG_PI - math.log1p(xs * xs)
                - math.log(lam))
    # nonlocal two-component Cauchy mixture
    la = math.log(a3) - _LOG_PI - math.log1p((x - a1) * (x - a1))
    lb = math.log(1.0 - a3) - _LOG_PI - math.log1p((x - a2) * (x - a2))
    if la < lb:
        la, lb = lb, la
    return la + math.log1p(math.exp(lb - la)) - math.log(lam)


@njit(cache=True)
def ellipse_parts(delta: float, v: float, th: float) -> tuple[float, float]:
    """Auxiliary pair (v0, v1) with v0 sin(th) + v1 cos(th) = delta."""
    s = math.sin(th)
    c = math.cos(th)
    return delta * s + v * c, delta * c - v * s


@njit(cache=True)
def ellipse_point(mean: float, v0: float, v1: float, th: float) -> float:
    """Point on the ellipse at angle th, shifted by the conditional mean."""
    return mean + v0 * math.sin(th) + v1 * math.cos(th)


@njit(cache=True)
def bracket_draw(a: float, b: float, u: float) -> float:
    """Uniform draw on [a, b) from a unit uniform.

    The affine map can round up to exactly b at the largest uniforms; that
    would break the theta in [0, 2*pi) invariant and permit a zero-width
    bracket shrink, so the result is nudged strictly below b.
    """
    v = a + (b - a) * u
    if v >= b:
        v = math.nextafter(b, a)
    return v


@njit(cache=True)
def ridge_adjusted(lp: float, adj: float, x: float) -> float:
    """Add the +adj*x^2 term that divides out the N(0, c sigma^2) factor."""
    return lp + adj * x * x


@njit(cache=True)
def singleton_sweep(rng, beta, bc, theta, center, weights, cond_sd_unit,
                    sigma2, lam, codes, a1, a2, a3, ridge_adj, max_shrink,
                    rej_counts):
    """One Gibbs sweep over all p coordinate blocks, in place.

    ``bc`` is beta - center, maintained incrementally.  ``ridge_adj`` is
    1/(2 c sigma2) when the rank-deficient adjustment is active, else 0.
    ``rej_counts`` accumulates per-coordinate rejections.
    Returns (total rejections, status).
    """
    p = beta.shape[0]
    sigma = math.sqrt(sigma2)
    total_rej = 0
    for j in range(p):
        mean = center[j] + np.dot(weights[j], bc)
        delta = beta[j] - mean
        v = rng.standard_normal() * (sigma * cond_sd_unit[j])
        th = theta[j]
        v0, v1 = ellipse_parts(delta, v, th)
        cur = coord_logpdf(codes[j], beta[j], lam, a1[j], a2[j], a3[j])
        if ridge_adj > 0.0:
            cur = ridge_adjusted(cur, ridge_adj, beta[j])
        level = cur + math.log(rng.random())
        a = 0.0
        b = _TWO_PI
        rej = 0
        while True:
            tp = bracket_draw(a, b, rng.random())
            prop = ellipse_point(mean, v0, v1, tp)
            lp = coord_logpdf(codes[j], prop, lam, a1[j], a2[j], a3[j])
            if ridge_adj > 0.0:
                lp = ridge_adjusted(lp, ridge_adj, prop)
            if lp > level:
                theta[j] = tp
                beta[j] = prop
                bc[j] = prop - center[j]
                break
            rej += 1
            if rej >= max_shrink:
                return total_rej + rej, STATUS_SHRINK_EXHAUSTED
            if tp < th:
                a = tp
            else:
                b = tp
        rej_counts[j] += rej
        total_rej += rej
    return total_rej, STATUS_OK


# Interpreted twin of the jitted sweep, used by the python engine.  Its body
# resolves the helper names to the compiled dispatchers above, so all
# contraction-sensitive arithmetic is shared with the numba engine.
coord_logpdf_py = coord_logpdf.py_func if HAS_NUMBA else coord_logpdf
singleton_sweep_py = singleton_sweep.py_func if HAS_NUMBA else singleton_sweep

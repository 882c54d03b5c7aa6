"""CDFs and quantiles of the Gumbel-type extreme value law and the Kolmogorov-Smirnov law."""
from __future__ import annotations

import math

from .errors import DomainError

_INV_SQRT_PI = 1.0 / math.sqrt(math.pi)
_SQRT_PI = math.sqrt(math.pi)

KS_TERM_TOL = 1e-14
KS_MAX_TERMS = 100
KS_BISECT_TOL = 1e-10
KS_BRACKET = (0.0, 5.0)
# below this the CDF is under 1e-200 and its leading exponent underflows
KS_UNDERFLOW = 0.03


def _check_prob(p: float) -> None:
    if not 0.0 < p < 1.0:
        raise DomainError(f"probability must lie in (0, 1), got {p!r}")


def ev_cdf(x: float) -> float:
    """``P(V <= x) = exp(-exp(-x) / sqrt(pi))``."""
    return math.exp(-_INV_SQRT_PI * math.exp(-x)) if x > -700 else 0.0


def ev_sf(x: float) -> float:
    """Upper tail ``1 - ev_cdf(x)`` without cancellation."""
    if x < -700:
        return 1.0
    return -math.expm1(-_INV_SQRT_PI * math.exp(-x))


def ev_quantile(p: float) -> float:
    _check_prob(p)
    return -math.log(-_SQRT_PI * math.log(p))


def _ks_sf_alternating(x: float) -> float:
    # 2 * sum_{k>=1} (-1)^{k+1} exp(-2 k^2 x^2)
    total = 0.0
    for k in range(1, KS_MAX_TERMS + 1):
        term = math.exp(-2.0 * k * k * x * x)
        total += term if k % 2 else -term
        if math.exp(-2.0 * (k + 1) ** 2 * x * x) < KS_TERM_TOL:
            break
    return 2.0 * total


def _ks_cdf_theta(x: float) -> float:
    # dual series sqrt(2 pi)/x * sum exp(-(2k-1)^2 pi^2 / (8 x^2)); fast for small x
    total = 0.0
    for k in range(1, KS_MAX_TERMS + 1):
        term = math.exp(-((2 * k - 1) ** 2) * math.pi**2 / (8.0 * x * x))
        total += term
        if term < KS_TERM_TOL * max(total, 1e-300):
            break
    return math.sqrt(2.0 * math.pi) / x * total


def ks_cdf(x: float) -> float:
    """CDF of ``sup_t |B_t - t B_1|`` for a standard Brownian bridge."""
    if x <= KS_UNDERFLOW:
        return 0.0
    if x < 1.0:
        return min(1.0, _ks_cdf_theta(x))
    return max(0.0, 1.0 - _ks_sf_alternating(x))


def ks_sf(x: float) -> float:
    if x <= 0:
        return 1.0
    if x < 1.0:
        return 1.0 - ks_cdf(x)
    return min(1.0, _ks_sf_alternating(x))


def ks_quantile(p: float) -> float:
    """Inverse of :func:`ks_cdf` by bisection on ``[0, 5]``."""
    _check_prob(p)
    lo, hi = KS_BRACKET
    while hi - lo > KS_BISECT_TOL:
        mid = 0.5 * (lo + hi)
        if ks_cdf(mid) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)

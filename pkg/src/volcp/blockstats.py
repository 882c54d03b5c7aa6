"""Local realized volatility, truncation, quarticity and spot fourth-moment estimates.

Increments are indexed ``1..n`` in the formulas and ``0..n-1`` in arrays:
``x[j-1]`` holds the increment over ``[(j-1)/n, j/n]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.special import ndtri

from ._numeric import sliding_sum
from .errors import AllTruncated, ConfigError, DegenerateDataError, WindowTooLarge
from .series import as_increments, validate_block_config


@dataclass(frozen=True)
class TruncationRule:
    """Threshold ``u_n`` above which an increment is attributed to a jump.

    ``explicit`` fixes ``u``. ``scaled`` gives ``C * sqrt(2 ln n) / sqrt(n)`` for
    ``tau = 1/2`` and ``C * n**-tau`` otherwise.
    """

    mode: Literal["explicit", "scaled"]
    u: float | None = None
    C: float | None = None
    tau: float = 0.5

    def __post_init__(self):
        if self.mode == "explicit":
            if self.u is None or not self.u > 0:
                raise ConfigError("explicit truncation needs u > 0")
        elif self.mode == "scaled":
            if self.C is None or not self.C > 0:
                raise ConfigError("scaled truncation needs C > 0")
            if not 0 < self.tau <= 0.5:
                raise ConfigError("truncation exponent tau must lie in (0, 1/2]")
        else:
            raise ConfigError(f"unknown truncation mode {self.mode!r}")

    @classmethod
    def explicit(cls, u: float) -> "TruncationRule":
        return cls("explicit", u=float(u))

    @classmethod
    def scaled(cls, C: float, tau: float = 0.5) -> "TruncationRule":
        return cls("scaled", C=float(C), tau=float(tau))

    def threshold(self, n: int) -> float:
        if self.mode == "explicit":
            return self.u
        if self.tau == 0.5:
            return self.C * math.sqrt(2.0 * math.log(n)) / math.sqrt(n)
        return self.C * n ** (-self.tau)


@dataclass(frozen=True)
class BlockConfig:
    k: int
    truncation: TruncationRule | None = None
    alignment: Literal["nonoverlapping", "overlapping"] = "overlapping"

    def validate(self, n: int) -> list[str]:
        return validate_block_config(n, self.k)


def default_block_length(n: int) -> int:
    return max(2, math.isqrt(n))


def default_truncation_constant(increments) -> float:
    """Heuristic ``C``: a jump-robust volatility scale, the median of
    ``|sqrt(n) dX|`` divided by the Gaussian median ``0.6745``.

    With ``C`` equal to the volatility level, ``u_n = C sqrt(2 ln n / n)``
    sits at the largest Gaussian increment one expects among ``n``. A plain
    standard deviation would be inflated by the very jumps being truncated.
    """
    x = as_increments(increments)
    scale = float(np.median(np.abs(np.sqrt(x.size) * x))) / float(ndtri(0.75))
    if not scale > 0:
        raise DegenerateDataError("median absolute increment is zero; no truncation scale")
    return scale


def squared_increments(increments, truncation: TruncationRule | None = None):
    """Squared increments with truncated entries zeroed, plus the retention mask."""
    x = as_increments(increments, batch=True)
    sq = x * x
    if truncation is None:
        return sq, np.ones(x.shape, dtype=bool)
    keep = np.abs(x) <= truncation.threshold(x.shape[-1])
    return np.where(keep, sq, 0.0), keep


def _config(config) -> BlockConfig:
    return config if isinstance(config, BlockConfig) else BlockConfig(int(config))


def local_rv(increments, config) -> np.ndarray:
    """Block realized volatilities ``(n/k) * sum of k squared increments``.

    Uses the ``floor(n/k)`` non-overlapping blocks; trailing increments that do
    not fill a block are ignored.
    """
    cfg = _config(config)
    x = as_increments(increments)
    n, k = x.size, cfg.k
    m = n // k
    sq = x[: m * k] ** 2
    return (n / k) * sq.reshape(m, k).sum(axis=1)


def local_trv(increments, config) -> np.ndarray:
    """Truncated block realized volatilities."""
    cfg = _config(config)
    if cfg.truncation is None:
        raise ConfigError("local_trv needs a truncation rule")
    x = as_increments(increments)
    n, k = x.size, cfg.k
    m = n // k
    sq, keep = squared_increments(x, cfg.truncation)
    kept = keep[: m * k].reshape(m, k).sum(axis=1)
    if np.any(kept == 0):
        i = int(np.flatnonzero(kept == 0)[0])
        raise AllTruncated(f"every increment of block {i} exceeds the truncation level")
    return (n / k) * sq[: m * k].reshape(m, k).sum(axis=1)


def rolling_rv(increments, k: int, truncation: TruncationRule | None = None):
    """Left and right window realized volatilities at every split ``i = k..n-k``.

    ``left[i-k]`` covers increments ``i-k+1..i`` and ``right[i-k]`` covers
    ``i+1..i+k`` (1-based), both scaled by ``n/k``.
    """
    x = as_increments(increments, batch=True)
    n = x.shape[-1]
    if k > n // 2:
        raise WindowTooLarge(f"window k={k} exceeds n/2 for n={n}")
    sq, keep = squared_increments(x, truncation)
    w = sliding_sum(sq, k) * (n / k)
    if truncation is not None:
        counts = sliding_sum(keep.astype(float), k)
        if np.any(counts < 0.5):
            raise AllTruncated("a window of k increments lies entirely above the truncation level")
    # window ending at increment i starts at array index i-k
    return w[..., : n - 2 * k + 1], w[..., k:]


def quarticity(increments) -> float:
    """``(2n/3) * sum dX^4``, consistent for ``2 * sigma^4`` under constant volatility."""
    x = as_increments(increments)
    return 2.0 * x.size / 3.0 * float(np.sum(x**4))


def spot_vol_quartic(increments, K: int) -> np.ndarray:
    """Spot fourth-power volatility ``n^2/(3K) * sum of the K latest dX^4``.

    Returns an array indexed by grid point ``i = 0..n``; entry ``i`` uses
    increments ``i-K+1..i`` and is NaN for ``i < K``.
    """
    x = as_increments(increments)
    n = x.size
    if K > n:
        raise WindowTooLarge(f"spot window K={K} exceeds n={n}")
    if K < 1:
        raise ConfigError("spot window K must be positive")
    out = np.full(n + 1, np.nan)
    out[K:] = n * n / (3.0 * K) * sliding_sum(x**4, K)
    return out

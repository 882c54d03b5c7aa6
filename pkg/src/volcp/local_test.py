"""Ratio statistics for jumps in volatility, their extreme value rescalings,
the threshold test with implicit bandwidth, and wild-bootstrap critical values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from ._numeric import sliding_sum, upper_quantile
from .blockstats import BlockConfig, TruncationRule, local_rv, local_trv, rolling_rv, squared_increments
from .distributions import ev_quantile, ev_sf
from .errors import AllTruncated, ConfigError, DomainError, NoConvergence, ZeroDenominator
from .reports import LocalTestReport
from .series import as_increments

_LOG3 = math.log(3.0)
# rows x increments simulated per bootstrap batch
_BATCH_ELEMENTS = 2_000_000


@dataclass(frozen=True)
class LocalTestConfig:
    block: BlockConfig
    regularity_a: float = 0.5
    lipschitz_L: float = 1.0
    c_diamond: float = 2.1
    level: float = 0.05
    critical_source: Literal["limit", "bootstrap"] = "limit"
    bootstrap_B: int = 1000

    def __post_init__(self):
        if not self.c_diamond > 2:
            raise ConfigError("c_diamond must exceed 2")
        if not 0 < self.level < 1:
            raise ConfigError("level must lie in (0, 1)")
        if not 0 < self.regularity_a <= 1:
            raise ConfigError("regularity_a must lie in (0, 1]")
        if not self.lipschitz_L > 0:
            raise ConfigError("lipschitz_L must be positive")
        if self.critical_source not in ("limit", "bootstrap"):
            raise ConfigError(f"unknown critical source {self.critical_source!r}")


def _block(config) -> BlockConfig:
    if isinstance(config, LocalTestConfig):
        return config.block
    if isinstance(config, BlockConfig):
        return config
    return BlockConfig(int(config))


def gamma_m(m: int) -> float:
    if m < 3:
        raise DomainError(f"need m >= 3 blocks for the rescaling, got m={m}")
    return math.sqrt(4.0 * math.log(m) - 2.0 * math.log(math.log(m)))


def rescale_nonoverlap(v, k: int, m: int):
    """``sqrt(ln m) * (sqrt(k/2) V_n - gamma_m)``."""
    g = gamma_m(m)
    return math.sqrt(math.log(m)) * (math.sqrt(k / 2.0) * np.asarray(v) - g)


def rescale_overlap(v, k: int, m: int):
    """``sqrt(ln m) sqrt(k/2) V* - 2 ln m - ln ln m / 2 - ln 3``."""
    if m < 3:
        raise DomainError(f"need m >= 3 blocks for the rescaling, got m={m}")
    lm = math.log(m)
    return math.sqrt(lm) * math.sqrt(k / 2.0) * np.asarray(v) - 2.0 * lm - 0.5 * math.log(lm) - _LOG3


def v_stat_nonoverlap(increments, config) -> tuple[float, int]:
    """``max_i |RV_i / RV_{i+1} - 1|`` over adjacent non-overlapping blocks.

    Returns the statistic and the 0-based index of the left block of the
    maximizing pair.
    """
    cfg = _block(config)
    x = as_increments(increments)
    if x.size // cfg.k < 2:
        raise ConfigError("need at least two complete blocks")
    rv = local_trv(x, cfg) if cfg.truncation is not None else local_rv(x, cfg)
    if np.any(rv[1:] == 0):
        raise ZeroDenominator("a block realized volatility is zero")
    r = np.abs(rv[:-1] / rv[1:] - 1.0)
    i = int(np.argmax(r))
    return float(r[i]), i


def clean_splits(increment_mask: np.ndarray, k: int) -> np.ndarray:
    """Splits ``i`` (1-based, between increments ``i`` and ``i+1``) whose two
    adjacent windows of ``k`` increments are all retained by the mask.

    Returns a boolean array over ``i = 0..n``.
    """
    mask = np.asarray(increment_mask, dtype=bool)
    n = mask.size
    ok = np.zeros(n + 1, dtype=bool)
    if 2 * k > n:
        return ok
    bad = sliding_sum((~mask).astype(float), 2 * k)
    ok[k : n - k + 1] = bad < 0.5
    return ok


def _overlap_ratios(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    if np.any(right == 0):
        raise ZeroDenominator("a right-window realized volatility is zero")
    return np.abs(left / right - 1.0)


def v_stat_overlap(increments, config, increment_mask=None) -> tuple[float, int]:
    """``max_{i=k..n-k} |left_i / right_i - 1|`` over all overlapping windows.

    With ``increment_mask``, only splits whose windows avoid masked-out
    increments enter the maximum. Returns the statistic and the split index
    ``i`` of the first maximum.
    """
    cfg = _block(config)
    x = as_increments(increments)
    n, k = x.size, cfg.k
    left, right = rolling_rv(x, k, cfg.truncation)
    if increment_mask is None:
        r = _overlap_ratios(left, right)
        j = int(np.argmax(r))
        return float(r[j]), j + k
    valid = clean_splits(increment_mask, k)[k : n - k + 1]
    if not valid.any():
        return 0.0, -1
    r = _overlap_ratios(left[valid], right[valid])
    j = int(np.argmax(r))
    return float(r[j]), int(np.flatnonzero(valid)[j]) + k


def _batch_overlap_stats(x2d: np.ndarray, k: int) -> np.ndarray:
    left, right = rolling_rv(x2d, k)
    return _overlap_ratios(left, right).max(axis=1)


def _batch_nonoverlap_stats(x2d: np.ndarray, k: int) -> np.ndarray:
    n = x2d.shape[1]
    m = n // k
    rv = (x2d[:, : m * k] ** 2).reshape(x2d.shape[0], m, k).sum(axis=2)
    if np.any(rv[:, 1:] == 0):
        raise ZeroDenominator("a block realized volatility is zero")
    return np.abs(rv[:, :-1] / rv[:, 1:] - 1.0).max(axis=1)


def _centred_window_bounds(n: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    j = np.arange(n)
    return np.clip(j - k // 2, 0, n), np.clip(j - k // 2 + k, 0, n)


def bootstrap_vol_shape(increments, k: int, truncation: TruncationRule | None = None) -> np.ndarray:
    """Smoothed spot variance per increment for the wild bootstrap.

    First a pre-estimate: ``n`` times the mean retained squared increment over
    a centred window of ``k`` increments. Then an equal-weight moving average of
    that pre-estimate over a second centred ``k`` window. Both windows shrink at
    the series edges. A single window leaves relative noise of order
    ``k^{-1/2}`` in the shape, which the bootstrap would mistake for genuine
    volatility variation and so inflate its critical values.
    """
    x = as_increments(increments)
    n = x.size
    sq, keep = squared_increments(x, truncation)
    lo, hi = _centred_window_bounds(n, k)
    ckeep = np.concatenate(([0], np.cumsum(keep)))
    counts = ckeep[hi] - ckeep[lo]
    if np.any(counts == 0):
        raise AllTruncated("bootstrap smoothing window without retained increments")
    # window sums via sliding_sum keep the compensated accumulation
    csq = np.concatenate(([0.0], np.cumsum(sq)))
    sums = csq[hi] - csq[lo]
    inner = hi - lo == k
    sums[inner] = sliding_sum(sq, k)[lo[inner]]
    pre = n * sums / counts
    cpre = np.concatenate(([0.0], np.cumsum(pre)))
    return (cpre[hi] - cpre[lo]) / (hi - lo)


def wild_bootstrap_distribution(
    increments,
    config,
    B: int,
    seed=None,
    *,
    alignment: Literal["overlapping", "nonoverlapping"] | None = None,
) -> np.ndarray:
    """Rescaled statistics of ``B`` driftless, jumpless paths with the estimated volatility shape."""
    if B < 1:
        raise ConfigError("bootstrap needs B >= 1")
    cfg = _block(config)
    alignment = alignment or cfg.alignment
    x = as_increments(increments)
    n, k = x.size, cfg.k
    m = n // k
    sd = np.sqrt(bootstrap_vol_shape(x, k, cfg.truncation) / n)
    rng = np.random.default_rng(seed)
    out = np.empty(B)
    rows = max(1, _BATCH_ELEMENTS // n)
    for start in range(0, B, rows):
        b = min(rows, B - start)
        paths = rng.standard_normal((b, n)) * sd
        if alignment == "overlapping":
            out[start : start + b] = rescale_overlap(_batch_overlap_stats(paths, k), k, m)
        else:
            out[start : start + b] = rescale_nonoverlap(_batch_nonoverlap_stats(paths, k), k, m)
    return out


def wild_bootstrap_critical_value(increments, config, B: int, seed=None, level: float | None = None) -> float:
    """Empirical ``(1-level)`` quantile of the wild-bootstrap rescaled statistic."""
    if B < 100:
        raise ConfigError("wild bootstrap needs B >= 100")
    if level is None:
        level = config.level if isinstance(config, LocalTestConfig) else 0.05
    return upper_quantile(wild_bootstrap_distribution(increments, config, B, seed), level)


def test_vol_jump(increments, config: LocalTestConfig, seed=None) -> LocalTestReport:
    """Test for a jump in volatility with the (optionally truncated) ratio statistic."""
    x = as_increments(increments)
    n = x.size
    cfg = config.block
    if 2 * cfg.k > n:
        raise ConfigError(f"need n >= 2k, got n={n}, k={cfg.k}")
    warnings = cfg.validate(n)
    m = n // cfg.k
    if cfg.alignment == "overlapping":
        raw, arg = v_stat_overlap(x, cfg)
        rescaled = float(rescale_overlap(raw, cfg.k, m))
    else:
        raw, arg = v_stat_nonoverlap(x, cfg)
        rescaled = float(rescale_nonoverlap(raw, cfg.k, m))
    details = {"alignment": cfg.alignment}
    if config.critical_source == "bootstrap":
        dist = wild_bootstrap_distribution(x, cfg, config.bootstrap_B, seed)
        crit = upper_quantile(dist, config.level)
        p_value = None
        details["bootstrap_B"] = config.bootstrap_B
        details["bootstrap_p_value"] = float(np.mean(dist >= rescaled))
    else:
        crit = ev_quantile(1.0 - config.level)
        p_value = ev_sf(rescaled)
    u = cfg.truncation.threshold(n) if cfg.truncation is not None else None
    return LocalTestReport(
        name="local",
        raw_stat=raw,
        rescaled_stat=rescaled,
        critical_value=crit,
        decision=rescaled > crit,
        level=config.level,
        critical_source=config.critical_source,
        p_value=p_value,
        argmax_index=arg,
        details=details,
        warnings=warnings,
        k=cfg.k,
        m=m,
        truncation_u=u,
    )


test_vol_jump.__test__ = False


def _k_map(k: float, n: int, a: float, L: float) -> float:
    m = max(2, n // max(2, min(int(round(k)), n // 2)))
    return (math.sqrt(math.log(m)) * n**a / L) ** (2.0 / (2.0 * a + 1.0))


def solve_k_diamond(n: int, regularity_a: float = 0.5, lipschitz_L: float = 1.0,
                    damping: float = 0.5, max_iter: int = 100) -> tuple[int, int]:
    """Block length ``k`` solving ``k = (sqrt(ln floor(n/k)) n^a / L)^{2/(2a+1)}``.

    Damped fixed-point iteration from ``n^{2a/(2a+1)}``; stops at the first
    rounded iterate that the map sends to itself after rounding. When the map
    steps over the diagonal (no integer fixed point) the iterates settle into a
    band around the jump, and the band's median is used. The result is clipped
    to ``[2, n/2]``.
    """
    a, L = regularity_a, lipschitz_L
    k = n ** (2.0 * a / (2.0 * a + 1.0))
    history = []
    for _ in range(max_iter):
        k = (1.0 - damping) * k + damping * _k_map(k, n, a, L)
        cur = int(round(k))
        if int(round(_k_map(cur, n, a, L))) == cur:
            break
        history.append(cur)
    else:
        tail = history[-10:]
        if max(tail) - min(tail) > 2:
            raise NoConvergence(f"k-diamond iteration did not settle for n={n}, a={a}, L={L}")
        cur = int(np.median(tail))
    k_int = min(max(cur, 2), n // 2)
    return k_int, n // k_int


@dataclass
class PsiDiamondResult:
    decision: bool
    k: int
    m: int
    threshold: float
    v_star: float
    argmax_index: int
    details: dict = field(default_factory=dict)


def psi_diamond(
    increments,
    regularity_a: float = 0.5,
    lipschitz_L: float = 1.0,
    c_diamond: float = 2.1,
    truncation: TruncationRule | None = None,
    increment_mask=None,
) -> PsiDiamondResult:
    """Reject when ``V*`` at the implicit bandwidth exceeds ``2 C sqrt(2 ln m / k)``."""
    if not c_diamond > 2:
        raise ConfigError("c_diamond must exceed 2")
    if not 0 < regularity_a <= 1:
        raise ConfigError("regularity_a must lie in (0, 1]")
    if not lipschitz_L > 0:
        raise ConfigError("lipschitz_L must be positive")
    x = as_increments(increments)
    k, m = solve_k_diamond(x.size, regularity_a, lipschitz_L)
    threshold = 2.0 * c_diamond * math.sqrt(2.0 * math.log(m) / k)
    v, arg = v_stat_overlap(x, BlockConfig(k, truncation), increment_mask)
    return PsiDiamondResult(decision=v >= threshold, k=k, m=m, threshold=threshold,
                            v_star=v, argmax_index=arg)

"""Localization of volatility jumps: difference scan, single estimate and the
sequential top-down search for several change points.
"""
from __future__ import annotations

import math

import numpy as np

from ._numeric import sliding_sum
from .blockstats import TruncationRule, squared_increments
from .errors import ConfigError, MaxIterations
from .local_test import LocalTestConfig, clean_splits, psi_diamond
from .reports import ChangePointResult
from .series import as_increments

MAX_ROUNDS = 50


def v_diamond_series(increments, k: int, truncation: TruncationRule | None = None) -> np.ndarray:
    """``k^{-1/2} |sum_left n dX^2 - sum_right n dX^2|`` at every split ``i = 0..n``.

    Entries outside ``k..n-k`` are zero.
    """
    x = as_increments(increments)
    n = x.size
    if 2 * k > n:
        raise ConfigError(f"scan window k={k} exceeds n/2 for n={n}")
    sq, _ = squared_increments(x, truncation)
    w = sliding_sum(n * sq, k)
    out = np.zeros(n + 1)
    out[k : n - k + 1] = np.abs(w[: n - 2 * k + 1] - w[k:]) / math.sqrt(k)
    return out


def estimate_single(increments, k: int, truncation: TruncationRule | None = None,
                    clean: np.ndarray | None = None) -> tuple[float, int]:
    """Change time ``argmax_i V_i / n`` (first maximum), optionally restricted to ``clean`` splits."""
    x = as_increments(increments)
    v = v_diamond_series(x, k, truncation)
    if clean is None:
        clean = np.zeros(x.size + 1, dtype=bool)
        clean[k : x.size - k + 1] = True
    if not clean.any():
        raise ConfigError("no admissible split left for estimation")
    cand = np.flatnonzero(clean)
    i = int(cand[np.argmax(v[cand])])
    return i / x.size, i


def detect_multiple(increments, config: LocalTestConfig, r: int | None = None) -> ChangePointResult:
    """Sequential detection: test, locate the strongest split, cut ``r`` increments
    on either side, and repeat until the threshold test accepts.

    Windows never bridge a removed stretch; splits whose windows touch one are
    dropped from both the test and the scan.
    """
    x = as_increments(increments)
    n = x.size
    k = config.block.k
    trunc = config.block.truncation
    r = 4 * k if r is None else int(r)
    if not k <= r <= n // 4:
        raise ConfigError(f"separation radius r={r} must satisfy k={k} <= r <= n/4={n // 4}")
    warnings = config.block.validate(n)
    mask = np.ones(n, dtype=bool)
    found: list[int] = []
    rounds = []
    for _ in range(MAX_ROUNDS):
        psi = psi_diamond(x, config.regularity_a, config.lipschitz_L, config.c_diamond,
                          trunc, increment_mask=mask)
        info = {"v_star": psi.v_star, "threshold": psi.threshold, "k_diamond": psi.k,
                "m_diamond": psi.m, "reject": bool(psi.decision)}
        if not psi.decision:
            rounds.append(info)
            break
        clean = clean_splits(mask, k)
        if not clean.any():
            warnings.append("no split with clean windows left for estimation")
            rounds.append(info)
            break
        theta, i = estimate_single(x, k, trunc, clean)
        info.update(theta_hat=theta, index=i)
        rounds.append(info)
        found.append(i)
        mask[max(i - r, 0) : min(i + r, n)] = False
    else:
        raise MaxIterations(f"no acceptance after {MAX_ROUNDS} rounds")
    idx = sorted(found)
    clean_idx = np.flatnonzero(clean_splits(mask, k)).tolist()
    return ChangePointResult(
        theta_hats=[i / n for i in idx],
        indices=idx,
        clean_indices=clean_idx,
        iterations=len(rounds),
        rounds=rounds,
        warnings=warnings,
    )

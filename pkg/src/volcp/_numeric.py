"""Compensated (Kahan-Neumaier) sliding sums and empirical quantiles."""
from __future__ import annotations

import math

import numba
import numpy as np


@numba.njit(cache=True)
def _neumaier_add(s, c, x):
    t = s + x
    if abs(s) >= abs(x):
        c += (s - t) + x
    else:
        c += (x - t) + s
    return t, c


@numba.njit(cache=True)
def _sliding_sum_1d(x, k, out):
    # out[j] = sum(x[j:j+k]); running sum with Neumaier compensation
    s = 0.0
    c = 0.0
    for j in range(k):
        s, c = _neumaier_add(s, c, x[j])
    out[0] = s + c
    for j in range(k, x.shape[0]):
        s, c = _neumaier_add(s, c, x[j])
        s, c = _neumaier_add(s, c, -x[j - k])
        out[j - k + 1] = s + c


@numba.njit(cache=True)
def _sliding_sum_2d(x, k, out):
    for r in range(x.shape[0]):
        _sliding_sum_1d(x[r], k, out[r])


def sliding_sum(x: np.ndarray, k: int) -> np.ndarray:
    """Sums over every window of ``k`` consecutive entries along the last axis.

    ``result[..., j] = x[..., j:j+k].sum()``, length ``x.shape[-1] - k + 1``.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    m = x.shape[-1] - k + 1
    if m < 1:
        raise ValueError("window longer than input")
    if x.ndim == 1:
        out = np.empty(m)
        _sliding_sum_1d(x, k, out)
    else:
        flat = x.reshape(-1, x.shape[-1])
        out = np.empty((flat.shape[0], m))
        _sliding_sum_2d(flat, k, out)
        out = out.reshape(*x.shape[:-1], m)
    return out


def order_statistic_index(alpha: float, size: int) -> int:
    """0-based index of the ``ceil((1-alpha) * size)``-th order statistic."""
    rank = math.ceil(round((1.0 - alpha) * size, 9))
    return min(max(rank, 1), size) - 1


def upper_quantile(values, alpha: float) -> float:
    """Empirical ``(1-alpha)``-quantile as the left-continuous inverse of the ECDF."""
    values = np.sort(np.asarray(values, dtype=float))
    return float(values[order_statistic_index(alpha, values.size)])

"""Seeded Monte Carlo replications for size, power and null-law studies.

Replication ``r`` of a study seeded by ``s`` always uses ``derive_seed(s, r)``,
so results do not depend on the number of workers or on scheduling.
"""
from __future__ import annotations

import functools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from ._numeric import upper_quantile
from .blockstats import BlockConfig, TruncationRule
from .cusum import test_constant_vol
from .distributions import ev_cdf, ev_quantile, ks_cdf, ks_quantile
from .global_test import SCALE, GlobalTestConfig, cusum_q, multiplier_bootstrap, standardized_vbar
from .local_test import LocalTestConfig, rescale_overlap, v_stat_overlap, wild_bootstrap_distribution
from .simulate import PathScenario, derive_seed, simulate_ito

DEFAULT_LEVELS = (0.01, 0.05, 0.10)
# spawn key for bootstrap draws; path streams use keys 0..3
_BOOTSTRAP_KEY = 1 << 20


def replicate(fn: Callable[[int], object], reps: int, seed: int, workers: int | None = 1,
              chunksize: int | None = None) -> list:
    """``[fn(derive_seed(seed, r)) for r in range(reps)]``, optionally in worker processes.

    ``fn`` must be picklable when ``workers > 1`` (module-level function or
    ``functools.partial`` of one).
    """
    seeds = [derive_seed(seed, r) for r in range(reps)]
    workers = workers or os.cpu_count() or 1
    if workers <= 1 or reps <= 1:
        return [fn(s) for s in seeds]
    chunksize = chunksize or max(1, reps // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, seeds, chunksize=chunksize))


# -- per-replication kernels -------------------------------------------------------

def simulate_increments(scenario: PathScenario, seed: int) -> np.ndarray:
    return np.diff(simulate_ito(scenario.with_seed(seed)).prices.values)


def local_stat(scenario: PathScenario, block: BlockConfig, seed: int) -> float:
    """Rescaled overlapping ratio statistic of one simulated path."""
    x = simulate_increments(scenario, seed)
    v, _ = v_stat_overlap(x, block)
    return float(rescale_overlap(v, block.k, x.size // block.k))


def local_stat_with_bootstrap(scenario: PathScenario, config: LocalTestConfig, seed: int,
                              levels: Sequence[float] = DEFAULT_LEVELS) -> tuple[float, list[float]]:
    """Rescaled statistic and wild-bootstrap critical values at ``levels``."""
    x = simulate_increments(scenario, seed)
    block = config.block
    v, _ = v_stat_overlap(x, block)
    stat = float(rescale_overlap(v, block.k, x.size // block.k))
    dist = wild_bootstrap_distribution(x, block, config.bootstrap_B, derive_seed(seed, _BOOTSTRAP_KEY))
    return stat, [upper_quantile(dist, a) for a in levels]


def parametric_stat(scenario: PathScenario, seed: int) -> float:
    return test_constant_vol(simulate_increments(scenario, seed)).rescaled_stat


def global_stat_with_bootstrap(scenario: PathScenario, config: GlobalTestConfig, seed: int,
                               levels: Sequence[float] = DEFAULT_LEVELS) -> tuple[float, list[float]]:
    x = simulate_increments(scenario, seed)
    K = config.window(x.size)
    v, _ = cusum_q(x)
    draws = multiplier_bootstrap(x, K, config.bootstrap_B, derive_seed(seed, _BOOTSTRAP_KEY))
    return SCALE * v, [upper_quantile(draws, a) for a in levels]


def standardized_stat(scenario: PathScenario, K: int | None, seed: int) -> float:
    return standardized_vbar(simulate_increments(scenario, seed), K)[1]


# -- summaries -------------------------------------------------------------------------

def ks_distance(sample, cdf: Callable[[float], float]) -> float:
    """Sup distance between the empirical CDF of ``sample`` and ``cdf``."""
    x = np.sort(np.asarray(sample, dtype=float))
    f = np.array([cdf(v) for v in x])
    i = np.arange(1, x.size + 1)
    return float(max(np.max(i / x.size - f), np.max(f - (i - 1) / x.size)))


@dataclass
class MonteCarloTable:
    statistic: str
    scenario: str
    reps: int
    levels: list[float]
    limit_rates: list[float]
    bootstrap_rates: list[float] | None = None
    ecdf: list[tuple[float, float, float]] = field(default_factory=list)
    stats: list[float] = field(default_factory=list)

    def rows(self) -> list[tuple[str, float, float, float, float | None]]:
        """Flat rows ``(section, key, empirical, limit, bootstrap)``."""
        out = []
        for j, a in enumerate(self.levels):
            b = self.bootstrap_rates[j] if self.bootstrap_rates is not None else None
            out.append(("rejection", a, self.limit_rates[j], a, b))
        for q, e, l in self.ecdf:
            out.append(("ecdf", q, e, l, None))
        return out


_LAWS = {
    "local": (ev_cdf, ev_quantile),
    "parametric": (ks_cdf, ks_quantile),
    "global-standardized": (ks_cdf, ks_quantile),
}


def summarize(statistic: str, scenario: str, stats, levels=DEFAULT_LEVELS, boot_crit=None,
              ecdf_points: int = 41) -> MonteCarloTable:
    stats = np.asarray(stats, dtype=float)
    levels = [float(a) for a in levels]
    boot_rates = None
    if boot_crit is not None:
        crit = np.asarray(boot_crit, dtype=float)
        boot_rates = [float(np.mean(stats > crit[:, j])) for j in range(len(levels))]
    if statistic in _LAWS:
        cdf, quantile = _LAWS[statistic]
        limit_rates = [float(np.mean(stats > quantile(1.0 - a))) for a in levels]
        grid = np.quantile(stats, np.linspace(0.0, 1.0, ecdf_points)) if stats.size else []
        srt = np.sort(stats)
        ecdf = [(float(q), float(np.searchsorted(srt, q, side="right") / srt.size), cdf(float(q)))
                for q in grid]
    else:
        limit_rates = [float("nan")] * len(levels)
        ecdf = []
    return MonteCarloTable(statistic, scenario, int(stats.size), levels, limit_rates,
                           boot_rates, ecdf, stats.tolist())


def run_study(statistic: str, scenario: PathScenario, reps: int, seed: int, *, k: int | None = None,
              truncation: TruncationRule | None = None, bootstrap_B: int | None = None,
              K: int | None = None, levels=DEFAULT_LEVELS, workers: int | None = 1) -> MonteCarloTable:
    """Run ``reps`` replications of ``statistic`` on ``scenario`` and tabulate them."""
    boot = None
    if statistic == "local":
        block = BlockConfig(int(k), truncation)
        if bootstrap_B:
            cfg = LocalTestConfig(block, critical_source="bootstrap", bootstrap_B=bootstrap_B)
            fn = functools.partial(local_stat_with_bootstrap, scenario, cfg, levels=tuple(levels))
            res = replicate(fn, reps, seed, workers)
            stats, boot = [r[0] for r in res], [r[1] for r in res]
        else:
            stats = replicate(functools.partial(local_stat, scenario, block), reps, seed, workers)
    elif statistic == "parametric":
        stats = replicate(functools.partial(parametric_stat, scenario), reps, seed, workers)
    elif statistic == "global":
        cfg = GlobalTestConfig(spot_window=K, bootstrap_B=bootstrap_B or 2000)
        fn = functools.partial(global_stat_with_bootstrap, scenario, cfg, levels=tuple(levels))
        res = replicate(fn, reps, seed, workers)
        stats, boot = [r[0] for r in res], [r[1] for r in res]
    elif statistic == "global-standardized":
        stats = replicate(functools.partial(standardized_stat, scenario, K), reps, seed, workers)
    else:
        raise ValueError(f"unknown statistic {statistic!r}")
    return summarize(statistic, scenario.name, stats, levels, boot)

"""Seeded path generators: constant, seasonal stochastic and fractional
log-volatility models, volatility and price jumps, and named scenario presets.

All randomness flows from one integer seed through ``numpy.random.SeedSequence``;
the price noise, volatility noise, fractional noise and jump draws each get
their own child stream so switching one component on or off leaves the
others unchanged.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field, replace
from typing import Union

import numpy as np
from scipy.signal import lfilter

from .errors import CholeskyFailure, ConfigError, GridTooLarge
from .series import LogPriceSeries

FBM_MAX_N = 5000

_STREAMS = ("price", "vol_perp", "fbm", "jumps")


def seasonality(t) -> np.ndarray:
    """Deterministic intraday shape ``1 - 0.2 sin(3 pi t / 4)``."""
    return 1.0 - 0.2 * np.sin(0.75 * np.pi * np.asarray(t, dtype=float))


def derive_seed(seed: int, index: int) -> int:
    """Independent 64-bit seed for replication ``index`` of a study seeded by ``seed``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(index),))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _streams(seed: int) -> dict[str, np.random.Generator]:
    children = np.random.SeedSequence(int(seed)).spawn(len(_STREAMS))
    return {name: np.random.default_rng(c) for name, c in zip(_STREAMS, children)}


# -- fractional Brownian motion -------------------------------------------------

def fgn_autocovariance(m: int, hurst: float) -> np.ndarray:
    """Autocovariance of unit-spacing fractional Gaussian noise at lags ``0..m-1``."""
    k = np.arange(m, dtype=float)
    h2 = 2.0 * hurst
    return 0.5 * (np.abs(k + 1) ** h2 - 2.0 * k**h2 + np.abs(k - 1) ** h2)


@functools.lru_cache(maxsize=2)
def _fgn_cholesky(m: int, hurst: float) -> np.ndarray:
    gam = fgn_autocovariance(m, hurst)
    idx = np.arange(m)
    cov = gam[np.abs(idx[:, None] - idx[None, :])]
    try:
        factor = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as exc:
        raise CholeskyFailure(
            f"fGn covariance not numerically positive definite (m={m}, H={hurst})"
        ) from exc
    factor.setflags(write=False)
    return factor


def _check_hurst(hurst: float) -> None:
    if not 0.0 < hurst < 1.0:
        raise ConfigError(f"Hurst parameter must lie in (0, 1), got {hurst}")


def fgn_increments(m: int, hurst: float, rng: np.random.Generator, *, horizon: float = 1.0,
                   paths: int | None = None) -> np.ndarray:
    """``m`` increments of fBm over an equidistant grid covering ``[0, horizon]``.

    Exact Gaussian law: Cholesky factor of the fGn covariance times i.i.d.
    normals, scaled by ``(horizon/m)^H``.
    """
    _check_hurst(hurst)
    if m > FBM_MAX_N:
        raise GridTooLarge(f"Cholesky fBm limited to {FBM_MAX_N} steps, got {m}")
    if m < 1:
        raise ConfigError("need at least one step")
    factor = _fgn_cholesky(int(m), float(hurst))
    scale = (horizon / m) ** hurst
    if paths is None:
        return scale * (factor @ rng.standard_normal(m))
    z = rng.standard_normal((m, paths))
    return scale * (factor @ z).T


def simulate_fbm_cholesky(n: int, hurst: float, seed=None, *, paths: int | None = None) -> np.ndarray:
    """fBm values ``B^H(i/n)``, ``i = 0..n`` (``B^H(0) = 0``).

    With ``paths`` returns an array of shape ``(paths, n + 1)``.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    inc = fgn_increments(n, hurst, rng, paths=paths)
    out = np.zeros(inc.shape[:-1] + (n + 1,))
    np.cumsum(inc, axis=-1, out=out[..., 1:])
    return out


# -- volatility models ------------------------------------------------------------

@dataclass(frozen=True)
class ConstantVol:
    sigma: float = 1.0


@dataclass(frozen=True)
class SeasonalSV:
    """``sigma_t = (1 + c (rho W_t + sqrt(1-rho^2) W'_t)) v_t`` with price Brownian motion ``W``."""

    c: float = 0.1
    rho: float = 0.5
    level: float = 1.0

    def __post_init__(self):
        if not -1.0 <= self.rho <= 1.0:
            raise ConfigError("correlation rho must lie in [-1, 1]")


@dataclass(frozen=True)
class FractionalOULogVol:
    """``d log s = -kappa log s dt + nu dB^H``, ``sigma_t = s_t v_t``, ``s_0 = 1``."""

    hurst: float = 0.2
    kappa: float = 0.1
    nu: float = 0.1

    def __post_init__(self):
        _check_hurst(self.hurst)


@dataclass(frozen=True)
class PiecewiseConstant:
    """Levels ``levels[j]`` on ``[times[j-1], times[j])`` with ``times`` the break points."""

    times: tuple[float, ...] = ()
    levels: tuple[float, ...] = (1.0,)

    def __post_init__(self):
        if len(self.levels) != len(self.times) + 1:
            raise ConfigError("piecewise volatility needs len(levels) == len(times) + 1")


@dataclass(frozen=True)
class UserPath:
    """Volatility supplied per increment (left endpoints, length ``n``)."""

    values: tuple[float, ...]


@dataclass(frozen=True)
class RegimeSwitch:
    """``before`` on ``[0, at)``, ``after`` from ``at`` on.

    A fractional ``after`` model starts from the current level of ``before``
    so the volatility is continuous at the switch.
    """

    before: "VolModel"
    after: "VolModel"
    at: float = 0.5


VolModel = Union[ConstantVol, SeasonalSV, FractionalOULogVol, PiecewiseConstant, UserPath, RegimeSwitch]


@dataclass(frozen=True)
class VolJump:
    time: float
    size: float

    def __post_init__(self):
        if not 0 < self.time < 1:
            raise ConfigError("volatility jump time must lie in (0, 1)")


@dataclass(frozen=True)
class PriceJumps:
    """Compound jumps: ``count`` uniform arrivals plus ``fixed_times``, sizes ``N(mean, var)``."""

    count: int = 1
    mean: float = 0.5
    var: float = 0.1
    fixed_times: tuple[float, ...] = ()

    def __post_init__(self):
        if self.count < 0:
            raise ConfigError("price jump count must be non-negative")
        if self.var < 0:
            raise ConfigError("price jump variance must be non-negative")
        if any(not 0 <= t <= 1 for t in self.fixed_times):
            raise ConfigError("price jump times must lie in [0, 1]")


@dataclass(frozen=True)
class PathScenario:
    n: int
    vol_model: VolModel = field(default_factory=ConstantVol)
    drift: float = 0.0
    x0: float = 0.0
    vol_jump: VolJump | None = None
    price_jumps: PriceJumps | None = None
    seed: int = 0
    name: str = "custom"

    def __post_init__(self):
        if self.n < 2:
            raise ConfigError("scenario needs n >= 2")

    def with_seed(self, seed: int) -> "PathScenario":
        return replace(self, seed=int(seed))


@dataclass(frozen=True, eq=False)
class SimulatedPath:
    prices: LogPriceSeries
    vol_path: np.ndarray
    true_change_points: tuple[float, ...]
    jumps: tuple[tuple[int, float], ...] = ()


def simulate_fou_logvol(n: int, hurst: float, seed=None, *, kappa: float = 0.1, nu: float = 0.1,
                        start: int = 0, log_s0: float = 0.0, noise: np.ndarray | None = None) -> np.ndarray:
    """Fractional OU log-volatility times the seasonal shape on grid points ``0..n-1``.

    Euler steps of ``d log s = -kappa log s dt + nu dB^H`` begin at grid index
    ``start`` from ``log_s0``; entries before ``start`` are NaN. ``noise``
    replaces the fBm increments (length ``n - start``), e.g. zeros.
    """
    _check_hurst(hurst)
    steps = n - start
    if noise is None:
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        noise = fgn_increments(steps, hurst, rng, horizon=steps / n) if steps > 0 else np.zeros(0)
    r = 1.0 - kappa / n
    ls = np.full(n, np.nan)
    if steps > 0:
        # ls[start + i] = r^i log_s0 + nu * sum_{j<i} r^(i-1-j) noise[j]
        driven = lfilter([nu], [1.0, -r], np.asarray(noise, dtype=float)[: steps - 1])
        ls[start:] = log_s0 * r ** np.arange(steps)
        ls[start + 1 :] += driven
    return np.exp(ls) * seasonality(np.arange(n) / n)


def _vol_path(model: VolModel, n: int, dW: np.ndarray, streams, start: int = 0,
              prev: np.ndarray | None = None) -> np.ndarray:
    """Volatility at grid points ``0..n-1``; only entries ``>= start`` are meaningful."""
    t = np.arange(n) / n
    if isinstance(model, ConstantVol):
        return np.full(n, float(model.sigma))
    if isinstance(model, SeasonalSV):
        dWp = streams["vol_perp"].standard_normal(n) / math.sqrt(n)
        dM = model.c * (model.rho * dW + math.sqrt(1.0 - model.rho**2) * dWp)
        M = np.concatenate(([0.0], np.cumsum(dM[:-1])))
        return (model.level + M) * seasonality(t)
    if isinstance(model, FractionalOULogVol):
        log_s0 = 0.0
        if start > 0 and prev is not None:
            log_s0 = math.log(prev[start] / seasonality(start / n))
        noise = fgn_increments(n - start, model.hurst, streams["fbm"], horizon=(n - start) / n)
        return simulate_fou_logvol(n, model.hurst, kappa=model.kappa, nu=model.nu,
                                   start=start, log_s0=log_s0, noise=noise)
    if isinstance(model, PiecewiseConstant):
        idx = np.searchsorted(np.asarray(model.times, dtype=float), t, side="right")
        return np.asarray(model.levels, dtype=float)[idx]
    if isinstance(model, UserPath):
        v = np.asarray(model.values, dtype=float)
        if v.size != n:
            raise ConfigError(f"user volatility path has length {v.size}, expected {n}")
        return v.copy()
    if isinstance(model, RegimeSwitch):
        before = _vol_path(model.before, n, dW, streams)
        at = int(math.ceil(model.at * n))
        after = _vol_path(model.after, n, dW, streams, start=at, prev=before)
        return np.where(np.arange(n) >= at, after, before)
    raise ConfigError(f"unknown volatility model {model!r}")


def simulate_price_jumps(spec: PriceJumps | None, n: int, seed=None) -> list[tuple[int, float]]:
    """Jump increment indices (1-based) and sizes; arrivals snapped to the nearest grid point."""
    if spec is None:
        return []
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    times = list(rng.uniform(0.0, 1.0, size=spec.count)) + list(spec.fixed_times)
    sizes = rng.normal(spec.mean, math.sqrt(spec.var), size=len(times))
    out = []
    for t, s in zip(times, sizes):
        j = min(max(int(round(t * n)), 1), n)
        out.append((j, float(s)))
    return out


def simulate_ito(scenario: PathScenario) -> SimulatedPath:
    """Euler scheme on the observation grid with left-endpoint volatility."""
    n = scenario.n
    streams = _streams(scenario.seed)
    dW = streams["price"].standard_normal(n) / math.sqrt(n)
    sigma = _vol_path(scenario.vol_model, n, dW, streams)
    changes = []
    if isinstance(scenario.vol_model, RegimeSwitch):
        changes.append(scenario.vol_model.at)
    if scenario.vol_jump is not None:
        at = int(math.ceil(scenario.vol_jump.time * n))
        sigma = sigma.copy()
        sigma[at:] += scenario.vol_jump.size
        changes.append(scenario.vol_jump.time)
    dX = scenario.drift / n + sigma * dW
    jumps = simulate_price_jumps(scenario.price_jumps, n, streams["jumps"])
    for j, size in jumps:
        dX[j - 1] += size
    X = np.empty(n + 1)
    X[0] = scenario.x0
    np.cumsum(dX, out=X[1:])
    X[1:] += scenario.x0
    return SimulatedPath(LogPriceSeries(X), sigma, tuple(sorted(changes)), tuple(jumps))


# -- presets ------------------------------------------------------------------------

PRESET_NAMES = ("sv-null", "sv-jump", "fou-null", "fou-jump", "global-null", "global-alt")

_PRESET_K = {1000: 275, 10000: 500}


def preset_block_length(n: int) -> int:
    """Block length used with the presets: 275 at n=1000, 500 at n=10000, else floor(sqrt(n))."""
    return _PRESET_K.get(n, max(2, math.isqrt(n)))


def preset(name: str, n: int | None = None, seed: int = 0, *, vol_jump_size: float = 0.2) -> PathScenario:
    """Named simulation designs.

    ``sv-*`` use the seasonal stochastic volatility, ``fou-*`` the fractional
    OU log-volatility with ``H = 0.2``; both carry one price jump at a uniform
    time, and the ``*-jump`` variants add a volatility jump at ``t = 2/3`` with
    a simultaneous price jump. ``global-alt`` switches from seasonal SV to a
    fractional OU with ``H = 0.15`` at ``t = 1/2``.
    """
    common = dict(drift=0.1, x0=4.0, seed=int(seed), name=name)
    if name in ("sv-null", "sv-jump", "fou-null", "fou-jump"):
        n = 1000 if n is None else n
        model = SeasonalSV() if name.startswith("sv") else FractionalOULogVol(hurst=0.2)
        if name.endswith("jump"):
            return PathScenario(n, model, vol_jump=VolJump(2 / 3, vol_jump_size),
                                price_jumps=PriceJumps(count=1, fixed_times=(2 / 3,)), **common)
        return PathScenario(n, model, price_jumps=PriceJumps(count=1), **common)
    if name == "global-null":
        return PathScenario(10000 if n is None else n, SeasonalSV(), **common)
    if name == "global-alt":
        model = RegimeSwitch(SeasonalSV(), FractionalOULogVol(hurst=0.15), at=0.5)
        return PathScenario(10000 if n is None else n, model, **common)
    raise ConfigError(f"unknown scenario {name!r}; choose from {', '.join(PRESET_NAMES)}")

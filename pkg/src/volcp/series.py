"""Observation containers, increments, block-length validation and CSV input."""
from __future__ import annotations

import csv
import datetime as _dt
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import BlockTooLarge, BlockTooSmall, InputError

# relative grid deviation tolerated when checking equidistant timestamps
GRID_TOLERANCE = 0.10


def _frozen_array(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class LogPriceSeries:
    """Equidistant log prices ``X_0, X_{1/n}, ..., X_1`` on the unit interval."""

    values: np.ndarray

    def __post_init__(self):
        arr = _frozen_array(self.values)
        if arr.ndim != 1:
            raise InputError("log prices must be one-dimensional")
        if arr.size < 3:
            raise InputError(f"need at least 3 observations (n >= 2), got {arr.size}")
        if not np.all(np.isfinite(arr)):
            bad = int(np.flatnonzero(~np.isfinite(arr))[0])
            raise InputError(f"non-finite log price at position {bad}")
        object.__setattr__(self, "values", arr)

    @property
    def n(self) -> int:
        return self.values.size - 1

    @property
    def mesh(self) -> float:
        return 1.0 / self.n

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n + 1) / self.n

    def increments(self) -> "IncrementSeries":
        return increments(self)

    @classmethod
    def from_prices(cls, prices) -> "LogPriceSeries":
        prices = np.asarray(prices, dtype=float)
        if np.any(prices <= 0):
            raise InputError("raw prices must be strictly positive to take logs")
        return cls(np.log(prices))


@dataclass(frozen=True, eq=False)
class IncrementSeries:
    """First differences of a :class:`LogPriceSeries`."""

    deltas: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "deltas", _frozen_array(self.deltas))

    @property
    def n(self) -> int:
        return self.deltas.size

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.deltas
        return self.deltas.astype(dtype)

    def __len__(self) -> int:
        return self.deltas.size


def increments(series: LogPriceSeries) -> IncrementSeries:
    """Return ``X_{i/n} - X_{(i-1)/n}`` for ``i = 1..n``."""
    return IncrementSeries(np.diff(series.values))


def as_increments(x, batch: bool = False) -> np.ndarray:
    """Coerce an :class:`IncrementSeries` or array-like into a float array.

    With ``batch=True`` a 2-D array of paths (one per row) is also accepted.
    """
    if isinstance(x, LogPriceSeries):
        raise TypeError("expected increments, got a LogPriceSeries; call .increments()")
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1 and not (batch and arr.ndim == 2):
        raise ValueError("increments must be one-dimensional")
    return arr


def validate_block_config(n: int, k: int) -> list[str]:
    """Check ``2 <= k <= n/2``.

    Returns a list of non-fatal warnings (empty when ``k`` lies inside the
    guidance band ``[n^(1/3), n^(3/4)]``).
    """
    if k < 2:
        raise BlockTooSmall(f"block length k={k} must be at least 2")
    if k > n // 2:
        raise BlockTooLarge(f"block length k={k} exceeds n/2 for n={n}")
    warnings = []
    lo, hi = n ** (1 / 3), n ** 0.75
    if not lo <= k <= hi:
        warnings.append(
            f"block length k={k} outside guidance band [{lo:.1f}, {hi:.1f}] for n={n}"
        )
    return warnings


def _parse_time(raw: str) -> float:
    raw = raw.strip()
    try:
        return float(raw)
    except ValueError:
        pass
    try:
        return _dt.datetime.fromisoformat(raw).timestamp()
    except ValueError:
        pass
    t = _dt.time.fromisoformat(raw)
    return t.hour * 3600 + t.minute * 60 + t.second + t.microsecond * 1e-6


def check_equidistant(times: np.ndarray) -> None:
    steps = np.diff(times)
    if steps.size == 0:
        return
    med = float(np.median(steps))
    if med <= 0:
        raise InputError("timestamps must be strictly increasing")
    dev = np.abs(steps - med)
    worst = int(np.argmax(dev))
    if dev[worst] > GRID_TOLERANCE * med:
        # +3: one header line, 1-based lines, step index points at the later row
        raise InputError(
            f"line {worst + 3}: grid spacing {steps[worst]:g} deviates more than "
            f"{GRID_TOLERANCE:.0%} from median spacing {med:g}"
        )


def read_csv(path: str | Path) -> LogPriceSeries:
    """Read ``time,price`` or ``time,logprice`` CSV into a log-price series.

    A ``price`` column is converted by natural log. Extra columns are ignored.
    """
    path = Path(path)
    try:
        fh = path.open(newline="", encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot open {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip().lower() for h in next(reader)]
        except StopIteration:
            raise InputError(f"{path}: empty file") from None
        if "time" not in header or not ({"price", "logprice"} & set(header)):
            raise InputError(
                f"{path}: line 1: header must contain 'time' and 'price' or 'logprice'"
            )
        ti = header.index("time")
        is_log = "logprice" in header
        vi = header.index("logprice" if is_log else "price")
        times, values = [], []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            try:
                times.append(_parse_time(row[ti]))
                v = float(row[vi])
            except (ValueError, IndexError) as exc:
                raise InputError(f"{path}: line {lineno}: cannot parse row {row!r}") from exc
            if not math.isfinite(v) or (not is_log and v <= 0):
                raise InputError(f"{path}: line {lineno}: invalid value {row[vi]!r}")
            values.append(v)
    check_equidistant(np.asarray(times))
    values = np.asarray(values)
    return LogPriceSeries(values if is_log else np.log(values))


def write_csv(path: str | Path, series: LogPriceSeries, extra: dict | None = None) -> None:
    """Write a series as ``time,logprice[,extra...]`` with round-trip float formatting."""
    extra = extra or {}
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["time", "logprice", *extra])
        cols = [np.asarray(c) for c in extra.values()]
        for i, (t, x) in enumerate(zip(series.times, series.values)):
            row = [repr(float(t)), repr(float(x))]
            row += [repr(float(c[i])) if i < c.size else "" for c in cols]
            w.writerow(row)

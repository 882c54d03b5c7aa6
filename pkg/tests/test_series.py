import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from volcp.errors import BlockTooLarge, BlockTooSmall, InputError
from volcp.series import (
    IncrementSeries,
    LogPriceSeries,
    as_increments,
    increments,
    read_csv,
    validate_block_config,
    write_csv,
)

finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


def test_increments_of_small_series():
    assert np.array_equal(np.asarray(increments(LogPriceSeries([0, 1, 3, 6]))), [1, 2, 3])


def test_constant_series_has_zero_increments():
    assert np.array_equal(np.asarray(LogPriceSeries([2.5, 2.5, 2.5]).increments()), [0.0, 0.0])


def test_increments_recover_generating_draws(rng):
    n = 10_000
    draws = rng.standard_normal(n) / math.sqrt(n)
    values = np.concatenate(([0.0], np.cumsum(draws)))
    d = np.asarray(LogPriceSeries(values).increments())
    # differencing a cumulative sum is exact up to the rounding of the partial sums
    spacing = np.spacing(np.maximum(np.abs(values[1:]), np.abs(values[:-1])))
    assert np.all(np.abs(d - draws) <= 2 * spacing)


@given(arrays(float, st.integers(3, 60), elements=finite))
def test_cumsum_of_increments_rebuilds_series(values):
    s = LogPriceSeries(values)
    rebuilt = values[0] + np.concatenate(([0.0], np.cumsum(np.asarray(s.increments()))))
    assert np.allclose(rebuilt, values, rtol=1e-9, atol=1e-9 * (1 + np.max(np.abs(values))) * values.size)


def test_series_is_read_only_and_validated():
    s = LogPriceSeries([0.0, 0.1, 0.2])
    assert s.n == 2 and s.mesh == 0.5
    assert np.allclose(s.times, [0, 0.5, 1])
    with pytest.raises(ValueError):
        s.values[0] = 1.0
    with pytest.raises(InputError):
        LogPriceSeries([0.0, 1.0])
    with pytest.raises(InputError):
        LogPriceSeries([0.0, np.nan, 1.0])
    with pytest.raises(InputError):
        LogPriceSeries.from_prices([1.0, -1.0, 2.0])
    assert np.allclose(LogPriceSeries.from_prices([1.0, math.e, 1.0]).values, [0, 1, 0])


def test_as_increments_rejects_levels_and_matrices():
    with pytest.raises(TypeError):
        as_increments(LogPriceSeries([0, 1, 2]))
    with pytest.raises(ValueError):
        as_increments(np.zeros((2, 3)))
    assert as_increments(np.zeros((2, 3)), batch=True).shape == (2, 3)
    assert len(IncrementSeries([1.0, 2.0])) == 2


@pytest.mark.parametrize("n,k", [(1000, 275), (10_000, 500)])
def test_published_block_lengths_are_valid(n, k):
    assert validate_block_config(n, k) == [] or all("guidance" in w for w in validate_block_config(n, k))


def test_block_bounds():
    with pytest.raises(BlockTooLarge):
        validate_block_config(10, 6)
    with pytest.raises(BlockTooSmall):
        validate_block_config(100, 1)
    assert validate_block_config(10_000, 500) == []
    assert validate_block_config(1000, 275)  # outside n^(3/4): warning only


def test_csv_round_trip(tmp_path, rng):
    s = LogPriceSeries(np.cumsum(rng.standard_normal(50)) * 1e-3 + 4.0)
    p = tmp_path / "x.csv"
    write_csv(p, s, {"vol": np.ones(51)})
    back = read_csv(p)
    assert np.array_equal(back.values, s.values)


def test_csv_price_column_is_logged(tmp_path):
    p = tmp_path / "p.csv"
    p.write_text("time,price,volume\n09:30:00,100,5\n09:30:01,101,5\n09:30:02,99.5,5\n")
    s = read_csv(p)
    assert np.allclose(s.values, np.log([100, 101, 99.5]))


@pytest.mark.parametrize(
    "text,needle",
    [
        ("t,price\n0,1\n", "line 1"),
        ("time,price\n0,1\n1,abc\n2,3\n", "line 3"),
        ("time,price\n0,1\n1,2\n2,3\n5,4\n", "line 5"),
        ("time,price\n0,1\n1,-2\n2,3\n", "line 3"),
    ],
)
def test_csv_errors_carry_line_numbers(tmp_path, text, needle):
    p = tmp_path / "bad.csv"
    p.write_text(text)
    with pytest.raises(InputError, match=needle):
        read_csv(p)

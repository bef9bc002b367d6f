"""Unit-interval stream behaviour: range, determinism, substream independence."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from buffonlab import StreamSpec, make_stream, split
from buffonlab.streams import U64_MAX


def test_values_live_in_half_open_unit_interval():
    s = make_stream(42)
    draws = s.take(1_000_000)
    assert draws.dtype == np.float64
    assert np.all(draws >= 0.0)
    assert np.all(draws < 1.0)


def test_mean_of_a_million_draws_is_near_half():
    draws = make_stream(7).take(1_000_000)
    # 4 sigma of the sample mean, sigma = 1/sqrt(12n)
    assert abs(float(draws.mean()) - 0.5) < 4.0 / np.sqrt(12e6)


def test_ten_bin_histogram_is_equidistributed():
    draws = make_stream(2024).take(1_000_000)
    counts, _ = np.histogram(draws, bins=10, range=(0.0, 1.0))
    sigma = np.sqrt(1e6 * 0.1 * 0.9)  # binomial per bin
    assert np.all(np.abs(counts - 100_000) < 5.0 * sigma)


def test_same_spec_steps_identically():
    a = make_stream(42)
    b = make_stream(42)
    for _ in range(1000):
        assert a.next_unit() == b.next_unit()
    assert a.position == b.position == 1000


def test_take_matches_scalar_draws_across_buffer_refills():
    scalar = make_stream(9)
    vector = make_stream(9)
    # 700 crosses the internal refill boundary at least twice
    got = vector.take(700)
    want = np.array([scalar.next_unit() for _ in range(700)])
    np.testing.assert_array_equal(got, want)


def test_take_then_scalar_continues_from_the_same_position():
    s = make_stream(5)
    s.take(257)
    t = make_stream(5)
    reference = t.take(260)
    assert s.next_unit() == reference[257]
    assert s.next_unit() == reference[258]


def test_substreams_share_no_prefix():
    a = make_stream(1, 0).take(100_000)
    b = make_stream(1, 1).take(100_000)
    equal = a == b
    # no position-wise equal prefix longer than 2
    prefix = int(np.argmin(equal)) if not equal.all() else len(equal)
    assert prefix <= 2
    # and in practice no collisions at all for these key pairs
    assert int(equal.sum()) == 0


def test_split_enumerates_consecutive_indices():
    specs = split(99, 4)
    assert specs == [StreamSpec(99, i) for i in range(4)]
    assert split(99, 1) == [StreamSpec(99, 0)]


def test_split_rejects_nonpositive_counts():
    with pytest.raises(ValueError):
        split(1, 0)


@pytest.mark.parametrize("seed,index", [(-1, 0), (0, -1), (2**64, 0), (0, 2**64)])
def test_spec_rejects_out_of_range_keys(seed, index):
    with pytest.raises(ValueError):
        StreamSpec(seed, index)


def test_extreme_keys_are_valid():
    assert make_stream(U64_MAX, U64_MAX).next_unit() < 1.0
    assert make_stream(0, 0).next_unit() >= 0.0


def test_take_zero_is_empty():
    assert make_stream(3).take(0).shape == (0,)


def test_take_rejects_negative_count():
    with pytest.raises(ValueError):
        make_stream(3).take(-1)


@given(st.integers(min_value=0, max_value=U64_MAX),
       st.integers(min_value=0, max_value=U64_MAX))
def test_any_key_yields_unit_interval_draws(seed, index):
    s = make_stream(seed, index)
    for _ in range(4):
        u = s.next_unit()
        assert 0.0 <= u < 1.0


def test_draws_have_53_bit_resolution():
    # over a large sample, some draws need more than 32 bits to express
    draws = make_stream(11).take(4096)
    scaled = draws * 2.0**53
    assert np.any(scaled != np.round(draws * 2.0**32) * 2.0**21)
    np.testing.assert_array_equal(scaled, np.round(scaled))

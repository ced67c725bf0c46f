import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from drugatlas.cognostics import (
    compute_cognostics,
    max_annual_decrease,
    max_annual_increase,
    mean_level,
    net_change,
)

from conftest import make_series
from oracles import all_masked_series, cognostics_oracle


class TestNetChange:
    def test_two_points(self):
        assert net_change(make_series({2000: 1.0, 2005: 4.0})) == 3.0

    def test_single_point(self):
        assert net_change(make_series({2001: 7.0})) == 0.0

    def test_zero_is_measured(self):
        series = make_series({1990: 0.0, 2013: 2.5}, span=(1989, 2013))
        assert net_change(series) == 2.5


class TestMaxAnnualIncrease:
    def test_consecutive_run(self):
        series = make_series({2000: 1.0, 2001: 3.0, 2002: 2.0, 2003: 7.0})
        assert max_annual_increase(series) == 5.0

    def test_gap_means_absent(self):
        assert max_annual_increase(make_series({2000: 1.0, 2002: 9.0})) is None

    def test_monotone_decreasing(self):
        assert max_annual_increase(make_series({2000: 5.0, 2001: 3.0, 2002: 1.0})) == -2.0


def test_hand_enumerated_pair_fixture():
    # {2000: 1, 2001: 3}: one consecutive pair, diff +2, so both extremes are 2.
    vec = compute_cognostics(make_series({2000: 1.0, 2001: 3.0}))
    assert vec.net_change == 2.0
    assert vec.max_annual_increase == 2.0
    assert vec.max_annual_decrease == 2.0
    assert vec.mean_level == 2.0
    assert vec.latest_value == 3.0


def test_constant_series():
    vec = compute_cognostics(make_series({2000: 4.0, 2001: 4.0, 2002: 4.0}))
    assert vec.net_change == 0.0
    assert vec.max_annual_increase == 0.0
    assert vec.max_annual_decrease == 0.0
    assert vec.mean_level == 4.0
    assert vec.latest_value == 4.0


def _assert_matches_oracle(values: dict[int, float], span):
    vec = compute_cognostics(make_series(values, span=span))
    expected = cognostics_oracle(values, span)
    assert vec.net_change == expected["net_change"]
    assert vec.max_annual_increase == expected["max_annual_increase"]
    assert vec.max_annual_decrease == expected["max_annual_decrease"]
    assert vec.mean_level == expected["mean_level"]
    assert vec.latest_value == expected["latest_value"]


def test_oracle_on_short_exhaustive_sample():
    for values in all_masked_series(4, (0.0, 1.0, 2.0)):
        _assert_matches_oracle(values, (2000, 2005))


@given(
    mask=st.lists(st.booleans(), min_size=1, max_size=25),
    data=st.data(),
)
@settings(max_examples=100, deadline=None)
def test_oracle_on_random_series(mask, data):
    if not any(mask):
        mask[0] = True
    values = {
        1989 + i: data.draw(st.floats(min_value=0.0, max_value=1e3, allow_nan=False))
        for i, present in enumerate(mask)
        if present
    }
    _assert_matches_oracle(values, (1989, 1989 + len(mask) - 1))


# Lattice-valued series keep every addition and difference exact, so the
# invariance laws can be asserted bitwise.

@st.composite
def integer_series(draw):
    years = draw(st.lists(st.integers(0, 24), min_size=1, max_size=12, unique=True))
    return {1989 + y: float(draw(st.integers(0, 1_000_000))) for y in years}


@given(values=integer_series(), c=st.integers(1, 1_000_000))
@settings(max_examples=80, deadline=None)
def test_translation_law(values, c):
    span = (1989, 2013)
    base = compute_cognostics(make_series(values, span=span))
    shifted = compute_cognostics(
        make_series({y: v + c for y, v in values.items()}, span=span)
    )
    assert shifted.net_change == base.net_change
    assert shifted.max_annual_increase == base.max_annual_increase
    assert shifted.max_annual_decrease == base.max_annual_decrease
    assert shifted.latest_value == base.latest_value + c
    assert shifted.mean_level == pytest.approx(base.mean_level + c, rel=0, abs=1e-9 * max(1.0, c))


@given(values=integer_series(), a=st.sampled_from([0.25, 0.5, 2.0, 4.0, 1024.0]))
@settings(max_examples=80, deadline=None)
def test_positive_scaling_law(values, a):
    span = (1989, 2013)
    base = compute_cognostics(make_series(values, span=span))
    scaled = compute_cognostics(make_series({y: v * a for y, v in values.items()}, span=span))
    assert scaled.net_change == base.net_change * a
    assert scaled.latest_value == base.latest_value * a
    assert scaled.mean_level == base.mean_level * a
    if base.max_annual_increase is None:
        assert scaled.max_annual_increase is None
        assert scaled.max_annual_decrease is None
    else:
        assert scaled.max_annual_increase == base.max_annual_increase * a
        assert scaled.max_annual_decrease == base.max_annual_decrease * a


@given(values=integer_series())
@settings(max_examples=80, deadline=None)
def test_time_reversal_negates_net_change(values):
    span = (1989, 2013)
    lo, hi = span
    reversed_values = {lo + hi - y: v for y, v in values.items()}
    base = net_change(make_series(values, span=span))
    assert net_change(make_series(reversed_values, span=span)) == -base


def test_mean_level_is_order_independent():
    values = {1989 + i: 0.1 * (i + 1) for i in range(20)}
    assert mean_level(make_series(values, span=(1989, 2013))) == math.fsum(values.values()) / 20


def test_absent_fields_on_all_gaps():
    series = make_series({2000: 1.0, 2002: 2.0, 2004: 0.0}, span=(2000, 2004))
    vec = compute_cognostics(series)
    assert vec.max_annual_increase is None
    assert vec.max_annual_decrease is None
    assert vec.net_change == -1.0


def test_max_annual_decrease_reports_min_positive_diff():
    vec = compute_cognostics(make_series({2000: 1.0, 2001: 2.0, 2002: 5.0}))
    assert vec.max_annual_decrease == 1.0
    assert vec.max_annual_increase == 3.0

import datetime as dt

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridgap import (
    TimeSeriesFrame,
    align_day_of_week,
    centered_trend,
    difference,
    difference_initials,
    log_transform,
    trend_transition,
    undifference,
    weekly_moving_average,
)
from gridgap.errors import (
    AlignmentError,
    InsufficientDataError,
    MissingValueError,
    ParameterError,
)

from conftest import make_dates, make_frame

finite_rows = st.lists(
    st.floats(min_value=-1e6, max_value=1e6, allow_nan=False), min_size=4, max_size=40
)


class TestDifference:
    def test_first_difference_hand_values(self):
        f = make_frame([1.0, 2.0, 4.0, 7.0])
        d = difference(f, 1)
        assert d.values[:, 0].tolist() == [1.0, 2.0, 3.0]
        assert d.dates == f.dates[1:]

    def test_second_difference_hand_values(self):
        f = make_frame([1.0, 2.0, 4.0, 7.0])
        d = difference(f, 2)
        assert d.values[:, 0].tolist() == [1.0, 1.0]
        assert d.dates == f.dates[2:]

    def test_too_short_rejected(self):
        with pytest.raises(InsufficientDataError):
            difference(make_frame([1.0, 2.0]), 2)

    def test_missing_rejected(self):
        with pytest.raises(MissingValueError):
            difference(make_frame([1.0, np.nan, 2.0]))

    @given(finite_rows, st.integers(min_value=1, max_value=3))
    @settings(max_examples=60, deadline=None)
    def test_round_trip_reconstruction(self, xs, order):
        if len(xs) <= order:
            return
        f = make_frame(xs)
        d = difference(f, order)
        initials, initial_dates = difference_initials(f, order)
        back = undifference(d, initials, initial_dates)
        assert back.dates == f.dates
        np.testing.assert_allclose(back.values, f.values, atol=1e-12 * max(1.0, np.abs(f.values).max()))


class TestLogTransform:
    def test_drops_nonpositive_rows(self):
        f = make_frame([[1.0, 5.0], [-2.0, 6.0], [3.0, 0.0]], names=("a", "b"))
        out = log_transform(f, ("a",))
        # only the row with a <= 0 goes; b==0 is untouched because b was not named
        assert len(out) == 2
        assert out.values[0, 0] == pytest.approx(np.log(1.0))
        assert out.values[1, 1] == 0.0

    def test_keep_rows_marks_missing(self):
        f = make_frame([[1.0], [-1.0]])
        out = log_transform(f, drop_nonpositive=False)
        assert len(out) == 2
        assert np.isnan(out.values[1, 0])

    @given(st.lists(st.floats(min_value=-10, max_value=10, allow_nan=False), min_size=1, max_size=30))
    @settings(max_examples=60, deadline=None)
    def test_drop_mode_never_emits_nonfinite(self, xs):
        if not any(x > 0 for x in xs):
            return
        f = make_frame(xs)
        out = log_transform(f)
        assert np.isfinite(out.values).all()


class TestWeeklyMovingAverage:
    def test_linear_series_hand_values(self):
        f = make_frame(np.arange(10.0))
        out = weekly_moving_average(f)
        # trailing 7-day mean of t is t-3 once the window is full
        assert out.values[6, 0] == pytest.approx(3.0)
        assert out.values[9, 0] == pytest.approx(6.0)
        # shrinking prefix: mean of 0..t
        assert out.values[0, 0] == 0.0
        assert out.values[3, 0] == pytest.approx(1.5)

    def test_length_preserved(self):
        f = make_frame(np.arange(5.0))
        assert len(weekly_moving_average(f)) == 5

    @given(st.floats(min_value=-100, max_value=100, allow_nan=False), st.integers(8, 40))
    @settings(max_examples=40, deadline=None)
    def test_constant_series_fixed_point(self, c, n):
        f = make_frame(np.full(n, c))
        out = weekly_moving_average(f)
        np.testing.assert_allclose(out.values[:, 0], c, atol=1e-12)

    def test_only_named_columns_touched(self):
        f = make_frame([[1.0, 1.0], [3.0, 3.0]], names=("a", "b"))
        out = weekly_moving_average(f, columns=("a",))
        assert out.values[1, 0] == pytest.approx(2.0)
        assert out.values[1, 1] == 3.0


class TestAlignDayOfWeek:
    def test_known_iso_week_pairing(self):
        # 2020-02-03 is the Monday of ISO week 6; its prior-year twin is 2019-02-04.
        cur = make_frame([50.0], start="2020-02-03")
        ref = make_frame([40.0], start="2019-02-04")
        paired = align_day_of_week(cur, ref)
        assert paired.reference.dates == (dt.date(2019, 2, 4),)
        assert paired.current.values.tolist() == [[50.0]]
        assert paired.reference.values.tolist() == [[40.0]]
        assert paired.dropped == ()

    def test_weekday_always_matches(self):
        cur = make_frame(np.arange(40.0), start="2020-02-03")
        ref = make_frame(np.arange(400.0), start="2019-01-01")
        paired = align_day_of_week(cur, ref)
        for c, r in zip(paired.current.dates, paired.reference.dates):
            assert c.weekday() == r.weekday()
            assert c.isocalendar()[1] == r.isocalendar()[1]

    def test_missing_reference_dropped_and_reported(self):
        cur = make_frame([1.0, 2.0], start="2020-02-03")
        ref = make_frame([40.0], start="2019-02-04")  # only covers the first date
        paired = align_day_of_week(cur, ref)
        assert len(paired.current) == 1
        assert len(paired.dropped) == 1
        assert paired.dropped[0][0] == dt.date(2020, 2, 4)

    def test_empty_overlap_raises(self):
        cur = make_frame([1.0], start="2020-02-03")
        ref = make_frame([1.0], start="2010-01-04")
        with pytest.raises(AlignmentError):
            align_day_of_week(cur, ref)

    def test_name_mismatch_rejected(self):
        cur = make_frame([1.0], names=("a",))
        ref = make_frame([1.0], names=("b",))
        with pytest.raises(ParameterError):
            align_day_of_week(cur, ref)


def step_series(n=70):
    k = np.arange(n)
    base = np.where(k < 30, 100.0, np.where(k <= 40, 100.0 - 5.0 * (k - 30), 50.0))
    return base + 5.0 * np.sin(2 * np.pi * k / 7)


class TestTrendTransition:
    def test_centered_trend_cancels_weekly_cycle(self):
        k = np.arange(70)
        x = 10.0 + 3.0 * np.sin(2 * np.pi * k / 7)
        trend = centered_trend(x, 7)
        np.testing.assert_allclose(trend[3:-3], 10.0, atol=1e-12)

    def test_centered_trend_matches_double_loop(self):
        rng = np.random.default_rng(7)
        x = rng.normal(size=41)
        period = 7
        trend = centered_trend(x, period)
        padded = np.concatenate([np.full(3, x[0]), x, np.full(3, x[-1])])
        expected = [padded[i : i + period].mean() for i in range(len(x))]
        np.testing.assert_allclose(trend, expected, atol=1e-12)

    def test_step_fixture_brackets_true_transition(self):
        f = make_frame(step_series())
        res = trend_transition(f, "x0", period=7)
        begin = (res.transition.begin - f.dates[0]).days
        end = (res.transition.end - f.dates[0]).days
        assert 28 <= begin <= 32
        assert 38 <= end <= 42
        assert not res.transition.degenerate

    def test_step_fixture_matches_brute_force_of_rule(self):
        x = step_series()
        f = make_frame(x)
        res = trend_transition(f, "x0", period=7, tol_fraction=0.05)
        trend = centered_trend(x, 7)
        n = len(trend)
        tol = 0.05 * (trend.max() - trend.min())
        begin_gaps = [abs(trend[k] - trend[:k].mean()) for k in range(1, n)]
        best = min(begin_gaps)
        begin = max(k for k in range(1, n) if begin_gaps[k - 1] <= best + tol)
        end_gaps = [abs(trend[k] - trend[k + 1 :].mean()) for k in range(n - 1)]
        tail = end_gaps[begin:]
        best_e = min(tail)
        end = begin + min(i for i, g in enumerate(tail) if g <= best_e + tol)
        assert (res.transition.begin - f.dates[0]).days == begin
        assert (res.transition.end - f.dates[0]).days == end

    def test_pure_ramp_spans_most_of_series(self):
        # A pure ramp never settles: the rule pins begin right after the
        # smoothing edge and end right before the opposite one.
        n = 60
        f = make_frame(np.arange(float(n)))
        res = trend_transition(f, "x0", period=7)
        begin = (res.transition.begin - f.dates[0]).days
        end = (res.transition.end - f.dates[0]).days
        assert begin < n / 2 < end

    def test_constant_series_degenerate(self):
        f = make_frame(np.full(30, 5.0))
        res = trend_transition(f, "x0")
        assert res.transition.degenerate
        assert res.transition.begin == res.transition.end == f.dates[0]

    def test_valley_mode_fires_below_previous_valley(self):
        # plateau, dip to a valley, recover, then decline through the valley
        x = np.concatenate(
            [
                np.full(20, 10.0),
                np.linspace(10.0, 8.0, 5),          # descend
                np.linspace(8.0, 9.5, 5),           # recover: valley at 8
                np.full(10, 9.5),
                np.linspace(9.5, 2.0, 20),          # decline through the valley
                np.full(10, 2.0),
            ]
        )
        f = make_frame(x)
        res = trend_transition(f, "x0", period=7, mode="valley")
        trend = centered_trend(x, 7)
        begin = (res.transition.begin - f.dates[0]).days
        # the flagged day is the first whose trend undercuts the valley
        valleys = [
            k
            for k in range(1, len(trend) - 1)
            if trend[k] < trend[k - 1] and trend[k] < trend[k + 1]
        ]
        first_valley = valleys[0]
        assert trend[begin] < trend[first_valley]
        assert all(trend[k] >= trend[first_valley] for k in range(first_valley + 1, begin))

    def test_short_series_rejected(self):
        with pytest.raises(InsufficientDataError):
            trend_transition(make_frame(np.arange(10.0)), "x0", period=7)

    def test_bad_mode_rejected(self):
        with pytest.raises(ParameterError):
            trend_transition(make_frame(np.arange(20.0)), "x0", mode="nope")

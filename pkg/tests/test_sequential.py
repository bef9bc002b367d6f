"""Stop rules, sequential traces, exact rationals, and the stopping cheat."""

import math
from fractions import Fraction

import numpy as np
import pytest

from buffonlab import (
    ConfigurationError,
    FixedN,
    FloorSpec,
    NeedleSpec,
    NoCrossingsError,
    RationalEstimate,
    SequentialTrace,
    TargetWindow,
    cheat_report,
    exact_estimate_rational,
    make_stream,
    run_sequential,
    sample_throws,
    sign_crossings,
)

UNIT_FLOOR = FloorSpec(1.0)
UNIT_NEEDLE = NeedleSpec(1.0)
LAZ_FLOOR = FloorSpec(6.0)
LAZ_NEEDLE = NeedleSpec(5.0)


def trace_of(estimates, ns=None, ms=None, stop_reason="fixed"):
    est = np.asarray(estimates, dtype=np.float64)
    k = est.shape[0]
    ns = np.arange(1, k + 1, dtype=np.int64) if ns is None else np.asarray(ns)
    ms = np.ones(k, dtype=np.int64) if ms is None else np.asarray(ms)
    return SequentialTrace(ns=ns, ms=ms, estimates=est,
                           stop_n=int(ns[-1]), stop_reason=stop_reason)


class TestRules:
    def test_fixed_rule_stops_exactly_on_budget(self):
        trace = run_sequential(make_stream(1), UNIT_FLOOR, UNIT_NEEDLE, FixedN(100))
        assert trace.stop_n == 100
        assert trace.stop_reason == "fixed"
        assert trace.ns[-1] == 100

    def test_rules_validate_their_shape(self):
        with pytest.raises(ConfigurationError):
            FixedN(0)
        with pytest.raises(ConfigurationError):
            TargetWindow(math.pi, 0.0, 1, 10)
        with pytest.raises(ConfigurationError):
            TargetWindow(math.pi, 1e-3, 10, 5)
        with pytest.raises(ConfigurationError):
            TargetWindow(math.pi, 1e-3, 0, 5)

    def test_loose_window_stops_at_first_crossing(self):
        # tolerance so wide that any defined estimate is inside; seed 1
        # misses its first throws, so the stop is strictly after n = 1
        rule = TargetWindow(math.pi, 1e6, 1, 10**6)
        trace = run_sequential(make_stream(1), UNIT_FLOOR, UNIT_NEEDLE, rule)
        crossed = sample_throws(make_stream(1), UNIT_FLOOR, UNIT_NEEDLE,
                                trace.stop_n).crossed
        assert trace.stop_reason == "target-hit"
        assert trace.stop_n > 1
        assert crossed[trace.stop_n - 1] == 1
        assert not crossed[:trace.stop_n - 1].any()

    def test_window_respects_n_min(self):
        rule = TargetWindow(math.pi, 1e6, 500, 10**6)
        trace = run_sequential(make_stream(6), UNIT_FLOOR, UNIT_NEEDLE, rule)
        assert trace.stop_reason == "target-hit"
        assert trace.stop_n >= 500

    def test_unreachable_window_exhausts_the_budget(self):
        rule = TargetWindow(100.0, 1e-9, 1, 2000)
        trace = run_sequential(make_stream(6), UNIT_FLOOR, UNIT_NEEDLE, rule)
        assert trace.stop_reason == "exhausted"
        assert trace.stop_n == 2000

    def test_hits_satisfy_the_window_by_construction(self):
        rule = TargetWindow(math.pi, 3e-6, 3000, 200_000)
        hits = 0
        for seed in range(40, 60):
            trace = run_sequential(make_stream(seed), LAZ_FLOOR, LAZ_NEEDLE, rule)
            if trace.stop_reason == "target-hit":
                hits += 1
                assert abs(trace.final_estimate - math.pi) <= 3e-6
                assert 3000 <= trace.stop_n <= 200_000
        assert hits > 0


class TestTrace:
    def test_stride_thins_records_but_keeps_the_stop_point(self):
        trace = run_sequential(make_stream(2), UNIT_FLOOR, UNIT_NEEDLE,
                               FixedN(1000), stride=300)
        assert trace.ns.tolist() == [300, 600, 900, 1000]

    def test_stride_larger_than_budget_keeps_only_the_stop(self):
        trace = run_sequential(make_stream(2), UNIT_FLOOR, UNIT_NEEDLE,
                               FixedN(10), stride=100)
        assert trace.ns.tolist() == [10]

    def test_estimates_match_counts_at_every_record(self):
        trace = run_sequential(make_stream(13), UNIT_FLOOR, UNIT_NEEDLE,
                               FixedN(5000), stride=7)
        assert np.all(np.diff(trace.ms) >= 0)
        assert np.all(trace.ms <= trace.ns)
        defined = trace.ms >= 1
        expect = (2.0 * trace.ns[defined]) / (1.0 * trace.ms[defined])
        np.testing.assert_array_equal(trace.estimates[defined], expect)
        assert np.all(np.isnan(trace.estimates[~defined]))

    def test_records_use_none_before_the_first_crossing(self):
        # seed 1 misses on its first throws (checked above)
        trace = run_sequential(make_stream(1), UNIT_FLOOR, UNIT_NEEDLE,
                               FixedN(2), stride=1)
        assert trace.records[0] == (1, 0, None)
        assert trace.records[1] == (2, 0, None)
        assert math.isnan(trace.final_estimate)

    def test_same_inputs_reproduce_the_same_trace(self):
        a = run_sequential(make_stream(21), LAZ_FLOOR, LAZ_NEEDLE, FixedN(20_000))
        b = run_sequential(make_stream(21), LAZ_FLOOR, LAZ_NEEDLE, FixedN(20_000))
        np.testing.assert_array_equal(a.estimates, b.estimates)
        assert a.stop_n == b.stop_n

    def test_stride_does_not_change_the_throws(self):
        fine = run_sequential(make_stream(21), UNIT_FLOOR, UNIT_NEEDLE,
                              FixedN(4000), stride=1)
        coarse = run_sequential(make_stream(21), UNIT_FLOOR, UNIT_NEEDLE,
                                FixedN(4000), stride=500)
        picks = np.searchsorted(fine.ns, coarse.ns)
        np.testing.assert_array_equal(fine.ms[picks], coarse.ms)

    def test_stride_validation(self):
        with pytest.raises(ConfigurationError):
            run_sequential(make_stream(1), UNIT_FLOOR, UNIT_NEEDLE,
                           FixedN(10), stride=0)


class TestExactRational:
    def test_celebrated_counts_give_355_113(self):
        est = exact_estimate_rational(5, 6, 3408, 1808)
        assert (est.numerator, est.denominator) == (355, 113)
        assert str(est) == "355/113"
        assert est.value == pytest.approx(math.pi, abs=5e-7)

    def test_published_counts_reduce_as_claimed(self):
        # the throw/crossing pair itself carries the 113 denominator
        assert Fraction(3408, 1808) == Fraction(213, 113)

    def test_small_exact_case(self):
        est = exact_estimate_rational(1, 1, 2, 1)
        assert (est.numerator, est.denominator) == (4, 1)
        assert est.value == 4.0

    def test_no_crossings_raises_before_validation(self):
        with pytest.raises(NoCrossingsError):
            exact_estimate_rational(5, 6, 3408, 0)

    def test_rejects_non_positive_and_non_integer_input(self):
        with pytest.raises(ValueError):
            exact_estimate_rational(5, 6, -1, 10)
        with pytest.raises(ValueError):
            exact_estimate_rational(5.0, 6, 10, 10)
        with pytest.raises(ValueError):
            exact_estimate_rational(0, 6, 10, 10)

    def test_rational_type_is_always_reduced(self):
        with pytest.raises(ValueError):
            RationalEstimate(4, 2)
        with pytest.raises(ValueError):
            RationalEstimate(-3, 1)
        assert RationalEstimate(7, 3).value == pytest.approx(7 / 3)


class TestSignCrossings:
    def test_two_changes(self):
        assert sign_crossings(trace_of([3.0, 3.3, 3.0]), math.pi) == 2

    def test_no_changes(self):
        assert sign_crossings(trace_of([4.0, 3.5, 3.2]), math.pi) == 0

    def test_touching_the_target_counts(self):
        assert sign_crossings(trace_of([3.0, math.pi, 3.3]), math.pi) == 2

    def test_min_n_filters_early_records(self):
        trace = trace_of([3.0, 3.3, 3.0, 3.3], ns=[1, 2, 100, 200])
        assert sign_crossings(trace, math.pi) == 3
        assert sign_crossings(trace, math.pi, min_n=100) == 1

    def test_undefined_estimates_are_skipped(self):
        trace = trace_of([np.nan, 3.0, 3.3], ms=[0, 1, 1])
        assert sign_crossings(trace, math.pi) == 1

    def test_fewer_than_two_usable_records_is_zero(self):
        assert sign_crossings(trace_of([3.0]), math.pi) == 0

    def test_empty_trace_is_an_error(self):
        empty = SequentialTrace(ns=np.empty(0, dtype=np.int64),
                                ms=np.empty(0, dtype=np.int64),
                                estimates=np.empty(0), stop_n=0, stop_reason="fixed")
        with pytest.raises(ValueError):
            sign_crossings(empty, math.pi)

    def test_long_run_oscillates_around_pi(self):
        trace = run_sequential(make_stream(9), UNIT_FLOOR, UNIT_NEEDLE,
                               FixedN(200_000), stride=1)
        assert sign_crossings(trace, math.pi, min_n=100) >= 1


class TestCheatReport:
    RULE_FIXED = FixedN(20_000)
    RULE_CHEAT = TargetWindow(math.pi, 3e-6, 3000, 20_000)

    def test_report_shape_and_hit_guarantees(self):
        report = cheat_report(range(1, 13), self.RULE_FIXED, self.RULE_CHEAT,
                              LAZ_FLOOR, LAZ_NEEDLE)
        assert len(report.outcomes) == 12
        assert report.hits == sum(
            1 for o in report.outcomes if o.cheat_error is not None)
        assert report.hit_fraction == report.hits / 12
        for o in report.outcomes:
            assert o.fixed_error >= 0
            if o.cheat_error is not None:
                assert o.cheat_error <= self.RULE_CHEAT.tolerance
                assert o.cheat_reason == "target-hit"
            else:
                assert o.cheat_reason == "exhausted"

    def test_hit_errors_sit_far_below_fixed_errors(self):
        report = cheat_report(range(1, 13), self.RULE_FIXED, self.RULE_CHEAT,
                              LAZ_FLOOR, LAZ_NEEDLE, workers=4)
        if report.error_ratio is not None:
            assert report.error_ratio < 1e-2

    def test_worker_count_does_not_change_the_report(self):
        serial = cheat_report(range(30, 38), self.RULE_FIXED, self.RULE_CHEAT,
                              LAZ_FLOOR, LAZ_NEEDLE, workers=1)
        pooled = cheat_report(range(30, 38), self.RULE_FIXED, self.RULE_CHEAT,
                              LAZ_FLOOR, LAZ_NEEDLE, workers=5)
        assert serial == pooled

    def test_empty_seed_list_rejected(self):
        with pytest.raises(ConfigurationError):
            cheat_report([], self.RULE_FIXED, self.RULE_CHEAT,
                         LAZ_FLOOR, LAZ_NEEDLE)

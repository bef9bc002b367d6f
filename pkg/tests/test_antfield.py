"""Torus segment scatter and intersection counting.

The reference oracle here re-decides every pair with exact rational
arithmetic over a 3x3 replication of the torus, so any disagreement with
the production kernel is a real defect and not float noise.
"""

import math
from fractions import Fraction

import numpy as np
import pytest

from buffonlab import (
    ConfigurationError,
    NoIntersectionsError,
    Segment,
    SegmentSet,
    TorusRegion,
    estimate_area,
    intersect_count,
    make_stream,
    scatter,
)

UNIT_TORUS = TorusRegion(1.0)


def one_pair(a_args, b_args, region=UNIT_TORUS):
    A = SegmentSet.from_segments([Segment(*a_args)])
    B = SegmentSet.from_segments([Segment(*b_args)])
    return intersect_count(A, B, region)


# exact-arithmetic reference -------------------------------------------------

def _direction(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _within(p, q, r):
    return (min(p[0], q[0]) <= r[0] <= max(p[0], q[0])
            and min(p[1], q[1]) <= r[1] <= max(p[1], q[1]))


def _segments_touch(p1, p2, q1, q2):
    d1 = _direction(q1, q2, p1)
    d2 = _direction(q1, q2, p2)
    d3 = _direction(p1, p2, q1)
    d4 = _direction(p1, p2, q2)
    if ((d1 > 0) != (d2 > 0)) and d1 != 0 and d2 != 0 \
            and ((d3 > 0) != (d4 > 0)) and d3 != 0 and d4 != 0:
        return True
    if d1 == 0 and _within(q1, q2, p1):
        return True
    if d2 == 0 and _within(q1, q2, p2):
        return True
    if d3 == 0 and _within(p1, p2, q1):
        return True
    if d4 == 0 and _within(p1, p2, q2):
        return True
    return False


def _endpoints_exact(seg):
    hx, hy = seg.half_vector()
    px, py = Fraction(seg.px), Fraction(seg.py)
    hx, hy = Fraction(hx), Fraction(hy)
    return (px - hx, py - hy), (px + hx, py + hy)


def replicated_count(set_a, set_b, region):
    """Pairs that intersect in any of the nine periodic images of b."""
    side = Fraction(region.side)
    total = 0
    for a in set_a.segments:
        p1, p2 = _endpoints_exact(a)
        for b in set_b.segments:
            q1, q2 = _endpoints_exact(b)
            hit = False
            for kx in (-1, 0, 1):
                for ky in (-1, 0, 1):
                    shift = (kx * side, ky * side)
                    if _segments_touch(
                            p1, p2,
                            (q1[0] + shift[0], q1[1] + shift[1]),
                            (q2[0] + shift[0], q2[1] + shift[1])):
                        hit = True
                        break
                if hit:
                    break
            total += hit
    return total


class TestIntersectPairs:
    def test_perpendicular_cross_at_shared_midpoint(self):
        assert one_pair((0.5, 0.5, 0.0, 0.2), (0.5, 0.5, math.pi / 2, 0.2)) == 1

    def test_distant_segments_miss(self):
        assert one_pair((0.5, 0.5, 0.0, 0.2), (0.5, 0.9, math.pi / 2, 0.2)) == 0

    def test_wraparound_crossing_through_the_seam(self):
        # midpoints on opposite edges; only the periodic image crosses
        assert one_pair((0.05, 0.5, 0.0, 0.24), (0.95, 0.5, math.pi / 2, 0.3)) == 1

    def test_wraparound_endpoint_touch_counts(self):
        # dyadic coordinates make the touch exact in binary floating point:
        # the horizontal segment's far endpoint lands on the vertical one
        # only after wrapping
        assert one_pair((0.0625, 0.5, 0.0, 0.25), (0.9375, 0.5, math.pi / 2, 0.375)) == 1

    def test_endpoint_landing_mid_segment_counts(self):
        assert one_pair((0.5, 0.5, 0.0, 0.4), (0.5, 0.6, math.pi / 2, 0.2)) == 1

    def test_collinear_overlap_counts_once(self):
        assert one_pair((0.4, 0.5, 0.0, 0.3), (0.5, 0.5, 0.0, 0.3)) == 1

    def test_collinear_end_to_end_touch_counts_once(self):
        assert one_pair((0.25, 0.5, 0.0, 0.25), (0.5, 0.5, 0.0, 0.25)) == 1

    def test_parallel_separated_segments_miss(self):
        assert one_pair((0.5, 0.5, 0.0, 0.3), (0.5, 0.6, 0.0, 0.3)) == 0


class TestAgainstReplicationOracle:
    def test_random_sets_match_exact_arithmetic(self):
        region = TorusRegion(1.0)
        mismatches = []
        for seed in range(500, 560):
            s = make_stream(seed)
            A = scatter(s, 6, 0.35, region)
            B = scatter(s, 6, 0.45, region)
            got = intersect_count(A, B, region)
            want = replicated_count(A, B, region)
            if got != want:
                mismatches.append((seed, got, want))
        assert mismatches == []

    def test_handcrafted_cases_match_exact_arithmetic(self):
        cases = [
            ((0.5, 0.5, 0.0, 0.2), (0.5, 0.5, math.pi / 2, 0.2)),
            ((0.0625, 0.5, 0.0, 0.25), (0.9375, 0.5, math.pi / 2, 0.375)),
            ((0.05, 0.5, 0.0, 0.24), (0.95, 0.5, math.pi / 2, 0.3)),
            ((0.4, 0.5, 0.0, 0.3), (0.5, 0.5, 0.0, 0.3)),
        ]
        for a_args, b_args in cases:
            A = SegmentSet.from_segments([Segment(*a_args)])
            B = SegmentSet.from_segments([Segment(*b_args)])
            assert intersect_count(A, B, UNIT_TORUS) == \
                replicated_count(A, B, UNIT_TORUS)


class TestIntersectProperties:
    def test_count_is_symmetric(self):
        region = TorusRegion(2.0)
        for seed in range(80, 120):
            s = make_stream(seed)
            A = scatter(s, 5, 0.9, region)
            B = scatter(s, 7, 0.6, region)
            assert intersect_count(A, B, region) == intersect_count(B, A, region)

    def test_count_is_translation_invariant(self):
        region = TorusRegion(1.0)

        def shifted(ss, dx, dy):
            px = np.mod(ss.px + dx, region.side)
            py = np.mod(ss.py + dy, region.side)
            return SegmentSet(px, py, ss.theta, ss.lengths)

        for seed in range(200, 230):
            s = make_stream(seed)
            A = scatter(s, 6, 0.3, region)
            B = scatter(s, 6, 0.3, region)
            base = intersect_count(A, B, region)
            for dx, dy in [(0.25, 0.0), (0.5, 0.5), (0.375, 0.875)]:
                assert intersect_count(
                    shifted(A, dx, dy), shifted(B, dx, dy), region) == base

    def test_empty_set_has_no_intersections(self):
        empty = SegmentSet(np.array([]), np.array([]), np.array([]), np.array([]))
        full = scatter(make_stream(1), 4, 0.2, UNIT_TORUS)
        assert intersect_count(empty, full, UNIT_TORUS) == 0
        assert intersect_count(full, empty, UNIT_TORUS) == 0

    def test_overlong_segments_are_rejected(self):
        ok = SegmentSet.from_segments([Segment(0.5, 0.5, 0.0, 0.5)])
        too_long = SegmentSet.from_segments([Segment(0.5, 0.5, 0.0, 0.51)])
        intersect_count(ok, ok, UNIT_TORUS)
        with pytest.raises(ConfigurationError):
            intersect_count(ok, too_long, UNIT_TORUS)

    def test_mean_count_scales_with_length_product(self):
        # E[N] = 2 S L / (pi A): doubling both set sizes quadruples it
        region = TorusRegion(1.0)
        small, large = [], []
        for rep in range(80):
            s = make_stream(3000 + rep)
            small.append(intersect_count(
                scatter(s, 100, 0.1, region), scatter(s, 100, 0.1, region), region))
            t = make_stream(4000 + rep)
            large.append(intersect_count(
                scatter(t, 200, 0.1, region), scatter(t, 200, 0.1, region), region))
        mean_small = np.mean(small)
        mean_large = np.mean(large)
        spread = 4.0 * math.sqrt(np.var(large) / 80 + 16 * np.var(small) / 80)
        assert abs(mean_large - 4.0 * mean_small) < spread


class TestScatter:
    def test_bookkeeping(self):
        ss = scatter(make_stream(5), 200, 0.1, UNIT_TORUS)
        assert len(ss) == 200
        assert ss.total_length == pytest.approx(20.0, rel=1e-9)
        assert np.all(ss.lengths == 0.1)

    def test_coordinates_land_in_the_region(self):
        region = TorusRegion(2.5)
        ss = scatter(make_stream(8), 10_000, 1.0, region)
        assert np.all((ss.px >= 0) & (ss.px < region.side))
        assert np.all((ss.py >= 0) & (ss.py < region.side))
        assert np.all((ss.theta >= 0) & (ss.theta < math.pi))

    def test_draw_order_is_px_py_theta(self):
        region = TorusRegion(2.0)
        ss = scatter(make_stream(11), 50, 0.5, region)
        draws = make_stream(11).take(150)
        np.testing.assert_array_equal(ss.px, region.side * draws[0::3])
        np.testing.assert_array_equal(ss.py, region.side * draws[1::3])
        np.testing.assert_array_equal(ss.theta, np.pi * draws[2::3])

    def test_same_spec_scatters_identically(self):
        a = scatter(make_stream(9, 4), 100, 0.2, UNIT_TORUS)
        b = scatter(make_stream(9, 4), 100, 0.2, UNIT_TORUS)
        np.testing.assert_array_equal(a.px, b.px)
        np.testing.assert_array_equal(a.theta, b.theta)

    def test_midpoints_are_equidistributed(self):
        ss = scatter(make_stream(303), 100_000, 0.25, UNIT_TORUS)
        sigma = math.sqrt(1e5 * 0.1 * 0.9)
        for coord in (ss.px, ss.py, ss.theta / math.pi):
            counts, _ = np.histogram(coord, bins=10, range=(0.0, 1.0))
            assert np.all(np.abs(counts - 10_000) < 5.0 * sigma)

    def test_validation(self):
        with pytest.raises(ConfigurationError):
            scatter(make_stream(1), 0, 0.1, UNIT_TORUS)
        with pytest.raises(ConfigurationError):
            scatter(make_stream(1), 5, 0.51, UNIT_TORUS)  # longer than side/2
        with pytest.raises(ConfigurationError):
            scatter(make_stream(1), 5, 0.0, UNIT_TORUS)
        scatter(make_stream(1), 5, 0.5, UNIT_TORUS)  # exactly side/2 is fine
        with pytest.raises(ConfigurationError):
            TorusRegion(0.0)


class TestSegmentSet:
    def test_roundtrip_through_segment_views(self):
        ss = scatter(make_stream(14), 20, 0.3, UNIT_TORUS)
        back = SegmentSet.from_segments(ss.segments)
        np.testing.assert_array_equal(ss.px, back.px)
        np.testing.assert_array_equal(ss.py, back.py)
        np.testing.assert_array_equal(ss.theta, back.theta)
        np.testing.assert_array_equal(ss.lengths, back.lengths)

    def test_half_vector_geometry(self):
        seg = Segment(0.5, 0.5, 0.0, 0.2)
        assert seg.half_vector() == (0.1, 0.0)
        hx, hy = Segment(0.5, 0.5, math.pi / 2, 0.2).half_vector()
        assert hy == pytest.approx(0.1)
        assert abs(hx) < 1e-16

    def test_shape_and_length_validation(self):
        with pytest.raises(ValueError):
            SegmentSet(np.zeros(3), np.zeros(2), np.zeros(3), np.ones(3))
        with pytest.raises(ValueError):
            SegmentSet(np.zeros(2), np.zeros(2), np.zeros(2), np.array([0.1, 0.0]))


class TestEstimateArea:
    def test_reference_value(self):
        assert estimate_area(20.0, 20.0, 255) == pytest.approx(0.9986192, abs=5e-7)

    def test_unit_case(self):
        assert estimate_area(1.0, 1.0, 1) == pytest.approx(2.0 / math.pi)

    def test_no_intersections_raises(self):
        with pytest.raises(NoIntersectionsError):
            estimate_area(20.0, 20.0, 0)

    def test_validation(self):
        with pytest.raises(ValueError):
            estimate_area(0.0, 20.0, 5)
        with pytest.raises(ValueError):
            estimate_area(20.0, 20.0, -1)

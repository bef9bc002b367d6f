"""The ant algorithm: area from segment-intersection counts.

Scatter two independent sets of segments with total lengths S and L onto
a square torus and count the intersections N between the sets; the area
estimate is 2SL/(pi N).  On the torus the expectation E[N] = 2SL/(pi A)
is exact because there are no edge effects, which is why the region is a
torus here and not a bounded floor.

Wraparound is resolved by the minimal-image convention: each pair is
tested after translating one segment's midpoint to its nearest periodic
copy relative to the other.  That resolves every crossing as long as
segments are no longer than half the side, which scatter enforces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import backend
from .errors import ConfigurationError, NoIntersectionsError
from .streams import UnitStream


@dataclass(frozen=True)
class TorusRegion:
    """Square torus of area side**2."""

    side: float

    def __post_init__(self):
        if not self.side > 0:
            raise ConfigurationError(f"side must be positive, got {self.side}")


@dataclass(frozen=True)
class Segment:
    """One segment: midpoint, angle in [0, pi), length."""

    px: float
    py: float
    theta: float
    length: float

    def half_vector(self) -> tuple[float, float]:
        h = 0.5 * self.length
        return (h * math.cos(self.theta), h * math.sin(self.theta))


class SegmentSet:
    """A scattered set, stored as coordinate arrays with a Segment view."""

    def __init__(self, px, py, theta, lengths):
        self.px = np.ascontiguousarray(px, dtype=np.float64)
        self.py = np.ascontiguousarray(py, dtype=np.float64)
        self.theta = np.ascontiguousarray(theta, dtype=np.float64)
        self.lengths = np.ascontiguousarray(lengths, dtype=np.float64)
        shapes = {a.shape for a in (self.px, self.py, self.theta, self.lengths)}
        if len(shapes) != 1:
            raise ValueError("coordinate arrays must share one shape")
        if self.lengths.size and not np.all(self.lengths > 0):
            raise ValueError("segment lengths must be positive")

    def __len__(self):
        return self.px.shape[0]

    @property
    def total_length(self) -> float:
        return float(np.sum(self.lengths))

    @property
    def segments(self) -> list[Segment]:
        return [Segment(float(a), float(b), float(t), float(l))
                for a, b, t, l in zip(self.px, self.py, self.theta, self.lengths)]

    @classmethod
    def from_segments(cls, segs: Iterable[Segment]) -> "SegmentSet":
        segs = list(segs)
        return cls(np.array([s.px for s in segs]),
                   np.array([s.py for s in segs]),
                   np.array([s.theta for s in segs]),
                   np.array([s.length for s in segs]))

    def half_vectors(self) -> tuple[np.ndarray, np.ndarray]:
        h = 0.5 * self.lengths
        return h * np.cos(self.theta), h * np.sin(self.theta)


def scatter(stream: UnitStream, count: int, seg_len: float,
            region: TorusRegion) -> SegmentSet:
    """Drop ``count`` segments uniformly on the torus.

    Three draws per segment, in order (px, py, theta): midpoints uniform
    on the square, angles uniform on [0, pi).
    """
    if count < 1:
        raise ConfigurationError(f"count must be >= 1, got {count}")
    if not 0 < seg_len <= region.side / 2:
        raise ConfigurationError(
            f"seg_len must be in (0, side/2] = (0, {region.side / 2}], "
            f"got {seg_len} (minimal-image test needs it)")
    draws = stream.take(3 * count)
    px = region.side * draws[0::3]
    py = region.side * draws[1::3]
    theta = np.pi * draws[2::3]
    # side * u can round up to side for u just below 1; wrap it back
    px = np.where(px >= region.side, px - region.side, px)
    py = np.where(py >= region.side, py - region.side, py)
    lengths = np.full(count, seg_len, dtype=np.float64)
    return SegmentSet(px, py, theta, lengths)


def intersect_count(set_a: SegmentSet, set_b: SegmentSet,
                    region: TorusRegion) -> int:
    """Number of intersecting pairs (a, b) under the torus metric.

    Each pair counts at most once however the segments touch; overlap of
    collinear segments counts as one intersection.
    """
    if len(set_a) == 0 or len(set_b) == 0:
        return 0
    max_len = max(float(np.max(set_a.lengths)), float(np.max(set_b.lengths)))
    if max_len > region.side / 2:
        raise ConfigurationError(
            f"segment length {max_len} exceeds side/2 = {region.side / 2}")
    ahx, ahy = set_a.half_vectors()
    bhx, bhy = set_b.half_vectors()
    reach = 0.5 * (float(np.max(set_a.lengths)) + float(np.max(set_b.lengths)))
    return int(backend.cross_count(
        set_a.px, set_a.py, ahx, ahy,
        set_b.px, set_b.py, bhx, bhy,
        reach, region.side))


def estimate_area(S: float, L: float, N: int) -> float:
    """Area estimate 2SL/(pi N) from total lengths S, L and intersection count N."""
    if not S > 0 or not L > 0:
        raise ValueError(f"total lengths must be positive, got S={S}, L={L}")
    if N < 0:
        raise ValueError(f"N must be >= 0, got {N}")
    if N == 0:
        raise NoIntersectionsError("no intersections: area estimate undefined")
    return (2.0 * S * L) / (math.pi * N)

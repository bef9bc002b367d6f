"""Streaming, mergeable statistics and the convergence-law helpers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InsufficientDataError

Z95 = 1.96


@dataclass(frozen=True)
class StreamingMoments:
    """One-pass mean/variance accumulator (count, mean, sum of squared deviations).

    Immutable; update and merge return new values, which makes parallel
    tree reduction safe by construction.
    """

    count: int = 0
    mean: float = 0.0
    m2: float = 0.0

    @property
    def variance(self) -> float:
        """Sample variance m2/(count-1); needs at least two values."""
        if self.count < 2:
            raise InsufficientDataError(
                f"variance needs count >= 2, got {self.count}")
        return self.m2 / (self.count - 1)

    @property
    def stddev(self) -> float:
        return math.sqrt(self.variance)

    @property
    def stderr(self) -> float:
        """Standard error of the mean."""
        return math.sqrt(self.variance / self.count)


def update(mom: StreamingMoments, value: float) -> StreamingMoments:
    """Welford one-value step."""
    count = mom.count + 1
    delta = value - mom.mean
    mean = mom.mean + delta / count
    m2 = mom.m2 + delta * (value - mean)
    return StreamingMoments(count, mean, m2)


def update_many(mom: StreamingMoments, values) -> StreamingMoments:
    """Absorb a whole array, equivalent to merging a batch.

    The batch moments come from numpy sums, then one merge step; by the
    merge/update interchange property this agrees with repeated update
    to within rounding.
    """
    values = np.asarray(values, dtype=np.float64)
    n = values.shape[0]
    if n == 0:
        return mom
    bmean = float(np.mean(values))
    bm2 = float(np.sum(np.square(values - bmean)))
    return merge(mom, StreamingMoments(n, bmean, bm2))


def merge(a: StreamingMoments, b: StreamingMoments) -> StreamingMoments:
    """Moments of the concatenated samples (Chan's parallel combination)."""
    if a.count == 0:
        return b
    if b.count == 0:
        return a
    count = a.count + b.count
    delta = b.mean - a.mean
    mean = a.mean + delta * (b.count / count)
    m2 = a.m2 + b.m2 + delta * delta * (a.count * b.count / count)
    return StreamingMoments(count, mean, m2)


def from_values(values) -> StreamingMoments:
    return update_many(StreamingMoments(), values)


@dataclass(frozen=True)
class EstimateSummary:
    """Point estimate with standard error and a 1.96-sigma 95% interval."""

    point: float
    stderr: float
    ci95_low: float
    ci95_high: float
    n_effective: int

    @classmethod
    def from_point(cls, point: float, stderr: float, n_effective: int) -> "EstimateSummary":
        half = Z95 * stderr
        return cls(point, stderr, point - half, point + half, n_effective)


def stderr_proportion(p_hat: float, n: int) -> float:
    """sqrt(p(1-p)/n), the binomial-proportion standard error."""
    if not 0.0 <= p_hat <= 1.0:
        raise ValueError(f"p_hat must be in [0, 1], got {p_hat}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return math.sqrt(p_hat * (1.0 - p_hat) / n)


def fit_error_slope(points: Sequence[tuple[float, float]]) -> float:
    """Least-squares slope of log(error) against log(n).

    An inverse-square-root law shows up as slope -1/2.
    """
    if len(points) < 3:
        raise ValueError(f"need at least 3 points, got {len(points)}")
    ns = np.asarray([p[0] for p in points], dtype=np.float64)
    errs = np.asarray([p[1] for p in points], dtype=np.float64)
    if np.any(ns <= 0) or np.any(errs <= 0):
        raise ValueError("all point coordinates must be positive")
    x = np.log(ns)
    y = np.log(errs)
    xc = x - x.mean()
    denom = float(np.dot(xc, xc))
    if denom == 0.0:
        raise ValueError("points must span more than one n value")
    return float(np.dot(xc, y - y.mean()) / denom)

"""Buffon throw model: geometry sampling, crossing test, pi estimator.

One throw is (y, phi): midpoint position modulo the line spacing and
angle to the lines.  The needle crosses a line exactly when the midpoint
distance to the nearest line satisfies x <= (l/2) sin(phi).  Only the
short-needle regime l <= a is supported; there a throw crosses at most
one line, the crossing probability is 2l/(a pi), and counting crossings
m out of n throws estimates pi as 2ln/(am).

Throws also carry the normalized offset u = y/a, uniform on [0,1); the
run-length estimator for e consumes these same values, which is the whole
point of the joint experiment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import backend, stats
from .errors import ConfigurationError, NoCrossingsError
from .streams import UnitStream


@dataclass(frozen=True)
class FloorSpec:
    """Ruled floor: parallel lines spacing_a apart."""

    spacing_a: float

    def __post_init__(self):
        if not self.spacing_a > 0:
            raise ConfigurationError(
                f"spacing_a must be positive, got {self.spacing_a}")


@dataclass(frozen=True)
class NeedleSpec:
    """Needle of length length_l; must not exceed the paired floor spacing."""

    length_l: float

    def __post_init__(self):
        if not self.length_l > 0:
            raise ConfigurationError(
                f"length_l must be positive, got {self.length_l}")


def require_short_needle(floor: FloorSpec, needle: NeedleSpec):
    # l <= a: at most one line can be crossed, the regime all formulas assume
    if needle.length_l > floor.spacing_a:
        raise ConfigurationError(
            f"needle length {needle.length_l} exceeds line spacing "
            f"{floor.spacing_a}; only the short-needle regime is supported")


@dataclass(frozen=True)
class Throw:
    """One landing: position, angle, crossing flag, and normalized offset u."""

    y: float
    x: float
    phi: float
    crossed: bool
    u: float


@dataclass(frozen=True)
class Tally:
    """Throw and crossing counts feeding the pi estimator."""

    n: int
    m: int

    def __post_init__(self):
        if self.n < 0 or self.m < 0 or self.m > self.n:
            raise ValueError(f"need 0 <= m <= n, got n={self.n}, m={self.m}")


@dataclass(frozen=True)
class ThrowBatch:
    """Vectorized throws: normalized offsets and crossing indicators."""

    u: np.ndarray
    crossed: np.ndarray

    def __len__(self):
        return self.u.shape[0]

    def tally(self) -> Tally:
        return Tally(self.u.shape[0], int(np.count_nonzero(self.crossed)))


def crosses(x: float, phi: float, l: float) -> bool:
    """Crossing test: x <= (l/2) sin(phi)."""
    if x < 0:
        raise ValueError(f"x must be >= 0, got {x}")
    if not 0 <= phi < math.pi:
        raise ValueError(f"phi must be in [0, pi), got {phi}")
    if not l > 0:
        raise ValueError(f"l must be positive, got {l}")
    return x <= (0.5 * l) * math.sin(phi)


def sample_throw(stream: UnitStream, floor: FloorSpec, needle: NeedleSpec) -> Throw:
    """One throw from the stream; consumes two draws (offset then angle)."""
    require_short_needle(floor, needle)
    a = floor.spacing_a
    u = stream.next_unit()
    v = stream.next_unit()
    y = a * u
    x = min(y, a - y)
    phi = math.pi * v
    crossed = x <= (0.5 * needle.length_l) * math.sin(phi)
    return Throw(y=y, x=x, phi=phi, crossed=crossed, u=u)


def sample_throws(stream: UnitStream, floor: FloorSpec, needle: NeedleSpec,
                  count: int) -> ThrowBatch:
    """``count`` throws at once; same draws and results as repeated sample_throw."""
    require_short_needle(floor, needle)
    if count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    u, crossed = backend.needle_chunk(
        stream.spec.seed, stream.spec.stream_index, stream.position,
        count, floor.spacing_a, needle.length_l)
    stream._advance(2 * count)
    return ThrowBatch(u=u, crossed=crossed)


def crossing_probability(floor: FloorSpec, needle: NeedleSpec) -> float:
    """Analytic crossing probability 2l/(a pi) in the short-needle regime."""
    require_short_needle(floor, needle)
    return (2.0 * needle.length_l) / (floor.spacing_a * math.pi)


def estimate_pi(tally: Tally, floor: FloorSpec, needle: NeedleSpec) -> stats.EstimateSummary:
    """Point estimate 2ln/(am) with a delta-method standard error.

    The crossing frequency p_hat = m/n has stderr sqrt(p(1-p)/n); the
    estimate is (2l/a)/p_hat, so its stderr is (2l/a) * stderr_p / p_hat**2.
    """
    require_short_needle(floor, needle)
    if tally.m == 0:
        raise NoCrossingsError(
            f"no crossings in {tally.n} throws; estimate undefined")
    a = floor.spacing_a
    l = needle.length_l
    point = ((2.0 * l) * tally.n) / (a * tally.m)
    p_hat = tally.m / tally.n
    sigma_p = stats.stderr_proportion(p_hat, tally.n)
    stderr = (2.0 * l / a) * sigma_p / (p_hat * p_hat)
    return stats.EstimateSummary.from_point(point, stderr, tally.n)

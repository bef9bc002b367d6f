"""The run-length estimator for e.

Feed iid uniform [0,1) values and count how many it takes for their sum
to first climb strictly above a threshold x; the expected count is e**x,
so the sample mean of completed run lengths estimates e at x = 1.  In the
joint experiment the fed values are the normalized offsets u of the very
throws that estimate pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import backend, stats
from .errors import InsufficientDataError


@dataclass
class RunLengthState:
    """Open run: partial sum and draw count so far; closes on sum > threshold."""

    threshold_x: float
    partial_sum: float = 0.0
    current_count: int = 0

    def __post_init__(self):
        if not 0.0 < self.threshold_x <= 1.0:
            raise ValueError(
                f"threshold_x must be in (0, 1], got {self.threshold_x}")


@dataclass
class RunLengthTally:
    """Completed-run statistics: count, total draws, streaming moments."""

    completed_runs: int = 0
    total_draws: int = 0
    moments: stats.StreamingMoments = field(default_factory=stats.StreamingMoments)

    def add_lengths(self, lengths: np.ndarray):
        self.completed_runs += int(lengths.shape[0])
        self.total_draws += int(lengths.sum())
        self.moments = stats.update_many(self.moments, lengths)


def merge_tallies(a: RunLengthTally, b: RunLengthTally) -> RunLengthTally:
    return RunLengthTally(
        completed_runs=a.completed_runs + b.completed_runs,
        total_draws=a.total_draws + b.total_draws,
        moments=stats.merge(a.moments, b.moments))


def feed(state: RunLengthState, u: float) -> Optional[int]:
    """Add one draw; returns the completed run length if this one closed it.

    A run closes the moment the partial sum strictly exceeds the
    threshold; landing exactly on it keeps the run open.
    """
    if not 0.0 <= u < 1.0:
        raise ValueError(f"u must be in [0, 1), got {u}")
    state.partial_sum += u
    state.current_count += 1
    if state.partial_sum > state.threshold_x:
        n = state.current_count
        state.partial_sum = 0.0
        state.current_count = 0
        return n
    return None


def feed_many(state: RunLengthState, tally: RunLengthTally, u: np.ndarray) -> np.ndarray:
    """Feed a whole chunk; completed lengths go to the tally and are returned.

    Equivalent to calling feed per value, including the carried-over open
    run on both ends.
    """
    u = np.ascontiguousarray(u, dtype=np.float64)
    if u.size and (not np.all(u >= 0.0) or not np.all(u < 1.0)):
        raise ValueError("all fed values must lie in [0, 1)")
    lengths, state.partial_sum, state.current_count = backend.run_lengths(
        u, state.threshold_x, state.partial_sum, state.current_count)
    tally.add_lengths(lengths)
    return lengths


def expected_draws(threshold_x: float) -> float:
    """Reference value e**x for the mean run length at threshold x in [0, 1]."""
    if not 0.0 <= threshold_x <= 1.0:
        raise ValueError(
            f"threshold_x must be in [0, 1], got {threshold_x}")
    return math.exp(threshold_x)


def estimate_e(tally: RunLengthTally) -> stats.EstimateSummary:
    """Mean completed run length with its sample standard error."""
    if tally.completed_runs < 2:
        raise InsufficientDataError(
            f"need at least 2 completed runs, got {tally.completed_runs}")
    return stats.EstimateSummary.from_point(
        tally.moments.mean, tally.moments.stderr, tally.completed_runs)

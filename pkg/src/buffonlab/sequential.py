"""Sequential estimation traces, stop rules, and the optional-stopping cheat.

A FixedN rule throws a predetermined number of times; a TargetWindow rule
watches the running estimate 2ln/(am) after every single throw and stops
the moment it falls inside a window around a chosen target.  Lazzarini's
famous 355/113 is what the second rule produces when you let it: stopping
on a good moment yields errors orders of magnitude below the honest
sampling scale at the same throw budget.  cheat_report measures exactly
that gap, seed by seed.
"""

from __future__ import annotations

import math
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from . import backend
from .errors import ConfigurationError, NoCrossingsError
from .needle import FloorSpec, NeedleSpec, require_short_needle
from .streams import StreamSpec, UnitStream


@dataclass(frozen=True)
class FixedN:
    """Stop after exactly n_stop throws."""

    n_stop: int

    def __post_init__(self):
        if self.n_stop < 1:
            raise ConfigurationError(f"n_stop must be >= 1, got {self.n_stop}")


@dataclass(frozen=True)
class TargetWindow:
    """Stop at the first n in [n_min, n_max] with m >= 1 and |estimate - target| <= tolerance."""

    target: float
    tolerance: float
    n_min: int
    n_max: int

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ConfigurationError(
                f"tolerance must be positive, got {self.tolerance}")
        if not 1 <= self.n_min <= self.n_max:
            raise ConfigurationError(
                f"need 1 <= n_min <= n_max, got n_min={self.n_min}, n_max={self.n_max}")


StopRule = Union[FixedN, TargetWindow]


@dataclass(frozen=True)
class SequentialTrace:
    """Running-estimate history of one sequential experiment.

    Record arrays hold the throw count, crossing count, and estimate at
    every recorded point (every ``stride`` throws plus the stop point).
    Estimates before the first crossing are NaN: absent, not infinite.
    """

    ns: np.ndarray
    ms: np.ndarray
    estimates: np.ndarray
    stop_n: int
    stop_reason: str  # fixed | target-hit | exhausted

    @property
    def records(self) -> list:
        """Records as (n, m, estimate-or-None) tuples; small traces only."""
        out = []
        for n, m, est in zip(self.ns.tolist(), self.ms.tolist(), self.estimates.tolist()):
            out.append((n, m, None if math.isnan(est) else est))
        return out

    @property
    def final_estimate(self) -> float:
        """Estimate at the stop point; NaN if there were no crossings."""
        return float(self.estimates[-1])


def run_sequential(stream: UnitStream, floor: FloorSpec, needle: NeedleSpec,
                   rule: StopRule, stride: int = 1) -> SequentialTrace:
    """Throw until the rule fires, recording the running estimate.

    TargetWindow rules examine every throw regardless of stride; stride
    only thins the recorded trace.
    """
    require_short_needle(floor, needle)
    if stride < 1:
        raise ConfigurationError(f"stride must be >= 1, got {stride}")

    a = floor.spacing_a
    two_l = 2.0 * needle.length_l
    seed = stream.spec.seed
    idx = stream.spec.stream_index
    pos0 = stream.position

    if isinstance(rule, FixedN):
        budget = rule.n_stop
    else:
        budget = rule.n_max

    chunks = []
    done = 0
    stop_n = 0
    stop_reason = ""
    m_total = 0
    while done < budget:
        count = min(backend.CHUNK_THROWS, budget - done)
        _, crossed = backend.needle_chunk(
            seed, idx, pos0 + 2 * done, count, a, needle.length_l)
        if isinstance(rule, TargetWindow):
            hit, m_total = backend.window_scan(
                crossed, two_l, a, done, m_total,
                rule.target, rule.tolerance, rule.n_min)
            if hit > 0:
                chunks.append(crossed[:hit - done])
                done = hit
                stop_n = hit
                stop_reason = "target-hit"
                break
        chunks.append(crossed)
        done += count
    if not stop_reason:
        stop_n = budget
        stop_reason = "fixed" if isinstance(rule, FixedN) else "exhausted"
    stream._advance(2 * stop_n)

    crossed_all = np.concatenate(chunks) if chunks else np.empty(0, dtype=np.uint8)
    m_cum = np.cumsum(crossed_all, dtype=np.int64)

    record_ns = np.arange(stride, stop_n + 1, stride, dtype=np.int64)
    if record_ns.size == 0 or record_ns[-1] != stop_n:
        record_ns = np.append(record_ns, stop_n)
    record_ms = m_cum[record_ns - 1]
    with np.errstate(divide="ignore"):
        est = (two_l * record_ns.astype(np.float64)) / (a * record_ms.astype(np.float64))
    est = np.where(record_ms >= 1, est, np.nan)
    return SequentialTrace(ns=record_ns, ms=record_ms, estimates=est,
                           stop_n=stop_n, stop_reason=stop_reason)


@dataclass(frozen=True)
class RationalEstimate:
    """Estimate as an exact reduced fraction."""

    numerator: int
    denominator: int

    def __post_init__(self):
        if self.denominator < 1 or self.numerator < 1:
            raise ValueError("numerator and denominator must be positive")
        if math.gcd(self.numerator, self.denominator) != 1:
            raise ValueError(
                f"{self.numerator}/{self.denominator} is not in lowest terms")

    @property
    def value(self) -> float:
        return self.numerator / self.denominator

    def __str__(self):
        return f"{self.numerator}/{self.denominator}"


def exact_estimate_rational(l_num: int, l_den: int, n: int, m: int) -> RationalEstimate:
    """2 l n / (a m) in exact integer arithmetic, with l/a = l_num/l_den.

    No floating point anywhere: the result is the reduced fraction
    2*l_num*n / (l_den*m).
    """
    if m == 0:
        raise NoCrossingsError("m = 0: estimate undefined")
    for name, value in (("l_num", l_num), ("l_den", l_den), ("n", n), ("m", m)):
        if not isinstance(value, int) or value < 1:
            raise ValueError(f"{name} must be a positive integer, got {value!r}")
    frac = Fraction(2 * l_num * n, l_den * m)
    return RationalEstimate(frac.numerator, frac.denominator)


def sign_crossings(trace: SequentialTrace, target: float, min_n: int = 0) -> int:
    """Count sign changes of (estimate - target) along the recorded trace.

    Only records with an estimate (m >= 1) and n >= min_n participate.  A
    record exactly on the target has sign zero and differs from both
    signed neighbors, so touching the target counts as crossing it.
    """
    if trace.ns.size == 0:
        raise ValueError("trace has no records")
    keep = (trace.ms >= 1) & (trace.ns >= min_n)
    est = trace.estimates[keep]
    if est.size < 2:
        return 0
    signs = np.sign(est - target)
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


@dataclass(frozen=True)
class CheatSeedOutcome:
    seed: int
    fixed_error: float
    cheat_stop_n: int
    cheat_reason: str
    cheat_error: Optional[float]  # None when the window was never hit


@dataclass(frozen=True)
class CheatReport:
    """Per-seed errors under an honest fixed-n rule vs the stopping cheat."""

    outcomes: list
    target: float
    hits: int
    hit_fraction: float
    median_fixed_error: float
    median_hit_error: Optional[float]
    error_ratio: Optional[float]  # median hit error / median fixed error


def _cheat_one_seed(seed: int, fixed_rule: FixedN, cheat_rule: TargetWindow,
                    floor: FloorSpec, needle: NeedleSpec) -> CheatSeedOutcome:
    fixed_trace = run_sequential(
        UnitStream(StreamSpec(seed, 0)), floor, needle, fixed_rule, stride=1)
    fixed_error = abs(fixed_trace.final_estimate - cheat_rule.target)
    cheat_trace = run_sequential(
        UnitStream(StreamSpec(seed, 0)), floor, needle, cheat_rule, stride=1)
    if cheat_trace.stop_reason == "target-hit":
        cheat_error = abs(cheat_trace.final_estimate - cheat_rule.target)
    else:
        cheat_error = None
    return CheatSeedOutcome(seed=seed, fixed_error=fixed_error,
                            cheat_stop_n=cheat_trace.stop_n,
                            cheat_reason=cheat_trace.stop_reason,
                            cheat_error=cheat_error)


def cheat_report(seeds, fixed_rule: FixedN, cheat_rule: TargetWindow,
                 floor: FloorSpec, needle: NeedleSpec, workers: int = 1) -> CheatReport:
    """Run both rules on every seed and compare error scales.

    Both arms replay the same throw sequence per seed (stream index 0 of
    that seed), so the comparison is paired.
    """
    seeds = list(seeds)
    if not seeds:
        raise ConfigurationError("need at least one seed")
    if workers < 1:
        raise ConfigurationError(f"workers must be >= 1, got {workers}")

    if workers == 1:
        outcomes = [_cheat_one_seed(s, fixed_rule, cheat_rule, floor, needle)
                    for s in seeds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_cheat_one_seed, s, fixed_rule, cheat_rule,
                                   floor, needle) for s in seeds]
            outcomes = [f.result() for f in futures]

    hit_errors = [o.cheat_error for o in outcomes if o.cheat_error is not None]
    median_fixed = statistics.median(o.fixed_error for o in outcomes)
    median_hit = statistics.median(hit_errors) if hit_errors else None
    ratio = None
    if median_hit is not None and median_fixed > 0:
        ratio = median_hit / median_fixed
    return CheatReport(outcomes=outcomes, target=cheat_rule.target,
                       hits=len(hit_errors),
                       hit_fraction=len(hit_errors) / len(seeds),
                       median_fixed_error=median_fixed,
                       median_hit_error=median_hit,
                       error_ratio=ratio)

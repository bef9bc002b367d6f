"""Experiment drivers: chunked, multi-worker runs with deterministic merges.

Parallelism never changes results for a fixed worker count.  Worker i of
w owns substream (seed, i) and a fixed share of the throws; chunks have a
fixed size; every floating-point reduction happens either inside one
chunk (numpy pairwise sums) or across workers in index order.  Output is
therefore a pure function of (seed, workers, configuration), and
--workers 1 is the single-stream reference.  Changing the worker count
repartitions the substreams and so legitimately changes the sample.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import antfield, backend, needle as needle_mod, runlength, stats
from .errors import ConfigurationError, InsufficientDataError, NoCrossingsError
from .needle import FloorSpec, NeedleSpec, Tally
from .streams import StreamSpec, UnitStream


def partition(total: int, workers: int) -> list[int]:
    """Split ``total`` items into ``workers`` near-equal shares, larger first."""
    if total < 0:
        raise ConfigurationError(f"total must be >= 0, got {total}")
    if workers < 1:
        raise ConfigurationError(f"workers must be >= 1, got {workers}")
    base, extra = divmod(total, workers)
    return [base + (1 if i < extra else 0) for i in range(workers)]


def _map_slots(fn, args_list, workers: int) -> list:
    # results in submission order, whatever order workers finish in
    if workers == 1 or len(args_list) <= 1:
        return [fn(*args) for args in args_list]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, *args) for args in args_list]
        return [f.result() for f in futures]


@dataclass(frozen=True)
class NeedleResult:
    summary: stats.EstimateSummary
    tally: Tally


def _needle_worker(seed: int, stream_index: int, throws: int,
                   spacing_a: float, length_l: float) -> int:
    m = 0
    done = 0
    while done < throws:
        count = min(backend.CHUNK_THROWS, throws - done)
        _, crossed = backend.needle_chunk(
            seed, stream_index, 2 * done, count, spacing_a, length_l)
        m += int(np.count_nonzero(crossed))
        done += count
    return m


def run_needle(seed: int, throws: int, floor: FloorSpec, needle: NeedleSpec,
               workers: int = 1) -> NeedleResult:
    """Estimate pi from ``throws`` needle throws split across workers."""
    needle_mod.require_short_needle(floor, needle)
    if throws < 1:
        raise ConfigurationError(f"throws must be >= 1, got {throws}")
    shares = partition(throws, workers)
    args = [(seed, i, shares[i], floor.spacing_a, needle.length_l)
            for i in range(workers)]
    ms = _map_slots(_needle_worker, args, workers)
    tally = Tally(throws, sum(ms))
    return NeedleResult(summary=needle_mod.estimate_pi(tally, floor, needle),
                        tally=tally)


@dataclass(frozen=True)
class JointResult:
    pi_summary: stats.EstimateSummary
    e_summary: stats.EstimateSummary
    tally: Tally
    completed_runs: int
    threshold_x: float
    correlation: Optional[float]


def _joint_worker(seed: int, stream_index: int, throws: int, spacing_a: float,
                  length_l: float, threshold_x: float):
    state = runlength.RunLengthState(threshold_x)
    tally = runlength.RunLengthTally()
    m = 0
    su = suu = scu = 0.0
    done = 0
    while done < throws:
        count = min(backend.CHUNK_THROWS, throws - done)
        u, crossed = backend.needle_chunk(
            seed, stream_index, 2 * done, count, spacing_a, length_l)
        m += int(np.count_nonzero(crossed))
        su += float(np.sum(u))
        suu += float(np.sum(np.square(u)))
        scu += float(np.sum(u[crossed != 0]))
        runlength.feed_many(state, tally, u)
        done += count
    # trailing open run is discarded: the estimator stays exactly the
    # completed-run mean, at the cost of at most one run per worker
    return m, tally, su, suu, scu


def _correlation_from_sums(n: int, m: int, su: float, suu: float,
                           scu: float) -> Optional[float]:
    # population moments of (crossing indicator, u)
    mean_c = m / n
    mean_u = su / n
    var_c = mean_c * (1.0 - mean_c)
    var_u = suu / n - mean_u * mean_u
    if var_c <= 0.0 or var_u <= 0.0:
        return None
    cov = scu / n - mean_c * mean_u
    return cov / math.sqrt(var_c * var_u)


def run_joint(seed: int, throws: int, floor: FloorSpec, needle: NeedleSpec,
              threshold_x: float = 1.0, workers: int = 1) -> JointResult:
    """One pass over the throws feeding both estimators.

    Crossings estimate pi; the same throws' normalized offsets u feed the
    run-length estimator for e**threshold.  Also reports the empirical
    correlation between the crossing indicator and u.
    """
    needle_mod.require_short_needle(floor, needle)
    if throws < 1:
        raise ConfigurationError(f"throws must be >= 1, got {throws}")
    runlength.RunLengthState(threshold_x)  # validates the threshold
    shares = partition(throws, workers)
    args = [(seed, i, shares[i], floor.spacing_a, needle.length_l, threshold_x)
            for i in range(workers)]
    parts = _map_slots(_joint_worker, args, workers)

    m = 0
    su = suu = scu = 0.0
    tally = runlength.RunLengthTally()
    for part_m, part_tally, part_su, part_suu, part_scu in parts:
        m += part_m
        tally = runlength.merge_tallies(tally, part_tally)
        su += part_su
        suu += part_suu
        scu += part_scu

    throw_tally = Tally(throws, m)
    return JointResult(
        pi_summary=needle_mod.estimate_pi(throw_tally, floor, needle),
        e_summary=runlength.estimate_e(tally),
        tally=throw_tally,
        completed_runs=tally.completed_runs,
        threshold_x=threshold_x,
        correlation=_correlation_from_sums(throws, m, su, suu, scu))


@dataclass(frozen=True)
class ConvergeResult:
    ns: list
    rms_errors: list
    slope: float
    n_seeds: int


def _converge_worker(seed: int, stream_index: int, ns: Sequence[int],
                     spacing_a: float, length_l: float, target: float) -> list[float]:
    # one long stream; checkpoints are prefixes, so n_k reuses the first
    # n_k throws of the same sequence
    errors = []
    two_l = 2.0 * length_l
    m = 0
    done = 0
    k = 0
    max_n = ns[-1]
    while done < max_n:
        count = min(backend.CHUNK_THROWS, max_n - done)
        _, crossed = backend.needle_chunk(
            seed, stream_index, 2 * done, count, spacing_a, length_l)
        cum = np.cumsum(crossed, dtype=np.int64)
        while k < len(ns) and ns[k] <= done + count:
            m_at = m + int(cum[ns[k] - done - 1])
            if m_at == 0:
                raise NoCrossingsError(
                    f"no crossings in first {ns[k]} throws of substream "
                    f"{stream_index}")
            est = (two_l * ns[k]) / (spacing_a * m_at)
            errors.append(est - target)
            k += 1
        m += int(cum[-1])
        done += count
    return errors


def run_convergence(seed: int, ns: Sequence[int], n_seeds: int,
                    floor: FloorSpec, needle: NeedleSpec, workers: int = 1,
                    target: float = math.pi) -> ConvergeResult:
    """RMS pi-estimate error at each n over many substreams, plus the fitted slope.

    Substream j of the seed supplies one error sample per checkpoint; the
    slope of log(rms) vs log(n) measures the inverse-square-root law.
    """
    needle_mod.require_short_needle(floor, needle)
    ns = sorted(set(int(n) for n in ns))
    if len(ns) < 3:
        raise ConfigurationError(f"need at least 3 distinct n values, got {ns}")
    if ns[0] < 1:
        raise ConfigurationError(f"n values must be >= 1, got {ns[0]}")
    if n_seeds < 1:
        raise ConfigurationError(f"n_seeds must be >= 1, got {n_seeds}")
    args = [(seed, j, ns, floor.spacing_a, needle.length_l, target)
            for j in range(n_seeds)]
    rows = _map_slots(_converge_worker, args, workers)
    errors = np.asarray(rows, dtype=np.float64)  # (n_seeds, len(ns))
    rms = np.sqrt(np.mean(np.square(errors), axis=0))
    points = list(zip((float(n) for n in ns), rms.tolist()))
    slope = stats.fit_error_slope(points)
    return ConvergeResult(ns=ns, rms_errors=rms.tolist(), slope=slope,
                          n_seeds=n_seeds)


@dataclass(frozen=True)
class AntResult:
    n_values: np.ndarray
    area_values: np.ndarray
    n_summary: stats.EstimateSummary
    area_summary: stats.EstimateSummary
    total_s: float
    total_l: float


def _ant_rep(seed: int, rep: int, count_a: int, count_b: int, seg_len: float,
             region: antfield.TorusRegion):
    stream = UnitStream(StreamSpec(seed, rep))
    set_a = antfield.scatter(stream, count_a, seg_len, region)
    set_b = antfield.scatter(stream, count_b, seg_len, region)
    n = antfield.intersect_count(set_a, set_b, region)
    total_s = count_a * seg_len
    total_l = count_b * seg_len
    return n, antfield.estimate_area(total_s, total_l, n)


def run_ant(seed: int, reps: int, count_a: int, count_b: int, seg_len: float,
            region: antfield.TorusRegion, workers: int = 1) -> AntResult:
    """Repeat the two-set scatter, collecting N and the area estimate per repetition."""
    if reps < 1:
        raise ConfigurationError(f"reps must be >= 1, got {reps}")
    if reps < 2:
        raise InsufficientDataError(
            "need at least 2 repetitions for a standard error")
    args = [(seed, j, count_a, count_b, seg_len, region) for j in range(reps)]
    rows = _map_slots(_ant_rep, args, workers)
    n_values = np.asarray([r[0] for r in rows], dtype=np.int64)
    area_values = np.asarray([r[1] for r in rows], dtype=np.float64)
    n_mom = stats.from_values(n_values)
    a_mom = stats.from_values(area_values)
    return AntResult(
        n_values=n_values, area_values=area_values,
        n_summary=stats.EstimateSummary.from_point(n_mom.mean, n_mom.stderr, reps),
        area_summary=stats.EstimateSummary.from_point(a_mom.mean, a_mom.stderr, reps),
        total_s=count_a * seg_len, total_l=count_b * seg_len)

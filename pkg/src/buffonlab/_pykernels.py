"""Pure-numpy fallback for the compiled kernels.

Same five entry points as ``_kernels``, same results to the bit.  Uniform
draws come from numpy's own Philox4x64-10 bit generator positioned by
counter block, so the streams are identical by construction; the floating
point expressions mirror the compiled versions operation for operation.

The one algorithmic difference is ``run_lengths``: the compiled kernel
walks the draws sequentially, while here runs are found from cumulative
sums and then re-accumulated in sequential order to confirm each closing
index.  Cumulative sums round differently than a per-run left-to-right
sum, so the candidates can in principle be off; any run whose confirmed
closing index disagrees falls back to a scalar walk from that point.  The
emitted lengths and carry are therefore exactly the sequential ones.
"""

from __future__ import annotations

import numpy as np

PHILOX_BUF = 4


def _generator(seed: int, stream: int, offset: int) -> np.random.Generator:
    # numpy pre-increments the counter, so block b is generated with
    # counter b + 1; seeking to block offset//4 therefore means starting
    # the counter at offset//4 and discarding the in-block remainder.
    # explicit uint64 arrays: plain lists would cast via int64 and overflow
    key = np.array([seed, stream], dtype=np.uint64)
    ctr = np.array([offset // PHILOX_BUF, 0, 0, 0], dtype=np.uint64)
    bitgen = np.random.Philox(key=key, counter=ctr)
    gen = np.random.Generator(bitgen)
    rem = offset % PHILOX_BUF
    if rem:
        gen.random(rem)
    return gen


def uniforms(seed: int, stream: int, offset: int, count: int) -> np.ndarray:
    """Draws [offset, offset+count) of the unit-uniform stream (seed, stream)."""
    return _generator(seed, stream, offset).random(count)


def needle_chunk(seed: int, stream: int, draw_offset: int, count: int,
                 spacing_a: float, length_l: float):
    """Simulate ``count`` throws starting at draw position ``draw_offset``.

    Returns (u, crossed) exactly as the compiled kernel does: u is the
    normalized offset draw of each throw, crossed the indicator of
    x <= (l/2) sin(pi v) with y = a*u and x = min(y, a-y).
    """
    draws = uniforms(seed, stream, draw_offset, 2 * count)
    u = np.ascontiguousarray(draws[0::2])
    v = draws[1::2]
    y = spacing_a * u
    x = np.minimum(y, spacing_a - y)
    thr = (0.5 * length_l) * np.sin(np.pi * v)
    crossed = (x <= thr).astype(np.uint8)
    return u, crossed


def _scalar_runs(u, threshold, s, c, out):
    for value in u.tolist():
        s += value
        c += 1
        if s > threshold:
            out.append(c)
            s = 0.0
            c = 0
    return s, c


def run_lengths(u, threshold: float, carry_sum: float, carry_count: int):
    """Split a chunk of unit draws into threshold-exceedance run lengths.

    Same contract as the compiled kernel: continues the carried-in open
    run, returns (lengths, carry_sum', carry_count').
    """
    u = np.ascontiguousarray(u, dtype=np.float64)
    n = u.shape[0]
    if n == 0:
        return np.empty(0, dtype=np.int64), carry_sum, carry_count

    cs = np.cumsum(u)
    # Candidate closing index for a run starting at i: first j >= i with
    # cs[j] > threshold + (sum before i).  Guesses only; confirmed below.
    tgt = np.empty(n, dtype=np.float64)
    tgt[0] = threshold - carry_sum
    tgt[1:] = threshold + cs[:-1]
    nxt = np.searchsorted(cs, tgt, side="right").tolist()

    starts = []
    closes = []
    pos = 0
    while pos < n:
        j = nxt[pos]
        if j >= n:
            break
        starts.append(pos)
        closes.append(j)
        pos = j + 1

    runs = len(starts)
    lengths: list[int] = []
    redo_from = -1  # chunk index to re-walk sequentially, -1 = none

    if runs:
        s_arr = np.asarray(starts, dtype=np.int64)
        c_arr = np.asarray(closes, dtype=np.int64)
        # Confirm each candidate by accumulating its run in true sequential
        # order, all runs advanced one element per wave step.
        acc = np.zeros(runs, dtype=np.float64)
        acc[0] = carry_sum
        confirmed = np.full(runs, -1, dtype=np.int64)
        alive = np.arange(runs)
        step = 0
        while alive.size:
            idx = s_arr[alive] + step
            inside = idx < n
            alive = alive[inside]
            if not alive.size:
                break
            acc[alive] += u[s_arr[alive] + step]
            done = acc[alive] > threshold
            hit = alive[done]
            confirmed[hit] = s_arr[hit] + step
            alive = alive[~done]
            step += 1

        bad = np.flatnonzero(confirmed != c_arr)
        keep = runs if bad.size == 0 else int(bad[0])
        first = True
        for k in range(keep):
            if first:
                lengths.append(carry_count + int(c_arr[0]) + 1)
                first = False
            else:
                lengths.append(int(c_arr[k] - c_arr[k - 1]))
        if keep < runs:
            redo_from = int(s_arr[keep])
        else:
            pos = int(c_arr[-1]) + 1
    else:
        redo_from = 0

    if redo_from == 0:
        s, c = carry_sum, carry_count
        s, c = _scalar_runs(u, threshold, s, c, lengths)
    elif redo_from > 0:
        s, c = _scalar_runs(u[redo_from:], threshold, 0.0, 0, lengths)
    else:
        # tail after the last confirmed close is the new open run
        s, c = _scalar_runs(u[pos:], threshold, 0.0, 0, lengths)

    return np.asarray(lengths, dtype=np.int64), s, c


def window_scan(crossed, two_l: float, spacing_a: float, n0: int, m0: int,
                target: float, tolerance: float, n_min: int):
    """First absolute throw count in this chunk where 2ln/(am) enters the window.

    Mirrors the compiled kernel: returns (hit_n, m) with hit_n = 0 when the
    window is never entered inside the chunk.
    """
    crossed = np.asarray(crossed, dtype=np.uint8)
    size = crossed.shape[0]
    if size == 0:
        return 0, int(m0)
    m_cum = m0 + np.cumsum(crossed, dtype=np.int64)
    n_arr = np.arange(n0 + 1, n0 + size + 1, dtype=np.int64)
    valid = (m_cum >= 1) & (n_arr >= n_min)
    with np.errstate(divide="ignore"):
        est = (two_l * n_arr.astype(np.float64)) / (spacing_a * m_cum.astype(np.float64))
    inside = valid & (np.abs(est - target) <= tolerance)
    hits = np.flatnonzero(inside)
    if hits.size:
        first = int(hits[0])
        return int(n_arr[first]), int(m_cum[first])
    return 0, int(m_cum[-1])


def _orient(ax, ay, bx, by, cx, cy):
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def _on_seg(ax, ay, bx, by, cx, cy):
    return ((np.minimum(ax, bx) <= cx) & (cx <= np.maximum(ax, bx))
            & (np.minimum(ay, by) <= cy) & (cy <= np.maximum(ay, by)))


def cross_count(amx, amy, ahx, ahy, bmx, bmy, bhx, bhy,
                reach: float, side: float) -> int:
    """Count intersecting (a, b) segment pairs under the torus minimal image.

    Same geometry as the compiled kernel: minimal-image displacement of
    each b midpoint toward the a midpoint, a reach prefilter, then the
    orientation-sign intersection test with collinear endpoints resolved
    by closed bounding boxes.
    """
    amx = np.asarray(amx, dtype=np.float64)
    amy = np.asarray(amy, dtype=np.float64)
    ahx = np.asarray(ahx, dtype=np.float64)
    ahy = np.asarray(ahy, dtype=np.float64)
    bmx = np.asarray(bmx, dtype=np.float64)
    bmy = np.asarray(bmy, dtype=np.float64)
    bhx = np.asarray(bhx, dtype=np.float64)
    bhy = np.asarray(bhy, dtype=np.float64)

    total = 0
    r2 = reach * reach
    # block over the a side to bound the na*nb temporaries
    block = max(1, int(4e6) // max(1, bmx.shape[0]))
    for lo in range(0, amx.shape[0], block):
        hi = lo + block
        dx = bmx[np.newaxis, :] - amx[lo:hi, np.newaxis]
        dy = bmy[np.newaxis, :] - amy[lo:hi, np.newaxis]
        dx = dx - side * np.floor(dx / side + 0.5)
        dy = dy - side * np.floor(dy / side + 0.5)
        ii, jj = np.nonzero(dx * dx + dy * dy <= r2)
        if not ii.size:
            continue
        dxp = dx[ii, jj]
        dyp = dy[ii, jj]
        p1x, p1y = -ahx[lo + ii], -ahy[lo + ii]
        q1x, q1y = ahx[lo + ii], ahy[lo + ii]
        p2x, p2y = dxp - bhx[jj], dyp - bhy[jj]
        q2x, q2y = dxp + bhx[jj], dyp + bhy[jj]
        d1 = _orient(p2x, p2y, q2x, q2y, p1x, p1y)
        d2 = _orient(p2x, p2y, q2x, q2y, q1x, q1y)
        d3 = _orient(p1x, p1y, q1x, q1y, p2x, p2y)
        d4 = _orient(p1x, p1y, q1x, q1y, q2x, q2y)
        proper = ((((d1 > 0) & (d2 < 0)) | ((d1 < 0) & (d2 > 0)))
                  & (((d3 > 0) & (d4 < 0)) | ((d3 < 0) & (d4 > 0))))
        touch = ((d1 == 0) & _on_seg(p2x, p2y, q2x, q2y, p1x, p1y)
                 | (d2 == 0) & _on_seg(p2x, p2y, q2x, q2y, q1x, q1y)
                 | (d3 == 0) & _on_seg(p1x, p1y, q1x, q1y, p2x, p2y)
                 | (d4 == 0) & _on_seg(p1x, p1y, q1x, q1y, q2x, q2y))
        total += int(np.count_nonzero(proper | touch))
    return total

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels.

Random numbers come from Philox4x64-10 keyed with (seed, stream_index),
counter-based and therefore freely addressable: draw i of a stream lives in
counter block i // 4.  The uint64-to-double map is (x >> 11) * 2**-53, i.e.
the 53-bit mantissa construction on [0, 1).  Both conventions are chosen to
match numpy's Philox bit generator exactly, so the pure-numpy fallback in
``_pykernels`` produces byte-identical streams (verified in the test suite).

Every floating-point expression here is written with the same operation
order as its numpy counterpart; with IEEE doubles and a libm-consistent
sin this makes whole-simulation results identical across backends.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport M_PI, fabs, floor, sin

cnp.import_array()

ctypedef unsigned long long u64

cdef extern from *:
    ctypedef unsigned long long u128 "unsigned __int128"

DEF PHILOX_BUF = 4

cdef u64 M0 = 0xD2E7470EE14C6C93ULL
cdef u64 M1 = 0xCA5A826395121157ULL
cdef u64 W0 = 0x9E3779B97F4A7C15ULL
cdef u64 W1 = 0xBB67AE8584CAA73BULL

cdef double INV_2_53 = 1.0 / 9007199254740992.0


cdef struct philox_ctx:
    u64 c0, c1, c2, c3          # counter of the NEXT block to generate
    u64 k0, k1                  # key = (seed, stream_index)
    u64 buf[4]
    int pos                     # next unread slot in buf, 4 = empty


cdef inline void _philox_block(philox_ctx* ctx) nogil:
    cdef u64 t0 = ctx.c0, t1 = ctx.c1, t2 = ctx.c2, t3 = ctx.c3
    cdef u64 k0 = ctx.k0, k1 = ctx.k1
    cdef u64 lo0, hi0, lo1, hi1
    cdef int r
    for r in range(10):
        if r > 0:
            k0 += W0
            k1 += W1
        lo0 = t0 * M0
        hi0 = <u64> ((<u128> t0 * M0) >> 64)
        lo1 = t2 * M1
        hi1 = <u64> ((<u128> t2 * M1) >> 64)
        t0 = hi1 ^ t1 ^ k0
        t1 = lo1
        t2 = hi0 ^ t3 ^ k1
        t3 = lo0
    ctx.buf[0] = t0
    ctx.buf[1] = t1
    ctx.buf[2] = t2
    ctx.buf[3] = t3
    ctx.pos = 0
    # 256-bit counter increment
    ctx.c0 += 1
    if ctx.c0 == 0:
        ctx.c1 += 1
        if ctx.c1 == 0:
            ctx.c2 += 1
            if ctx.c2 == 0:
                ctx.c3 += 1


cdef inline void _philox_seek(philox_ctx* ctx, u64 seed, u64 stream, u64 offset) nogil:
    # numpy's Philox increments the counter before generating, so the block
    # holding draws [4b, 4b+4) is produced with counter value b + 1.
    ctx.k0 = seed
    ctx.k1 = stream
    ctx.c0 = offset // 4 + 1
    ctx.c1 = 0
    ctx.c2 = 0
    ctx.c3 = 0
    ctx.pos = PHILOX_BUF
    if offset % 4 != 0:
        _philox_block(ctx)
        ctx.pos = <int> (offset % 4)


cdef inline double _next_unit(philox_ctx* ctx) nogil:
    if ctx.pos >= PHILOX_BUF:
        _philox_block(ctx)
    cdef u64 v = ctx.buf[ctx.pos]
    ctx.pos += 1
    return <double> (v >> 11) * INV_2_53


def uniforms(u64 seed, u64 stream, u64 offset, Py_ssize_t count):
    """Draws [offset, offset+count) of the unit-uniform stream (seed, stream)."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(count, dtype=np.float64)
    cdef double[::1] o = out
    cdef philox_ctx ctx
    cdef Py_ssize_t i
    with nogil:
        _philox_seek(&ctx, seed, stream, offset)
        for i in range(count):
            o[i] = _next_unit(&ctx)
    return out


def needle_chunk(u64 seed, u64 stream, u64 draw_offset, Py_ssize_t count,
                 double spacing_a, double length_l):
    """Simulate ``count`` throws starting at draw position ``draw_offset``.

    Each throw consumes two draws, midpoint offset first, then angle.
    Returns (u, crossed): normalized offsets in [0,1) and crossing
    indicators of the test x <= (l/2) sin(phi), evaluated as
    y = a*u; x = min(y, a-y); thr = (0.5*l)*sin(pi*v).
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=1] u_out = np.empty(count, dtype=np.float64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] c_out = np.empty(count, dtype=np.uint8)
    cdef double[::1] uo = u_out
    cdef unsigned char[::1] co = c_out
    cdef philox_ctx ctx
    cdef double half_l = 0.5 * length_l
    cdef double u, v, y, ay, x, thr
    cdef Py_ssize_t i
    with nogil:
        _philox_seek(&ctx, seed, stream, draw_offset)
        for i in range(count):
            u = _next_unit(&ctx)
            v = _next_unit(&ctx)
            y = spacing_a * u
            ay = spacing_a - y
            x = y if y <= ay else ay
            thr = half_l * sin(M_PI * v)
            uo[i] = u
            co[i] = 1 if x <= thr else 0
    return u_out, c_out


def run_lengths(double[::1] u, double threshold, double carry_sum, long long carry_count):
    """Split a chunk of unit draws into threshold-exceedance run lengths.

    Continues a run carried in from the previous chunk (carry_sum,
    carry_count) and returns (lengths, carry_sum', carry_count') where the
    carry describes the still-open trailing run.  A run closes on the draw
    that pushes its partial sum strictly above ``threshold``.
    """
    cdef Py_ssize_t n = u.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.empty(n, dtype=np.int64)
    cdef long long[::1] o = out
    cdef Py_ssize_t i, k = 0
    cdef double s = carry_sum
    cdef long long c = carry_count
    with nogil:
        for i in range(n):
            s += u[i]
            c += 1
            if s > threshold:
                o[k] = c
                k += 1
                s = 0.0
                c = 0
    return out[:k].copy(), s, c


def window_scan(const unsigned char[::1] crossed, double two_l, double spacing_a,
                long long n0, long long m0, double target, double tolerance,
                long long n_min):
    """First absolute throw count in this chunk where 2ln/(am) enters the window.

    ``crossed`` holds the chunk's crossing indicators, n0/m0 the totals before
    the chunk.  Returns (hit_n, m); hit_n is 0 when the window is never
    entered inside the chunk (m then covers the whole chunk, otherwise the
    prefix ending at the hit).
    """
    cdef Py_ssize_t i
    cdef long long n = n0, m = m0, hit = 0
    cdef double est
    with nogil:
        for i in range(crossed.shape[0]):
            n += 1
            m += crossed[i]
            if m >= 1 and n >= n_min:
                est = (two_l * <double> n) / (spacing_a * <double> m)
                if fabs(est - target) <= tolerance:
                    hit = n
                    break
    return hit, m


def cross_count(double[::1] amx, double[::1] amy, double[::1] ahx, double[::1] ahy,
                double[::1] bmx, double[::1] bmy, double[::1] bhx, double[::1] bhy,
                double reach, double side):
    """Count intersecting (a, b) segment pairs under the torus minimal image.

    Segments are given as midpoints and half-vectors (h = (len/2)(cos t, sin t)).
    ``reach`` is the largest midpoint distance at which a pair can touch,
    i.e. (len_a + len_b)/2; pairs farther apart are skipped.
    """
    cdef Py_ssize_t na = amx.shape[0], nb = bmx.shape[0]
    cdef Py_ssize_t i, j
    cdef long long total = 0
    cdef double r2 = reach * reach
    cdef double dx, dy, p2x, p2y, q2x, q2y, p1x, p1y, q1x, q1y
    cdef double d1, d2, d3, d4
    cdef bint hit
    with nogil:
        for i in range(na):
            p1x = -ahx[i]
            p1y = -ahy[i]
            q1x = ahx[i]
            q1y = ahy[i]
            for j in range(nb):
                dx = bmx[j] - amx[i]
                dy = bmy[j] - amy[i]
                dx = dx - side * floor(dx / side + 0.5)
                dy = dy - side * floor(dy / side + 0.5)
                if dx * dx + dy * dy > r2:
                    continue
                p2x = dx - bhx[j]
                p2y = dy - bhy[j]
                q2x = dx + bhx[j]
                q2y = dy + bhy[j]
                d1 = _orient(p2x, p2y, q2x, q2y, p1x, p1y)
                d2 = _orient(p2x, p2y, q2x, q2y, q1x, q1y)
                d3 = _orient(p1x, p1y, q1x, q1y, p2x, p2y)
                d4 = _orient(p1x, p1y, q1x, q1y, q2x, q2y)
                hit = False
                if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and \
                   ((d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)):
                    hit = True
                elif d1 == 0 and _on_seg(p2x, p2y, q2x, q2y, p1x, p1y):
                    hit = True
                elif d2 == 0 and _on_seg(p2x, p2y, q2x, q2y, q1x, q1y):
                    hit = True
                elif d3 == 0 and _on_seg(p1x, p1y, q1x, q1y, p2x, p2y):
                    hit = True
                elif d4 == 0 and _on_seg(p1x, p1y, q1x, q1y, q2x, q2y):
                    hit = True
                if hit:
                    total += 1
    return total


cdef inline double _orient(double ax, double ay, double bx, double by,
                           double cx, double cy) nogil:
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


cdef inline bint _on_seg(double ax, double ay, double bx, double by,
                         double cx, double cy) nogil:
    # c is collinear with a-b; is it inside the closed bounding box?
    cdef double lo, hi
    lo = ax if ax <= bx else bx
    hi = ax if ax >= bx else bx
    if cx < lo or cx > hi:
        return False
    lo = ay if ay <= by else by
    hi = ay if ay >= by else by
    return lo <= cy <= hi

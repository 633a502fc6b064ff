# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: greedy corridor spline fit and step-exact evaluation.

Mirror of ``_corridor_py``; see that module for the algorithm notes.  Slope
comparisons use int64 cross-multiplication, which is exact while
``(rank span + eps) * row span`` stays below 2**63 (billions of rows).
"""

import numpy as np


def fit_corridor(rows_obj, ranks_obj, eps_obj):
    cdef long long[::1] rows = np.ascontiguousarray(rows_obj, dtype=np.int64)
    cdef long long[::1] ranks = np.ascontiguousarray(ranks_obj, dtype=np.int64)
    cdef long long eps = eps_obj
    cdef Py_ssize_t k = rows.shape[0]
    out_r = np.empty(k, dtype=np.int64)
    out_v = np.empty(k, dtype=np.int64)
    cdef long long[::1] kr = out_r
    cdef long long[::1] kv = out_v
    cdef Py_ssize_t m = 1
    kr[0] = rows[0]
    kv[0] = ranks[0]
    if k == 1:
        return out_r[:1], out_v[:1]
    cdef long long bx = rows[0]
    cdef long long by = ranks[0]
    cdef long long lo_n = 0, lo_d = 0, hi_n = 0, hi_d = 0
    cdef long long prev_x = bx, prev_y = by
    cdef long long x, y, dx, dy, cn
    cdef Py_ssize_t j
    for j in range(1, k):
        x = rows[j]
        y = ranks[j]
        dx = x - bx
        dy = y - by
        if (hi_d != 0 and dy * hi_d > hi_n * dx) or \
           (lo_d != 0 and dy * lo_d < lo_n * dx):
            kr[m] = prev_x
            kv[m] = prev_y
            m += 1
            bx = prev_x
            by = prev_y
            lo_d = 0
            hi_d = 0
            dx = x - bx
            dy = y - by
        cn = dy - eps
        if lo_d == 0 or cn * lo_d > lo_n * dx:
            lo_n = cn
            lo_d = dx
        cn = dy + eps
        if hi_d == 0 or cn * hi_d < hi_n * dx:
            hi_n = cn
            hi_d = dx
        prev_x = x
        prev_y = y
    if prev_x != kr[m - 1]:
        kr[m] = prev_x
        kv[m] = prev_y
        m += 1
    return out_r[:m].copy(), out_v[:m].copy()


cdef long long _eval(const long long[::1] kx, const long long[::1] ky,
                     long long i) nogil:
    cdef Py_ssize_t n = kx.shape[0]
    cdef Py_ssize_t lo, hi, mid
    if i < kx[0]:
        return ky[0] - 1
    if i >= kx[n - 1]:
        return ky[n - 1]
    lo = 0
    hi = n - 1
    while hi - lo > 1:
        mid = (lo + hi) >> 1
        if kx[mid] <= i:
            lo = mid
        else:
            hi = mid
    if i == kx[lo]:
        return ky[lo]
    return ky[lo] + (i - kx[lo]) * (ky[hi] - ky[lo]) // (kx[hi] - kx[lo])


def eval_spline(knot_rows, knot_ranks, i):
    cdef long long[::1] kx = np.ascontiguousarray(knot_rows, dtype=np.int64)
    cdef long long[::1] ky = np.ascontiguousarray(knot_ranks, dtype=np.int64)
    return _eval(kx, ky, i)


def max_fit_error(knot_rows, knot_ranks, rows_obj, ranks_obj):
    cdef long long[::1] kx = np.ascontiguousarray(knot_rows, dtype=np.int64)
    cdef long long[::1] ky = np.ascontiguousarray(knot_ranks, dtype=np.int64)
    cdef long long[::1] rows = np.ascontiguousarray(rows_obj, dtype=np.int64)
    cdef long long[::1] ranks = np.ascontiguousarray(ranks_obj, dtype=np.int64)
    cdef long long worst = 0, e
    cdef Py_ssize_t j
    for j in range(rows.shape[0]):
        e = _eval(kx, ky, rows[j]) - ranks[j]
        if e < 0:
            e = -e
        if e > worst:
            worst = e
    return worst

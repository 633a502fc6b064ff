"""Pure-Python kernels: greedy corridor spline fit and step-exact evaluation.

Same contract as the compiled module in ``_corridor.pyx``.  All arithmetic is
exact integer arithmetic: slope bounds are kept as fractions and compared by
cross-multiplication, and evaluation interpolates with floor division.  That
exactness is what lets a zero-error fit reproduce rank counts bit-for-bit.
"""

from __future__ import annotations

__all__ = ["fit_corridor", "eval_spline", "max_fit_error"]


def fit_corridor(rows, ranks, eps):
    """Fit a piecewise-linear spline through ``(rows, ranks)`` points.

    Greedy one-pass corridor: a segment grows from its base knot while the
    next point stays inside the cone of slopes that keeps every point of the
    segment within ``eps`` of the chord.  When a point falls outside the
    cone, the previous point is emitted as a knot and a new segment starts
    there.  First and last points are always knots, knots are exact, and
    every fitted point ends up within ``eps`` of the interpolant.

    ``rows`` must be strictly increasing and ``ranks`` non-decreasing.
    Returns two lists (knot rows, knot ranks).
    """
    k = len(rows)
    knot_r = [int(rows[0])]
    knot_v = [int(ranks[0])]
    if k == 1:
        return knot_r, knot_v
    eps = int(eps)
    bx = knot_r[0]
    by = knot_v[0]
    # Cone of admissible slopes as fractions; a zero denominator means the
    # bound is not set yet (fresh segment).
    lo_n = lo_d = hi_n = hi_d = 0
    prev_x = bx
    prev_y = by
    for j in range(1, k):
        x = int(rows[j])
        y = int(ranks[j])
        dx = x - bx
        dy = y - by
        if (hi_d != 0 and dy * hi_d > hi_n * dx) or (
            lo_d != 0 and dy * lo_d < lo_n * dx
        ):
            # Point left the cone: close the segment at the previous point.
            knot_r.append(prev_x)
            knot_v.append(prev_y)
            bx = prev_x
            by = prev_y
            lo_d = hi_d = 0
            dx = x - bx
            dy = y - by
        cn = dy - eps
        if lo_d == 0 or cn * lo_d > lo_n * dx:
            lo_n, lo_d = cn, dx
        cn = dy + eps
        if hi_d == 0 or cn * hi_d < hi_n * dx:
            hi_n, hi_d = cn, dx
        prev_x = x
        prev_y = y
    if prev_x != knot_r[-1]:
        knot_r.append(prev_x)
        knot_v.append(prev_y)
    return knot_r, knot_v


def eval_spline(knot_rows, knot_ranks, i):
    """Evaluate the fitted rank function at row ``i``.

    Below the support the value is ``first_rank - 1`` (the count just before
    the first covered occurrence), above it is ``last_rank``.  In between the
    value is the floor of the linear interpolation, computed in integers so a
    zero-error fit recovers the underlying step function exactly.
    """
    i = int(i)
    n = len(knot_rows)
    if i < knot_rows[0]:
        return int(knot_ranks[0]) - 1
    if i >= knot_rows[n - 1]:
        return int(knot_ranks[n - 1])
    lo = 0
    hi = n - 1
    # invariant: knot_rows[lo] <= i < knot_rows[hi]
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if knot_rows[mid] <= i:
            lo = mid
        else:
            hi = mid
    x0 = int(knot_rows[lo])
    y0 = int(knot_ranks[lo])
    if i == x0:
        return y0
    x1 = int(knot_rows[hi])
    y1 = int(knot_ranks[hi])
    return y0 + (i - x0) * (y1 - y0) // (x1 - x0)


def max_fit_error(knot_rows, knot_ranks, rows, ranks):
    """Largest absolute deviation of the spline over the fitted points."""
    worst = 0
    for j in range(len(rows)):
        e = eval_spline(knot_rows, knot_ranks, rows[j]) - int(ranks[j])
        if e < 0:
            e = -e
        if e > worst:
            worst = e
    return worst

"""Learned per-character rank functions.

A rank function maps a global row index to the number of occurrences of one
character in the L-array up to that row, within one region of the index.
Two representations exist: an error-bounded piecewise-linear spline (the
default; every fitted point is within ``epsilon`` of the curve) and a plain
least-squares line (smaller but unbounded, kept for comparison runs).

Functions are immutable after fitting and safe for concurrent evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import eval_spline, fit_corridor, max_fit_error

__all__ = ["RankFunction", "SplineFitError", "fit_spline", "fit_linear"]

SPLINE = "spline"
LINEAR = "linear"


class SplineFitError(RuntimeError):
    """A fitted spline violated its error bound (internal invariant)."""


@dataclass(frozen=True)
class RankFunction:
    """Compressed rank-versus-row curve for one character in one region.

    Spline kind: exact at every knot; between knots the value is the floor
    of the linear interpolation; below the support it is ``first_rank - 1``
    and above it ``last_rank``.  Linear kind: ``slope * row + intercept``
    rounded to nearest and clamped to ``[0, last_rank]``.
    """

    kind: str
    knot_rows: np.ndarray | None = None
    knot_ranks: np.ndarray | None = None
    slope: float = 0.0
    intercept: float = 0.0
    first_row: int = 0
    last_row: int = 0
    first_rank: int = 0
    last_rank: int = 0

    def evaluate(self, i: int) -> int:
        if self.kind == SPLINE:
            return int(eval_spline(self.knot_rows, self.knot_ranks, i))
        v = round(self.slope * i + self.intercept)
        if v < 0:
            return 0
        return min(int(v), self.last_rank)

    @property
    def segments(self) -> int:
        """Number of linear pieces."""
        if self.kind == SPLINE:
            return max(1, int(self.knot_rows.size) - 1)
        return 1

    def size_hint(self) -> int:
        """Rough serialized size in bytes (for space accounting)."""
        if self.kind == SPLINE:
            return 16 * int(self.knot_rows.size) + 16
        return 8 * 2 + 8 * 4 + 16


def _as_arrays(rows, ranks):
    r = np.ascontiguousarray(rows, dtype=np.int64)
    v = np.ascontiguousarray(ranks, dtype=np.int64)
    if r.size == 0:
        raise ValueError("cannot fit an empty bucket")
    if r.size != v.size:
        raise ValueError("rows and ranks differ in length")
    return r, v


def fit_spline(rows, ranks, epsilon: int) -> RankFunction:
    """Error-bounded greedy spline over one character bucket.

    ``rows`` strictly increasing, ``ranks`` non-decreasing, ``epsilon`` a
    non-negative integer.  Runs a verification pass after fitting: every
    input point must sit within ``epsilon`` of the curve.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    r, v = _as_arrays(rows, ranks)
    kr, kv = fit_corridor(r, v, int(epsilon))
    kr = np.ascontiguousarray(kr, dtype=np.int64)
    kv = np.ascontiguousarray(kv, dtype=np.int64)
    worst = max_fit_error(kr, kv, r, v)
    if worst > epsilon:
        raise SplineFitError(f"fit error {worst} exceeds bound {epsilon}")
    return RankFunction(
        kind=SPLINE,
        knot_rows=kr,
        knot_ranks=kv,
        first_row=int(r[0]),
        last_row=int(r[-1]),
        first_rank=int(v[0]),
        last_rank=int(v[-1]),
    )


def fit_linear(rows, ranks) -> RankFunction:
    """Least-squares line through one character bucket.

    A single point degenerates to a constant (slope 0).
    """
    r, v = _as_arrays(rows, ranks)
    if r.size == 1:
        slope, intercept = 0.0, float(v[0])
    else:
        x = r.astype(np.float64)
        y = v.astype(np.float64)
        xm = x.mean()
        ym = y.mean()
        den = float(((x - xm) ** 2).sum())
        if den == 0.0:
            slope, intercept = 0.0, ym
        else:
            slope = float(((x - xm) * (y - ym)).sum()) / den
            intercept = ym - slope * xm
    return RankFunction(
        kind=LINEAR,
        slope=slope,
        intercept=intercept,
        first_row=int(r[0]),
        last_row=int(r[-1]),
        first_rank=int(v[0]),
        last_rank=int(v[-1]),
    )

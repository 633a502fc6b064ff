"""Pruned suffix tree over the sorted rotations, plus the pushup pass.

The tree is built level by level from the sorted rotation matrix: at depth
``d`` the rows of a surviving node are grouped by their d-th rotation
character, and a group becomes a child only if it spans at least
``min_rows`` rows.  Each node carries its row interval, the number of
distinct source strings in it (an exact cardinality for the path string),
and, after pushup, per-character rank functions.

Pushup walks the tree bottom-up.  Rows not covered by a surviving child
(leaf rows, pruned branches, rotations shorter than the depth) contribute
their L-triples to the owning node's per-character buckets.  A bucket that
is "flagged" (holds full triple sets) and has at least ``min_fit`` entries
is fitted in place and only its first and last triples travel upward as
support knots; smaller flagged buckets move wholesale to the parent; pure
support-knot buckets keep drifting upward untouched.  The root fits every
bucket that reaches it, so every character has a whole-range fallback
function and a rank query can always be answered on the ancestor path.

Everything here is immutable once built; concurrent readers need no locks.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from .ebwt import EbwtOutput
from .splinefit import fit_linear, fit_spline

__all__ = [
    "BuildParams",
    "SuffixTreeNode",
    "build_tree",
    "assign_and_pushup",
    "locate_path",
    "descend_to_row",
]


@dataclass(frozen=True)
class BuildParams:
    """Construction knobs.

    height: maximum tree depth in edges.
    min_rows: smallest row interval that keeps a node alive.
    min_fit: smallest same-character bucket fitted below the root.
    epsilon: spline error bound (non-negative integer).
    fitting: "spline" (bounded) or "linear" (least squares, unbounded).
    """

    height: int = 3
    min_rows: int = 5000
    min_fit: int = 10
    epsilon: int = 32
    fitting: str = "spline"

    def __post_init__(self):
        if self.height < 1:
            raise ValueError("height must be >= 1")
        if self.min_rows < 1:
            raise ValueError("min_rows must be >= 1")
        if self.min_fit < 1:
            raise ValueError("min_fit must be >= 1")
        if self.epsilon < 0 or int(self.epsilon) != self.epsilon:
            raise ValueError("epsilon must be a non-negative integer")
        if self.fitting not in ("spline", "linear"):
            raise ValueError("fitting must be 'spline' or 'linear'")


class SuffixTreeNode:
    """Tree node over row interval [start, end] (1-based, inclusive)."""

    __slots__ = (
        "edge_char",
        "start",
        "end",
        "cnt",
        "depth",
        "parent",
        "children",
        "rank_fns",
        "_child_starts",
        "_child_list",
    )

    def __init__(self, edge_char, start, end, depth, parent=None, cnt=0):
        self.edge_char = edge_char
        self.start = start
        self.end = end
        self.cnt = cnt
        self.depth = depth
        self.parent = parent
        self.children = {}
        self.rank_fns = {}
        self._child_starts = []
        self._child_list = []

    @property
    def size(self) -> int:
        return self.end - self.start + 1

    def is_leaf(self) -> bool:
        return not self.children

    def child_for_row(self, row: int):
        """Child whose interval contains ``row``, or None (pruned region)."""
        j = bisect_right(self._child_starts, row) - 1
        if j >= 0:
            c = self._child_list[j]
            if c.end >= row:
                return c
        return None

    def walk(self):
        yield self
        for c in self._child_list:
            yield from c.walk()

    def __repr__(self):
        e = "root" if self.edge_char is None else repr(chr(self.edge_char))
        return f"<node {e} [{self.start},{self.end}] cnt={self.cnt} d={self.depth}>"


def _finalize(node: SuffixTreeNode):
    node._child_list = list(node.children.values())
    node._child_list.sort(key=lambda c: c.start)
    node._child_starts = [c.start for c in node._child_list]
    for c in node._child_list:
        _finalize(c)


def build_tree(out: EbwtOutput, params: BuildParams) -> SuffixTreeNode:
    """Level-by-level construction of the pruned suffix tree.

    ``cnt`` of every node is the exact number of distinct source strings in
    its interval (each string counted once no matter how often the path
    occurs in it).
    """
    n_rows = out.n_rows
    sid = out.sid
    off = out.off
    data = out.data
    lens = data._lens
    starts = data._starts
    flat = data._flat

    root = SuffixTreeNode(None, 1, n_rows, 0, None, cnt=data.n)
    frontier = [root]
    for depth in range(1, params.height + 1):
        next_frontier = []
        for node in frontier:
            lo = node.start - 1
            hi = node.end
            seg_sid = sid[lo:hi]
            seg_len = lens[seg_sid]
            # Rotations shorter than the current depth have no character
            # here; they stay with this node and break sibling runs.
            cols = np.full(hi - lo, -1, dtype=np.int64)
            qual = seg_len >= depth
            if qual.any():
                s = seg_sid[qual]
                cols[qual] = flat[
                    starts[s] + (off[lo:hi][qual] + depth - 1) % lens[s]
                ]
            if cols.size == 0:
                continue
            bounds = np.flatnonzero(np.diff(cols)) + 1
            run_starts = np.concatenate(([0], bounds))
            run_ends = np.concatenate((bounds, [cols.size]))
            for a, b in zip(run_starts, run_ends):
                ch = int(cols[a])
                if ch < 0 or (b - a) < params.min_rows:
                    continue
                if ch in node.children:
                    # Same edge character twice under one parent can only
                    # happen on sentinel-containing paths where a shorter
                    # rotation interrupts the run; keep the first run and
                    # leave the rest as resident rows.
                    continue
                child = SuffixTreeNode(
                    ch,
                    node.start + int(a),
                    node.start + int(b) - 1,
                    depth,
                    node,
                    cnt=int(np.unique(seg_sid[a:b]).size),
                )
                node.children[ch] = child
                next_frontier.append(child)
        frontier = next_frontier
    _finalize(root)
    return root


def locate_path(root: SuffixTreeNode, s):
    """Node reached by following ``s`` edge by edge from the root, or None.

    ``s`` may be a string or a sequence of code points; the empty path is
    the root.
    """
    node = root
    codes = [ord(c) for c in s] if isinstance(s, str) else s
    for code in codes:
        node = node.children.get(int(code))
        if node is None:
            return None
    return node


def descend_to_row(root: SuffixTreeNode, row: int, counter=None) -> SuffixTreeNode:
    """Deepest node whose interval contains ``row``."""
    node = root
    while True:
        if counter is not None:
            counter[0] += 1
        child = node.child_for_row(row)
        if child is None:
            return node
        node = child


# A bucket contribution: (rows, ranks, full) where ``full`` marks entries
# that still need a fitted function (resident triples and wholesale pushes)
# as opposed to boundary support knots from already-fitted descendants.
@dataclass
class _Contrib:
    rows: np.ndarray
    ranks: np.ndarray
    full: np.ndarray  # bool mask aligned with rows


def assign_and_pushup(root: SuffixTreeNode, out: EbwtOutput,
                      params: BuildParams, on_fit=None) -> None:
    """Populate ``rank_fns`` over the whole tree (mutates nodes).

    ``on_fit(node, char_code, rows, ranks, full_mask)`` is invoked for every
    fitted bucket when given; tests use it for conservation accounting.
    """
    if params.fitting == "spline":
        fit = lambda r, v: fit_spline(r, v, params.epsilon)
    else:
        fit = lambda r, v: fit_linear(r, v)
    _pushup_visit(root, out, params, fit, on_fit)


def _resident_contribs(acc, out, lo, hi):
    """Add the L-triples of rows [lo, hi] (1-based) as flagged content."""
    codes = out.l_codes[lo - 1 : hi]
    ranks = out.ranks[lo - 1 : hi]
    rows = np.arange(lo, hi + 1, dtype=np.int64)
    order = np.argsort(codes, kind="stable")
    sc = codes[order]
    bounds = np.flatnonzero(np.diff(sc)) + 1
    run_starts = np.concatenate(([0], bounds))
    run_ends = np.concatenate((bounds, [sc.size]))
    for a, b in zip(run_starts, run_ends):
        ch = int(sc[a])
        idx = order[a:b]
        idx.sort()
        acc.setdefault(ch, []).append(
            _Contrib(rows[idx], ranks[idx], np.ones(idx.size, dtype=bool))
        )


def _pushup_visit(node, out, params, fit, on_fit):
    """Post-order pushup; returns the contributions for the parent."""
    acc: dict[int, list[_Contrib]] = {}
    pos = node.start
    for child in node._child_list:
        if child.start > pos:
            _resident_contribs(acc, out, pos, child.start - 1)
        for ch, contribs in _pushup_visit(child, out, params, fit, on_fit).items():
            acc.setdefault(ch, []).extend(contribs)
        pos = child.end + 1
    if pos <= node.end:
        _resident_contribs(acc, out, pos, node.end)

    is_root = node.parent is None
    pushes: dict[int, list[_Contrib]] = {}
    for ch, contribs in acc.items():
        if len(contribs) == 1:
            rows = contribs[0].rows
            ranks = contribs[0].ranks
            full = contribs[0].full
        else:
            rows = np.concatenate([c.rows for c in contribs])
            ranks = np.concatenate([c.ranks for c in contribs])
            full = np.concatenate([c.full for c in contribs])
        flagged = bool(full.any())
        if is_root or (flagged and rows.size >= params.min_fit):
            node.rank_fns[ch] = fit(rows, ranks)
            if on_fit is not None:
                on_fit(node, ch, rows, ranks, full)
            if not is_root:
                sel = [0] if rows.size == 1 else [0, rows.size - 1]
                pushes[ch] = [
                    _Contrib(
                        rows[sel].copy(),
                        ranks[sel].copy(),
                        np.zeros(len(sel), dtype=bool),
                    )
                ]
        else:
            # Too small to fit here (or support knots only): move everything
            # to the parent, keeping the full/support distinction.
            pushes[ch] = [_Contrib(rows, ranks, full)]
    return pushes

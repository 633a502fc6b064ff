"""Cardinality estimation over a built index.

A query pattern is anchored at its longest suffix that still matches a tree
path (searched within the last ``height`` characters).  That suffix gives an
exact row interval; the remaining prefix characters are then folded in right
to left with FM-style backward steps, each using the learned rank functions.
If the whole pattern matches a path the stored distinct-string count is
returned as-is (exact).  Backward-search answers count occurrences, which
upper-bounds the distinct-string cardinality; the result is labeled so
callers can tell the two apart.

Estimation is read-only over an immutable index and safe to run from any
number of threads (leave ``count_visits`` off in that case).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ebwt import StringSet, build_ebwt
from .suffix_tree import (
    BuildParams,
    assign_and_pushup,
    build_tree,
    descend_to_row,
    locate_path,
)

__all__ = [
    "Estimate",
    "CardIndex",
    "build_index",
    "rank_lookup",
    "find_starting_char",
    "estimate",
]

STRING_LEVEL = "string-level"
OCCURRENCE_LEVEL = "occurrence-level"


@dataclass(frozen=True)
class Estimate:
    """Estimated cardinality plus how it was produced.

    ``exact`` is True only for answers served wholly from a tree node count,
    which are distinct-string cardinalities.  Backward-search answers are
    occurrence counts.
    """

    value: int
    exact: bool
    kind: str


class CardIndex:
    """Root structure: parameters, tree, and the character table."""

    def __init__(self, params, root, n, n_rows, alphabet_codes, occ_rows,
                 char_totals, source_path=None):
        self.params = params
        self.root = root
        self.n = n
        self.n_rows = n_rows
        self.alphabet_codes = np.ascontiguousarray(alphabet_codes, dtype=np.uint32)
        self.occ_rows = np.ascontiguousarray(occ_rows, dtype=np.int64)
        self.char_totals = np.ascontiguousarray(char_totals, dtype=np.int64)
        self.source_path = source_path
        self._occ = {
            int(c): int(r) for c, r in zip(self.alphabet_codes, self.occ_rows)
        }
        self.count_visits = False
        self.visits = 0

    def occ(self, code: int):
        """First F-array row of the character, or None if absent.

        Comes from the table built during the transform, so it works even
        when the character's root child was pruned away.
        """
        return self._occ.get(code)

    def estimate(self, pattern: str) -> Estimate:
        return estimate(self, pattern)

    def rank_fn_count(self) -> int:
        return sum(len(n.rank_fns) for n in self.root.walk())

    def __repr__(self):
        return (
            f"CardIndex(n={self.n}, rows={self.n_rows}, "
            f"|sigma|={len(self._occ) - 1}, fns={self.rank_fn_count()})"
        )


def build_index(data, params: BuildParams | None = None, *,
                sort_method: str = "radix", source_path=None,
                on_fit=None) -> CardIndex:
    """Build a complete index from strings or a StringSet."""
    if params is None:
        params = BuildParams()
    if not isinstance(data, StringSet):
        data = StringSet(data)
    out = build_ebwt(data, method=sort_method)
    root = build_tree(out, params)
    assign_and_pushup(root, out, params, on_fit=on_fit)
    return CardIndex(
        params=params,
        root=root,
        n=data.n,
        n_rows=out.n_rows,
        alphabet_codes=out.alphabet_codes,
        occ_rows=out.occ_rows,
        char_totals=out.char_totals,
        source_path=source_path,
    )


def rank_lookup(idx: CardIndex, c, i: int) -> int:
    """Learned rank of character ``c`` at row ``i``.

    Descends to the deepest node containing ``i``, then climbs until a node
    holds a function for ``c`` and evaluates it.  Returns 0 for ``i <= 0``
    or for characters absent from the data.
    """
    code = ord(c) if isinstance(c, str) else int(c)
    if i <= 0:
        return 0
    if i > idx.n_rows:
        i = idx.n_rows
    counter = None
    if idx.count_visits:
        counter = [0]
    node = descend_to_row(idx.root, i, counter)
    while node is not None and code not in node.rank_fns:
        node = node.parent
        if counter is not None:
            counter[0] += 1
    if counter is not None:
        idx.visits += counter[0]
    if node is None:
        return 0
    return node.rank_fns[code].evaluate(i)


def find_starting_char(idx: CardIndex, pattern: str):
    """Leftmost anchor position whose full suffix matches a tree path.

    Scans k over the last ``height`` positions of the pattern, smallest k
    first (longer suffixes first); matching positions are upward-closed in
    k because pruning thresholds are monotone under substring frequency.
    Returns ``(k, node)`` with k 1-based, or None when even the final
    character has no path.
    """
    codes = [ord(ch) for ch in pattern]
    size = len(codes)
    for k in range(max(1, size - idx.params.height + 1), size + 1):
        node = locate_path(idx.root, codes[k - 1 :])
        if node is not None:
            return k, node
    return None


def estimate(idx: CardIndex, pattern: str) -> Estimate:
    """Estimated number of data strings containing ``pattern``.

    Full tree matches return the exact stored count.  Otherwise backward
    search runs from the anchored suffix interval; when no suffix matches a
    path but every pattern character exists in the data, the search starts
    from the full row range.  A character missing from the data short
    circuits to 0, as does any empty backward interval.
    """
    if not pattern:
        raise ValueError("pattern must be non-empty")
    codes = [ord(ch) for ch in pattern]
    if any(c == 0 for c in codes):
        raise ValueError("pattern must not contain the sentinel U+0000")
    occ = idx._occ
    if any(c not in occ for c in codes):
        return Estimate(0, False, OCCURRENCE_LEVEL)

    found = find_starting_char(idx, pattern)
    if found is not None:
        k, node = found
        if k == 1:
            return Estimate(node.cnt, True, STRING_LEVEL)
        start, end = node.start, node.end
        j = k - 1
    else:
        # Every character exists but no suffix survives in the pruned tree;
        # run the whole pattern through backward search.
        start, end = 1, idx.n_rows
        j = len(codes)

    while j >= 1:
        c = codes[j - 1]
        base = occ[c]
        s2 = base + rank_lookup(idx, c, start - 1)
        e2 = base + rank_lookup(idx, c, end) - 1
        if s2 > e2:
            return Estimate(0, False, OCCURRENCE_LEVEL)
        start, end = s2, e2
        j -= 1
    return Estimate(max(0, end - start + 1), False, OCCURRENCE_LEVEL)

"""Extended Burrows-Wheeler transform over a set of strings.

Every string gets a terminating sentinel (code point 0, smaller than any
real character), all cyclic shifts of all strings are sorted together, and
the first/last columns of the sorted rotation matrix become the F- and
L-arrays.  Plain lexicographic order is not enough when one rotation is a
prefix of another (different string lengths), so ordering is defined on the
infinite periodic extension of each rotation: compare characters of
``rotation`` repeated forever until the first mismatch.  For two rotations
that are not cyclically identical the first mismatch provably occurs within
``len(a) + len(b)`` characters, and the resulting order keeps the classic
L-to-F occurrence correspondence intact across strings of varying length.

Rotations are never materialized; every shift is a (string id, offset) pair
and characters are read through modular indexing, keeping construction at
O(total characters) space.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key

import numpy as np

SENTINEL = 0
_NEWLINE = 10

__all__ = [
    "SENTINEL",
    "StringSet",
    "CyclicShift",
    "LTriple",
    "EbwtOutput",
    "compare_shifts",
    "build_ebwt",
    "exact_rank",
]


class StringSet:
    """An ordered, validated collection of data strings.

    Rejects empty collections, empty strings, and strings containing the
    reserved sentinel (U+0000) or a newline.
    """

    __slots__ = ("strings", "n", "m", "sigma", "_flat", "_starts", "_lens")

    def __init__(self, strings):
        strings = list(strings)
        if not strings:
            raise ValueError("string set must contain at least one string")
        codes = []
        for k, s in enumerate(strings):
            if not isinstance(s, str):
                raise ValueError(f"string #{k} is not text")
            if not s:
                raise ValueError(f"string #{k} is empty")
            arr = np.frombuffer(s.encode("utf-32-le"), dtype=np.uint32)
            if (arr == SENTINEL).any():
                raise ValueError(f"string #{k} contains the reserved sentinel U+0000")
            if (arr == _NEWLINE).any():
                raise ValueError(f"string #{k} contains a newline")
            codes.append(arr)
        self.strings = strings
        self.n = len(strings)
        self.m = max(len(s) for s in strings)
        # lengths below include the sentinel appended to each string
        lens = np.array([a.size + 1 for a in codes], dtype=np.int64)
        starts = np.zeros(self.n, dtype=np.int64)
        np.cumsum(lens[:-1], out=starts[1:])
        flat = np.zeros(int(lens.sum()), dtype=np.uint32)
        for k, a in enumerate(codes):
            flat[starts[k] : starts[k] + a.size] = a
        self._flat = flat
        self._starts = starts
        self._lens = lens
        sigma = np.unique(flat)
        self.sigma = {int(c) for c in sigma if c != SENTINEL}

    @classmethod
    def from_file(cls, path):
        """Load one string per line from a UTF-8 text file."""
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
        if text.endswith("\n"):
            text = text[:-1]
        return cls(text.split("\n"))

    def term_length(self, string_id):
        """Length of the sentinel-terminated string."""
        return int(self._lens[string_id])

    def code_at(self, string_id, pos):
        """Code point at 0-based ``pos`` of the sentinel-terminated string."""
        return int(self._flat[self._starts[string_id] + pos])

    @property
    def total_rows(self):
        return int(self._lens.sum())

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"StringSet(n={self.n}, m={self.m}, |sigma|={len(self.sigma)})"


@dataclass(frozen=True)
class CyclicShift:
    """One rotation of a sentinel-terminated string, held implicitly.

    ``offset`` is 1-based: offset 1 is the unrotated string.
    """

    string_id: int
    offset: int
    length: int

    def text(self, data: StringSet) -> str:
        """Materialize the rotation (small inputs / debugging only)."""
        chars = [
            chr(data.code_at(self.string_id, (self.offset - 1 + k) % self.length))
            for k in range(self.length)
        ]
        return "".join(chars)


@dataclass(frozen=True)
class LTriple:
    """One L-array entry: character code, 1-based row, per-character rank."""

    ch: int
    row: int
    rank: int

    @property
    def char(self) -> str:
        return chr(self.ch)


def compare_shifts(a: CyclicShift, b: CyclicShift, data: StringSet) -> int:
    """Order two cyclic shifts; negative means ``a`` sorts first.

    Compares the infinite periodic extensions character by character.  This
    matches plain lexicographic order whenever neither rotation is a prefix
    of the other, and otherwise equals the order obtained by rotating both
    strings in lockstep until the prefix relation breaks.  Returns 0 only
    for identical rotation texts (duplicate strings).
    """
    la = a.length
    lb = b.length
    fa = int(data._starts[a.string_id])
    fb = int(data._starts[b.string_id])
    flat = data._flat
    pa = a.offset - 1
    pb = b.offset - 1
    for k in range(la + lb):
        ca = int(flat[fa + (pa + k) % la])
        cb = int(flat[fb + (pb + k) % lb])
        if ca != cb:
            return -1 if ca < cb else 1
    return 0


class EbwtOutput:
    """Sorted rotation matrix of a string set, held as column arrays.

    Row indexes are 1-based throughout.  ``sid``/``off`` give the source
    string and 0-based rotation offset of each sorted row; ``f_codes`` /
    ``l_codes`` are the first and last rotation characters; ``ranks[i]`` is
    the running per-character occurrence count of ``l_codes[i]``.
    """

    __slots__ = (
        "data",
        "sid",
        "off",
        "f_codes",
        "l_codes",
        "ranks",
        "alphabet_codes",
        "occ_rows",
        "char_totals",
        "_rows_by_char",
    )

    def __init__(self, data, sid, off, f_codes, l_codes, ranks,
                 alphabet_codes, occ_rows, char_totals):
        self.data = data
        self.sid = sid
        self.off = off
        self.f_codes = f_codes
        self.l_codes = l_codes
        self.ranks = ranks
        self.alphabet_codes = alphabet_codes
        self.occ_rows = occ_rows
        self.char_totals = char_totals
        self._rows_by_char = None

    @property
    def n_rows(self) -> int:
        return int(self.sid.size)

    def shift_at(self, row: int) -> CyclicShift:
        j = row - 1
        s = int(self.sid[j])
        return CyclicShift(s, int(self.off[j]) + 1, self.data.term_length(s))

    def l_triple_at(self, row: int) -> LTriple:
        j = row - 1
        return LTriple(int(self.l_codes[j]), row, int(self.ranks[j]))

    @property
    def sorted_shifts(self):
        return [self.shift_at(i) for i in range(1, self.n_rows + 1)]

    @property
    def l_triples(self):
        return [self.l_triple_at(i) for i in range(1, self.n_rows + 1)]

    @property
    def row_string_ids(self):
        return [int(s) for s in self.sid]

    @property
    def f_char(self):
        return [chr(int(c)) for c in self.f_codes]

    @property
    def l_char(self):
        return [chr(int(c)) for c in self.l_codes]

    def occ(self, c) -> int | None:
        """First F-array row of character ``c`` (None if absent)."""
        code = _as_code(c)
        j = np.searchsorted(self.alphabet_codes, code)
        if j < self.alphabet_codes.size and self.alphabet_codes[j] == code:
            return int(self.occ_rows[j])
        return None

    def _char_rows(self, code):
        if self._rows_by_char is None:
            order = np.argsort(self.l_codes, kind="stable")
            sorted_codes = self.l_codes[order]
            rows = order.astype(np.int64) + 1
            bounds = np.flatnonzero(np.diff(sorted_codes)) + 1
            pieces = np.split(rows, bounds)
            keys = [int(sorted_codes[0])] if sorted_codes.size else []
            keys += [int(sorted_codes[b]) for b in bounds]
            self._rows_by_char = dict(zip(keys, pieces))
        return self._rows_by_char.get(code)


def _as_code(c) -> int:
    if isinstance(c, str):
        if len(c) != 1:
            raise ValueError("character argument must be a single code point")
        return ord(c)
    return int(c)


def exact_rank(out: EbwtOutput, c, i: int) -> int:
    """Exact count of rows <= ``i`` whose L-array character is ``c``.

    The ground-truth rank oracle the learned functions are checked against.
    ``i`` may be 0 (empty prefix).
    """
    if not 0 <= i <= out.n_rows:
        raise ValueError(f"row index {i} outside [0, {out.n_rows}]")
    rows = out._char_rows(_as_code(c))
    if rows is None:
        return 0
    return int(np.searchsorted(rows, i, side="right"))


def _sorted_rotation_order(data: StringSet) -> np.ndarray:
    """Rotation ids (generation order) sorted by the extended comparator.

    MSD radix passes over the wrapped rotation characters: at round ``d``
    every still-ambiguous group is stably reordered by its d-th character.
    Stability makes duplicate rotations come out in (string id, offset)
    generation order, the documented tie-break.
    """
    lens = data._lens
    starts = data._starts
    flat = data._flat
    n_rows = data.total_rows
    sid = np.repeat(np.arange(data.n, dtype=np.int64), lens)
    base = np.repeat(starts, lens)
    off = np.arange(n_rows, dtype=np.int64) - base
    row_len = lens[sid]

    perm = np.arange(n_rows, dtype=np.int64)
    group = np.zeros(n_rows, dtype=np.int64)
    active = np.arange(n_rows, dtype=np.int64)  # positions of unresolved rows
    max_depth = 2 * int(lens.max())
    for d in range(max_depth):
        if active.size == 0:
            break
        rows = perm[active]
        col = flat[base[rows] + (off[rows] + d) % row_len[rows]]
        g = group[active]
        order = np.lexsort((col, g))
        rows = rows[order]
        perm[active] = rows
        gs = g[order]
        cs = col[order]
        boundary = np.empty(order.size, dtype=bool)
        boundary[0] = True
        boundary[1:] = (gs[1:] != gs[:-1]) | (cs[1:] != cs[:-1])
        new_g = np.cumsum(boundary) - 1
        group[active] = new_g
        counts = np.bincount(new_g)
        active = active[counts[new_g] > 1]
    return perm


def build_ebwt(data: StringSet, method: str = "radix") -> EbwtOutput:
    """Construct the extended BWT of ``data``.

    ``method`` selects the sort: "radix" (vectorized character passes, the
    production path) or "comparator" (comparison sort driven directly by
    ``compare_shifts``; quadratic-ish, used to cross-check the radix path).
    Both honor the same ordering.
    """
    if not isinstance(data, StringSet):
        data = StringSet(data)
    lens = data._lens
    starts = data._starts
    flat = data._flat

    if method == "radix":
        perm = _sorted_rotation_order(data)
        sid_all = np.repeat(np.arange(data.n, dtype=np.int64), lens)
        off_all = np.arange(perm.size, dtype=np.int64) - np.repeat(starts, lens)
        sid = sid_all[perm]
        off = off_all[perm]
    elif method == "comparator":
        shifts = [
            CyclicShift(s, p + 1, int(lens[s]))
            for s in range(data.n)
            for p in range(int(lens[s]))
        ]
        shifts.sort(key=cmp_to_key(lambda a, b: compare_shifts(a, b, data)))
        sid = np.array([s.string_id for s in shifts], dtype=np.int64)
        off = np.array([s.offset - 1 for s in shifts], dtype=np.int64)
    else:
        raise ValueError(f"unknown sort method {method!r}")

    row_len = lens[sid]
    f_codes = flat[starts[sid] + off]
    l_codes = flat[starts[sid] + (off + row_len - 1) % row_len]

    # Per-character running occurrence counts over the L-array.
    order = np.argsort(l_codes, kind="stable")
    sorted_codes = l_codes[order]
    group_start = np.zeros(order.size, dtype=np.int64)
    changes = np.flatnonzero(np.diff(sorted_codes)) + 1
    group_start[changes] = changes
    np.maximum.accumulate(group_start, out=group_start)
    ranks = np.empty(order.size, dtype=np.int64)
    ranks[order] = np.arange(order.size, dtype=np.int64) - group_start + 1

    alphabet_codes, first_idx, char_totals = np.unique(
        f_codes, return_index=True, return_counts=True
    )
    occ_rows = first_idx.astype(np.int64) + 1

    return EbwtOutput(
        data=data,
        sid=sid,
        off=off,
        f_codes=f_codes,
        l_codes=l_codes,
        ranks=ranks,
        alphabet_codes=alphabet_codes,
        occ_rows=occ_rows,
        char_totals=char_totals.astype(np.int64),
    )

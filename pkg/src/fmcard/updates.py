"""Incremental inserts and deletes via bounded side buffers.

New and removed strings are cached in small in-memory suffix tries (depth
capped at the index height, distinct-string counts per node) next to the raw
strings themselves.  Query answers combine the immutable index parts with
the buffer deltas: add the insert buffer's count, subtract the delete
buffer's.  When the insert buffer outgrows its node budget the set
consolidates, either by rebuilding one index over the net data ("single")
or by sealing the buffer into an additional index part ("multiple", cheaper
per update, slightly costlier per query).

Single writer, many readers: estimates may run concurrently with each
other, but insert/delete/consolidate need exclusive access.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .ebwt import StringSet
from .estimator import (
    OCCURRENCE_LEVEL,
    STRING_LEVEL,
    CardIndex,
    Estimate,
    build_index,
)
from .suffix_tree import BuildParams

__all__ = ["UpdateError", "DeltaBuffer", "IndexPart", "IndexSet", "DEFAULT_BUDGET"]

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 250_000

SINGLE = "single"
MULTIPLE = "multiple"


class UpdateError(RuntimeError):
    """Consolidation could not proceed (typically a missing raw dataset)."""


class _TrieNode:
    __slots__ = ("children", "cnt", "stamp")

    def __init__(self):
        self.children = {}
        self.cnt = 0
        self.stamp = -1


class DeltaBuffer:
    """Suffix trie over buffered strings, depth-capped at ``height``.

    Node counts are distinct-string cardinalities: one string bumps a node
    at most once however many of its suffixes pass through.
    """

    def __init__(self, height: int):
        self.height = height
        self.root = _TrieNode()
        self.raw: list[str] = []
        self.node_count = 0

    def add(self, s: str) -> None:
        _validate_string(s)
        stamp = len(self.raw)
        self.raw.append(s)
        h = self.height
        for start in range(len(s)):
            node = self.root
            for ch in s[start : start + h]:
                nxt = node.children.get(ch)
                if nxt is None:
                    nxt = _TrieNode()
                    node.children[ch] = nxt
                    self.node_count += 1
                node = nxt
                if node.stamp != stamp:
                    node.stamp = stamp
                    node.cnt += 1

    def delta(self, pattern: str) -> int:
        """Distinct buffered strings containing ``pattern`` (exact).

        Short patterns come from the trie; longer ones scan the raw strings,
        which stay cheap because the buffer is memory-bounded.
        """
        if len(pattern) <= self.height:
            node = self.root
            for ch in pattern:
                node = node.children.get(ch)
                if node is None:
                    return 0
            return node.cnt
        return sum(1 for s in self.raw if pattern in s)

    def clear(self) -> None:
        self.root = _TrieNode()
        self.raw = []
        self.node_count = 0

    def __len__(self):
        return len(self.raw)


def _validate_string(s: str) -> None:
    if not s:
        raise ValueError("cannot buffer an empty string")
    if "\x00" in s:
        raise ValueError("string contains the reserved sentinel U+0000")
    if "\n" in s:
        raise ValueError("string contains a newline")


@dataclass
class IndexPart:
    """One immutable index plus a handle on the raw data it was built from.

    ``source`` is either the in-memory string list or a path to the dataset
    file; consolidation needs one of the two.
    """

    index: CardIndex
    source: list[str] | str | None = None

    def load_source(self) -> list[str]:
        if isinstance(self.source, list):
            return list(self.source)
        if isinstance(self.source, str):
            return StringSet.from_file(self.source).strings
        raise UpdateError(
            "index part has no raw dataset reference; rebuild requires the "
            "original strings"
        )


@dataclass
class ConsolidationReport:
    rebuilt: bool
    new_parts: int
    unmatched_deletes: list[str] = field(default_factory=list)


class IndexSet:
    """One or more index parts plus insert/delete buffers."""

    def __init__(self, params: BuildParams | None = None, *,
                 strategy: str = SINGLE, budget: int = DEFAULT_BUDGET,
                 parts: list[IndexPart] | None = None):
        if strategy not in (SINGLE, MULTIPLE):
            raise ValueError("strategy must be 'single' or 'multiple'")
        self.params = params or BuildParams()
        self.strategy = strategy
        self.budget = budget
        self.parts = parts or []
        self.insert_buffer = DeltaBuffer(self.params.height)
        self.delete_buffer = DeltaBuffer(self.params.height)

    def insert(self, s: str) -> None:
        self.insert_buffer.add(s)
        if self.insert_buffer.node_count > self.budget:
            self.consolidate()

    def delete(self, s: str) -> None:
        """Buffer a deletion.  Unknown strings are accepted here and only
        reported when a consolidation fails to match them."""
        self.delete_buffer.add(s)
        if self.delete_buffer.node_count > self.budget:
            # Deletions cannot be sealed into their own part; fold them in.
            self.consolidate(full=True)

    def estimate(self, pattern: str) -> Estimate:
        """Combined estimate: part answers plus buffer deltas, floored at 0."""
        if not self.insert_buffer.raw and not self.delete_buffer.raw and \
                len(self.parts) == 1:
            return self.parts[0].index.estimate(pattern)
        total = 0
        all_string_level = True
        for part in self.parts:
            e = part.index.estimate(pattern)
            total += e.value
            if e.kind != STRING_LEVEL:
                all_string_level = False
        total += self.insert_buffer.delta(pattern)
        total -= self.delete_buffer.delta(pattern)
        kind = STRING_LEVEL if (all_string_level and self.parts) else OCCURRENCE_LEVEL
        return Estimate(max(0, total), False, kind)

    def consolidate(self, full: bool | None = None) -> ConsolidationReport:
        """Fold the buffers into the parts.

        Single strategy (or ``full=True``): rebuild one index over the net
        dataset, preserving original string order, deletions removing their
        most recent match.  Multiple strategy: seal the insert buffer into a
        new part and keep deletions buffered.
        """
        if full is None:
            full = self.strategy == SINGLE
        if full:
            net: list[str] = []
            for part in self.parts:
                net.extend(part.load_source())
            net.extend(self.insert_buffer.raw)
            unmatched = _remove_last_occurrences(net, self.delete_buffer.raw)
            for s in unmatched:
                log.warning("delete had no matching string: %r", s)
            if not net:
                raise UpdateError("consolidation would leave an empty data set")
            idx = build_index(net, self.params)
            self.parts = [IndexPart(idx, net)]
            self.insert_buffer.clear()
            self.delete_buffer.clear()
            return ConsolidationReport(True, 1, unmatched)
        if not self.insert_buffer.raw:
            return ConsolidationReport(False, 0)
        chunk = list(self.insert_buffer.raw)
        idx = build_index(chunk, self.params)
        self.parts.append(IndexPart(idx, chunk))
        self.insert_buffer.clear()
        return ConsolidationReport(False, 1)


def _remove_last_occurrences(items: list[str], to_remove) -> list[str]:
    """Drop the last occurrence of each entry in-place; return the misses."""
    unmatched = []
    for s in to_remove:
        for j in range(len(items) - 1, -1, -1):
            if items[j] == s:
                del items[j]
                break
        else:
            unmatched.append(s)
    return unmatched

"""Binary index persistence.

Little-endian layout: magic "SSC1", format version, fitting kind, the four
build parameters, string/row counts, the source dataset path, the character
table (code, first F-row, total count per character), then the tree as
pre-order node records (edge char, interval, count, rank functions as knot
lists, children), and a trailing 8-byte BLAKE2b checksum over everything
before it.  Counts, rows, and ranks are 64-bit unsigned; code points are
32-bit unsigned.  Loading validates magic, version, and checksum.
"""

from __future__ import annotations

import hashlib
import io
import struct

import numpy as np

from .estimator import CardIndex
from .splinefit import LINEAR, SPLINE, RankFunction
from .suffix_tree import BuildParams, SuffixTreeNode, _finalize

__all__ = ["save_index", "load_index", "index_to_bytes", "index_from_bytes", "FormatError"]

MAGIC = b"SSC1"
VERSION = 1
_ROOT_EDGE = 0xFFFFFFFF
_DIGEST_SIZE = 8


class FormatError(ValueError):
    """The file is not a valid index of this format/version."""


def _digest(payload: bytes) -> bytes:
    return hashlib.blake2b(payload, digest_size=_DIGEST_SIZE).digest()


class _Writer:
    def __init__(self):
        self.buf = io.BytesIO()

    def u8(self, v):
        self.buf.write(struct.pack("<B", v))

    def u16(self, v):
        self.buf.write(struct.pack("<H", v))

    def u32(self, v):
        self.buf.write(struct.pack("<I", v))

    def u64(self, v):
        self.buf.write(struct.pack("<Q", v))

    def f64(self, v):
        self.buf.write(struct.pack("<d", v))

    def text(self, s):
        raw = (s or "").encode("utf-8")
        self.u32(len(raw))
        self.buf.write(raw)

    def u64_array(self, arr):
        a = np.ascontiguousarray(arr, dtype=np.int64)
        self.u64(a.size)
        self.buf.write(a.astype("<u8").tobytes())


class _Reader:
    def __init__(self, payload: bytes):
        self.buf = io.BytesIO(payload)

    def _take(self, n):
        raw = self.buf.read(n)
        if len(raw) != n:
            raise FormatError("truncated index file")
        return raw

    def u8(self):
        return struct.unpack("<B", self._take(1))[0]

    def u16(self):
        return struct.unpack("<H", self._take(2))[0]

    def u32(self):
        return struct.unpack("<I", self._take(4))[0]

    def u64(self):
        return struct.unpack("<Q", self._take(8))[0]

    def f64(self):
        return struct.unpack("<d", self._take(8))[0]

    def text(self):
        n = self.u32()
        return self._take(n).decode("utf-8")

    def u64_array(self):
        n = self.u64()
        raw = self._take(8 * n)
        return np.frombuffer(raw, dtype="<u8").astype(np.int64)


def _write_fn(w: _Writer, code: int, fn: RankFunction):
    w.u32(code)
    if fn.kind == SPLINE:
        w.u8(0)
        w.u64_array(fn.knot_rows)
        w.u64_array(fn.knot_ranks)
    else:
        w.u8(1)
        w.f64(fn.slope)
        w.f64(fn.intercept)
        w.u64(fn.first_row)
        w.u64(fn.last_row)
        w.u64(fn.first_rank)
        w.u64(fn.last_rank)


def _read_fn(r: _Reader):
    code = r.u32()
    kind = r.u8()
    if kind == 0:
        rows = r.u64_array()
        ranks = r.u64_array()
        fn = RankFunction(
            kind=SPLINE,
            knot_rows=rows,
            knot_ranks=ranks,
            first_row=int(rows[0]),
            last_row=int(rows[-1]),
            first_rank=int(ranks[0]),
            last_rank=int(ranks[-1]),
        )
    elif kind == 1:
        fn = RankFunction(
            kind=LINEAR,
            slope=r.f64(),
            intercept=r.f64(),
            first_row=r.u64(),
            last_row=r.u64(),
            first_rank=r.u64(),
            last_rank=r.u64(),
        )
    else:
        raise FormatError(f"unknown rank function kind {kind}")
    return code, fn


def _write_node(w: _Writer, node: SuffixTreeNode):
    w.u32(_ROOT_EDGE if node.edge_char is None else node.edge_char)
    w.u64(node.start)
    w.u64(node.end)
    w.u64(node.cnt)
    w.u32(len(node.rank_fns))
    for code in sorted(node.rank_fns):
        _write_fn(w, code, node.rank_fns[code])
    w.u32(len(node._child_list))
    for child in node._child_list:
        _write_node(w, child)


def _read_node(r: _Reader, depth: int, parent):
    edge = r.u32()
    node = SuffixTreeNode(
        None if edge == _ROOT_EDGE else edge,
        r.u64(),
        r.u64(),
        depth,
        parent,
        cnt=r.u64(),
    )
    for _ in range(r.u32()):
        code, fn = _read_fn(r)
        node.rank_fns[code] = fn
    for _ in range(r.u32()):
        child = _read_node(r, depth + 1, node)
        node.children[child.edge_char] = child
    return node


def index_to_bytes(idx: CardIndex) -> bytes:
    w = _Writer()
    w.buf.write(MAGIC)
    w.u16(VERSION)
    p = idx.params
    w.u8(0 if p.fitting == "spline" else 1)
    w.u64(p.height)
    w.u64(p.min_rows)
    w.u64(p.min_fit)
    w.u64(p.epsilon)
    w.u64(idx.n)
    w.u64(idx.n_rows)
    w.text(idx.source_path)
    w.u32(idx.alphabet_codes.size)
    for code, occ, total in zip(idx.alphabet_codes, idx.occ_rows, idx.char_totals):
        w.u32(int(code))
        w.u64(int(occ))
        w.u64(int(total))
    _write_node(w, idx.root)
    payload = w.buf.getvalue()
    return payload + _digest(payload)


def index_from_bytes(blob: bytes) -> CardIndex:
    if len(blob) < len(MAGIC) + 2 + _DIGEST_SIZE:
        raise FormatError("file too short to be an index")
    payload, digest = blob[:-_DIGEST_SIZE], blob[-_DIGEST_SIZE:]
    if payload[: len(MAGIC)] != MAGIC:
        raise FormatError("bad magic; not an index file")
    if _digest(payload) != digest:
        raise FormatError("checksum mismatch; file corrupted")
    r = _Reader(payload[len(MAGIC) :])
    version = r.u16()
    if version != VERSION:
        raise FormatError(f"unsupported format version {version}")
    fitting = "spline" if r.u8() == 0 else "linear"
    params = BuildParams(
        height=r.u64(),
        min_rows=r.u64(),
        min_fit=r.u64(),
        epsilon=r.u64(),
        fitting=fitting,
    )
    n = r.u64()
    n_rows = r.u64()
    source_path = r.text() or None
    count = r.u32()
    codes = np.empty(count, dtype=np.uint32)
    occ = np.empty(count, dtype=np.int64)
    totals = np.empty(count, dtype=np.int64)
    for j in range(count):
        codes[j] = r.u32()
        occ[j] = r.u64()
        totals[j] = r.u64()
    root = _read_node(r, 0, None)
    _finalize(root)
    return CardIndex(
        params=params,
        root=root,
        n=n,
        n_rows=n_rows,
        alphabet_codes=codes,
        occ_rows=occ,
        char_totals=totals,
        source_path=source_path,
    )


def save_index(idx: CardIndex, path) -> int:
    """Write the index; returns the byte size on disk."""
    blob = index_to_bytes(idx)
    with open(path, "wb") as f:
        f.write(blob)
    return len(blob)


def load_index(path) -> CardIndex:
    with open(path, "rb") as f:
        blob = f.read()
    return index_from_bytes(blob)

"""Evaluation surface: ground truth, q-error, workloads, and reports.

The ground-truth oracle is a brute-force scan so it stays independent of
every indexed code path.  Workload generation samples substrings of
whitespace-delimited words from the data set, deterministic under a seed.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .ebwt import StringSet

__all__ = [
    "ground_truth",
    "occurrence_truth",
    "qerror",
    "Workload",
    "gen_workload",
    "load_workload",
    "save_workload",
    "EvalReport",
    "run_eval",
]


def ground_truth(data, pattern: str) -> int:
    """Number of data strings containing ``pattern`` (each counted once)."""
    strings = data.strings if isinstance(data, StringSet) else data
    return sum(1 for s in strings if pattern in s)


def occurrence_truth(data, pattern: str) -> int:
    """Total overlapping occurrences of ``pattern`` across all strings."""
    strings = data.strings if isinstance(data, StringSet) else data
    total = 0
    for s in strings:
        at = s.find(pattern)
        while at != -1:
            total += 1
            at = s.find(pattern, at + 1)
    return total


def qerror(y: float, y_hat: float) -> float:
    """max(y/y_hat, y_hat/y) with both operands floored at 1."""
    a = max(float(y), 1.0)
    b = max(float(y_hat), 1.0)
    return a / b if a > b else b / a


@dataclass
class Workload:
    """Patterns with optional true cardinalities."""

    patterns: list[tuple[str, int | None]]
    provenance: str = "generated"

    def __post_init__(self):
        if not self.patterns:
            raise ValueError("workload must contain at least one pattern")

    def __len__(self):
        return len(self.patterns)


def gen_workload(data, count: int, len_range=(1, 8), seed: int = 0) -> Workload:
    """Sample substrings of words from the data set.

    Deterministic under ``seed``; patterns are deduplicated and labeled with
    their brute-force ground truth.
    """
    if not isinstance(data, StringSet):
        data = StringSet(data)
    lo, hi = len_range
    if lo < 1 or hi < lo:
        raise ValueError("invalid pattern length range")
    words = []
    for s in data.strings:
        words.extend(w for w in s.split() if w)
    if not words:
        raise ValueError("data set has no words to sample from")
    rng = random.Random(seed)
    seen: dict[str, None] = {}
    attempts = 0
    cap = max(count * 200, 1000)
    while len(seen) < count and attempts < cap:
        attempts += 1
        w = words[rng.randrange(len(words))]
        if len(w) < lo:
            continue
        size = rng.randint(lo, min(hi, len(w)))
        at = rng.randint(0, len(w) - size)
        seen.setdefault(w[at : at + size], None)
    patterns = [(p, ground_truth(data, p)) for p in seen]
    return Workload(patterns, provenance="generated")


def save_workload(workload: Workload, path) -> None:
    """Tab-separated pattern and optional truth, one per line, UTF-8."""
    with open(path, "w", encoding="utf-8") as f:
        for pattern, truth in workload.patterns:
            if truth is None:
                f.write(f"{pattern}\n")
            else:
                f.write(f"{pattern}\t{truth}\n")


def load_workload(path) -> Workload:
    patterns = []
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            if "\t" in line:
                pattern, _, rest = line.partition("\t")
                try:
                    truth = int(rest)
                except ValueError:
                    raise ValueError(
                        f"{path}:{lineno}: cardinality {rest!r} is not an integer"
                    ) from None
                patterns.append((pattern, truth))
            else:
                patterns.append((line, None))
    return Workload(patterns, provenance="loaded")


def _nearest_rank(sorted_vals, pct: float):
    if not sorted_vals:
        return 0.0
    k = max(1, -(-len(sorted_vals) * pct // 100))  # ceil
    return sorted_vals[int(k) - 1]


@dataclass
class EvalReport:
    """Q-error distribution, latency, and size statistics for one workload."""

    n_patterns: int
    qerrors: list[float] = field(repr=False)
    q_avg: float = 0.0
    q_p50: float = 0.0
    q_p90: float = 0.0
    q_p99: float = 0.0
    q_max: float = 0.0
    latency_avg_ms: float = 0.0
    latency_p50_ms: float = 0.0
    latency_p99_ms: float = 0.0
    index_size_bytes: int | None = None
    build_time_s: float | None = None

    def to_text(self) -> str:
        lines = [
            f"patterns          {self.n_patterns}",
            f"q-error avg       {self.q_avg:.3f}",
            f"q-error p50       {self.q_p50:.3f}",
            f"q-error p90       {self.q_p90:.3f}",
            f"q-error p99       {self.q_p99:.3f}",
            f"q-error max       {self.q_max:.3f}",
            f"latency avg (ms)  {self.latency_avg_ms:.4f}",
            f"latency p50 (ms)  {self.latency_p50_ms:.4f}",
            f"latency p99 (ms)  {self.latency_p99_ms:.4f}",
        ]
        if self.index_size_bytes is not None:
            lines.append(f"index size (B)    {self.index_size_bytes}")
        if self.build_time_s is not None:
            lines.append(f"build time (s)    {self.build_time_s:.3f}")
        return "\n".join(lines)

    def csv_header(self) -> str:
        return "metric,value"

    def csv_rows(self):
        rows = [
            ("patterns", self.n_patterns),
            ("q_avg", f"{self.q_avg:.6f}"),
            ("q_p50", f"{self.q_p50:.6f}"),
            ("q_p90", f"{self.q_p90:.6f}"),
            ("q_p99", f"{self.q_p99:.6f}"),
            ("q_max", f"{self.q_max:.6f}"),
            ("latency_avg_ms", f"{self.latency_avg_ms:.6f}"),
            ("latency_p50_ms", f"{self.latency_p50_ms:.6f}"),
            ("latency_p99_ms", f"{self.latency_p99_ms:.6f}"),
        ]
        if self.index_size_bytes is not None:
            rows.append(("index_size_bytes", self.index_size_bytes))
        if self.build_time_s is not None:
            rows.append(("build_time_s", f"{self.build_time_s:.6f}"))
        return rows


def run_eval(target, workload: Workload, *, index_size_bytes=None,
             build_time_s=None) -> EvalReport:
    """Estimate every workload pattern and aggregate q-errors and latency.

    ``target`` is anything with an ``estimate(pattern) -> Estimate`` method.
    Every pattern must carry a true cardinality.
    """
    qerrors = []
    latencies = []
    for pattern, truth in workload.patterns:
        if truth is None:
            raise ValueError(f"pattern {pattern!r} has no true cardinality")
        t0 = time.perf_counter()
        est = target.estimate(pattern)
        latencies.append((time.perf_counter() - t0) * 1000.0)
        qerrors.append(qerror(truth, est.value))
    qs = sorted(qerrors)
    ls = sorted(latencies)
    return EvalReport(
        n_patterns=len(qerrors),
        qerrors=qerrors,
        q_avg=sum(qs) / len(qs),
        q_p50=_nearest_rank(qs, 50),
        q_p90=_nearest_rank(qs, 90),
        q_p99=_nearest_rank(qs, 99),
        q_max=qs[-1],
        latency_avg_ms=sum(ls) / len(ls),
        latency_p50_ms=_nearest_rank(ls, 50),
        latency_p99_ms=_nearest_rank(ls, 99),
        index_size_bytes=index_size_bytes,
        build_time_s=build_time_s,
    )

"""Command-line interface.

Subcommands: build, estimate, eval, gen-queries, update, merge.  Datasets
are newline-delimited UTF-8 text, one string per line.  An index argument
may be a single binary index or a JSON set manifest produced by ``update``
(multiple parts plus pending insert/delete buffers).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from .ebwt import StringSet
from .estimator import build_index
from .harness import gen_workload, load_workload, run_eval, save_workload
from .serialize import FormatError, load_index, save_index
from .suffix_tree import BuildParams
from .updates import DEFAULT_BUDGET, IndexPart, IndexSet, UpdateError

MANIFEST_FORMAT = "fmcard-set"


def _add_param_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--h", type=int, default=3, dest="height",
                   help="suffix tree height (default 3)")
    p.add_argument("--l", type=int, default=5000, dest="min_rows",
                   help="minimum rows to keep a tree node (default 5000)")
    p.add_argument("--cm", type=int, default=10, dest="min_fit",
                   help="minimum same-character bucket size to fit (default 10)")
    p.add_argument("--epsilon", type=int, default=32,
                   help="spline error bound (default 32)")
    p.add_argument("--fitting", choices=["spline", "linear"], default="spline",
                   help="rank function representation (default spline)")


def _params_from_args(args) -> BuildParams:
    return BuildParams(
        height=args.height,
        min_rows=args.min_rows,
        min_fit=args.min_fit,
        epsilon=args.epsilon,
        fitting=args.fitting,
    )


def _params_to_dict(p: BuildParams) -> dict:
    return {
        "height": p.height,
        "min_rows": p.min_rows,
        "min_fit": p.min_fit,
        "epsilon": p.epsilon,
        "fitting": p.fitting,
    }


def _load_target(path: str):
    """Load either a single index or a set manifest."""
    with open(path, "rb") as f:
        head = f.read(4)
    if head == b"SSC1":
        return load_index(path)
    return _load_manifest(path)


def _load_manifest(path: str) -> IndexSet:
    with open(path, "r", encoding="utf-8") as f:
        doc = json.load(f)
    if doc.get("format") != MANIFEST_FORMAT:
        raise FormatError(f"{path}: not an index or set manifest")
    params = BuildParams(**doc["params"])
    base = os.path.dirname(os.path.abspath(path))
    parts = []
    for rel in doc["parts"]:
        part_path = rel if os.path.isabs(rel) else os.path.join(base, rel)
        idx = load_index(part_path)
        parts.append(IndexPart(idx, idx.source_path))
    s = IndexSet(params, strategy=doc["strategy"], budget=doc["budget"], parts=parts)
    for line in doc.get("insert_buffer", []):
        s.insert_buffer.add(line)
    for line in doc.get("delete_buffer", []):
        s.delete_buffer.add(line)
    return s


def _save_manifest(s: IndexSet, out: str) -> None:
    stem, _ = os.path.splitext(out)
    base = os.path.dirname(os.path.abspath(out))
    part_paths = []
    for k, part in enumerate(s.parts):
        if isinstance(part.source, list):
            src_path = f"{stem}.part{k}.src"
            with open(src_path, "w", encoding="utf-8") as f:
                f.write("\n".join(part.source) + "\n")
            part.index.source_path = os.path.abspath(src_path)
            part.source = os.path.abspath(src_path)
        idx_path = f"{stem}.part{k}.idx"
        save_index(part.index, idx_path)
        part_paths.append(os.path.relpath(os.path.abspath(idx_path), base))
    doc = {
        "format": MANIFEST_FORMAT,
        "version": 1,
        "strategy": s.strategy,
        "budget": s.budget,
        "params": _params_to_dict(s.params),
        "parts": part_paths,
        "insert_buffer": list(s.insert_buffer.raw),
        "delete_buffer": list(s.delete_buffer.raw),
    }
    with open(out, "w", encoding="utf-8") as f:
        json.dump(doc, f, ensure_ascii=False, indent=2)
        f.write("\n")


def _cmd_build(args) -> int:
    data = StringSet.from_file(args.dataset)
    params = _params_from_args(args)
    t0 = time.perf_counter()
    idx = build_index(data, params, source_path=os.path.abspath(args.dataset))
    build_s = time.perf_counter() - t0
    size = save_index(idx, args.output)
    print(f"built index over {data.n} strings ({idx.n_rows} rows) "
          f"in {build_s:.2f}s, {size} bytes -> {args.output}")
    return 0


def _cmd_estimate(args) -> int:
    target = _load_target(args.index)
    patterns = list(args.pattern or [])
    if args.patterns_file:
        with open(args.patterns_file, "r", encoding="utf-8") as f:
            for line in f:
                line = line.rstrip("\n")
                if line:
                    patterns.append(line.split("\t")[0])
    if not patterns:
        raise ValueError("no patterns given; use -p or --patterns-file")
    for p in patterns:
        est = target.estimate(p)
        print(f"{p}\t{est.value}")
    return 0


def _cmd_eval(args) -> int:
    target = _load_target(args.index)
    workload = load_workload(args.workload)
    if any(t is None for _, t in workload.patterns):
        if not args.dataset:
            raise ValueError(
                "workload lacks true cardinalities; pass --dataset to compute them"
            )
        from .harness import ground_truth

        data = StringSet.from_file(args.dataset)
        workload.patterns = [
            (p, t if t is not None else ground_truth(data, p))
            for p, t in workload.patterns
        ]
    if isinstance(target, IndexSet):
        base = os.path.dirname(os.path.abspath(args.index))
        with open(args.index, "r", encoding="utf-8") as f:
            doc = json.load(f)
        size = sum(
            os.path.getsize(p if os.path.isabs(p) else os.path.join(base, p))
            for p in doc["parts"]
        )
    else:
        size = os.path.getsize(args.index)
    report = run_eval(target, workload, index_size_bytes=size)
    print(report.to_text())
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as f:
            f.write(report.csv_header() + "\n")
            for key, val in report.csv_rows():
                f.write(f"{key},{val}\n")
        print(f"csv -> {args.csv}")
    return 0


def _cmd_gen_queries(args) -> int:
    data = StringSet.from_file(args.dataset)
    workload = gen_workload(
        data, args.count, (args.min_len, args.max_len), seed=args.seed
    )
    save_workload(workload, args.output)
    print(f"{len(workload)} patterns -> {args.output}")
    return 0


def _cmd_update(args) -> int:
    target = _load_target(args.index)
    if isinstance(target, IndexSet):
        s = target
        if args.strategy:
            s.strategy = args.strategy
        if args.budget:
            s.budget = args.budget
    else:
        s = IndexSet(
            target.params,
            strategy=args.strategy or "single",
            budget=args.budget or DEFAULT_BUDGET,
            parts=[IndexPart(target, target.source_path)],
        )
    applied = 0
    if args.insert:
        for line in StringSet.from_file(args.insert).strings:
            s.insert(line)
            applied += 1
    if args.delete:
        for line in StringSet.from_file(args.delete).strings:
            s.delete(line)
            applied += 1
    if len(s.parts) == 1 and not s.insert_buffer.raw and not s.delete_buffer.raw:
        size = save_index(s.parts[0].index, args.output)
        print(f"applied {applied} updates; single index ({size} bytes) "
              f"-> {args.output}")
    else:
        _save_manifest(s, args.output)
        print(f"applied {applied} updates; {len(s.parts)} part(s), "
              f"{len(s.insert_buffer.raw)} buffered insert(s), "
              f"{len(s.delete_buffer.raw)} buffered delete(s) -> {args.output}")
    return 0


def _cmd_merge(args) -> int:
    target = _load_target(args.set)
    if not isinstance(target, IndexSet):
        target = IndexSet(
            target.params,
            strategy="single",
            parts=[IndexPart(target, target.source_path)],
        )
    report = target.consolidate(full=True)
    if report.unmatched_deletes:
        print(f"warning: {len(report.unmatched_deletes)} delete(s) had no "
              f"matching string", file=sys.stderr)
    part = target.parts[0]
    stem, _ = os.path.splitext(args.output)
    src_path = f"{stem}.src"
    with open(src_path, "w", encoding="utf-8") as f:
        f.write("\n".join(part.load_source()) + "\n")
    part.index.source_path = os.path.abspath(src_path)
    size = save_index(part.index, args.output)
    print(f"merged into one index ({size} bytes) -> {args.output}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="fmcard",
        description="Substring cardinality estimation over string datasets.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build an index from a dataset file")
    p.add_argument("dataset")
    p.add_argument("-o", "--output", required=True)
    _add_param_flags(p)
    p.set_defaults(func=_cmd_build)

    p = sub.add_parser("estimate", help="estimate pattern cardinalities")
    p.add_argument("index")
    p.add_argument("-p", "--pattern", action="append")
    p.add_argument("--patterns-file")
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("eval", help="run a workload and report q-errors")
    p.add_argument("index")
    p.add_argument("--workload", required=True)
    p.add_argument("--csv", help="also write the report as CSV")
    p.add_argument("--dataset", help="dataset for missing true cardinalities")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("gen-queries", help="sample a query workload")
    p.add_argument("dataset")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--min-len", type=int, default=1)
    p.add_argument("--max-len", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_gen_queries)

    p = sub.add_parser("update", help="apply insert/delete batch files")
    p.add_argument("index")
    p.add_argument("--insert", help="file of strings to insert")
    p.add_argument("--delete", help="file of strings to delete")
    p.add_argument("--strategy", choices=["single", "multiple"], default=None,
                   help="consolidation strategy (default: keep/single)")
    p.add_argument("--budget", type=int, default=None,
                   help="buffer node budget before consolidation")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_update)

    p = sub.add_parser("merge", help="consolidate a set into one index")
    p.add_argument("set")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_merge)

    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, UpdateError, FormatError, OSError) as exc:
        print(f"fmcard: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())

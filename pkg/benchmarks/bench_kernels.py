"""Compare the compiled kernels against the pure-Python fallback.

Runs the corridor fit and spline evaluation on synthetic rank curves, then
times an end-to-end build and query pass on a generated dataset.  Invoke
once normally and once with FMCARD_PURE_KERNELS=1 to get both columns, or
just run it: it re-executes itself with the fallback forced and prints a
side-by-side summary.

    python benchmarks/bench_kernels.py [--rows 400000] [--strings 20000]
"""

from __future__ import annotations

import argparse
import json
import os
import random
import string
import subprocess
import sys
import time


def _synthetic_bucket(n, eps, seed):
    rng = random.Random(seed)
    rows = []
    ranks = []
    row = 1
    for r in range(1, n + 1):
        row += rng.randint(1, 12)
        rows.append(row)
        ranks.append(r)
    return rows, ranks


def _dataset(n_strings, seed):
    rng = random.Random(seed)
    alpha = string.ascii_lowercase
    out = []
    for _ in range(n_strings):
        ln = rng.randint(8, 22)
        out.append("".join(rng.choice(alpha) for _ in range(ln)))
    return out


def run_measurements(rows: int, n_strings: int) -> dict:
    import numpy as np

    from fmcard import BuildParams, KERNEL_IMPL, build_index, gen_workload
    from fmcard._kernels import eval_spline, fit_corridor

    res = {"impl": KERNEL_IMPL}

    xs, ys = _synthetic_bucket(rows, 32, seed=7)
    xs_a = np.asarray(xs, dtype=np.int64)
    ys_a = np.asarray(ys, dtype=np.int64)
    t0 = time.perf_counter()
    kr, kv = fit_corridor(xs_a, ys_a, 32)
    res["fit_s"] = time.perf_counter() - t0
    res["knots"] = len(kr)

    probes = list(range(0, xs[-1], max(1, xs[-1] // 200000)))
    t0 = time.perf_counter()
    acc = 0
    for i in probes:
        acc += eval_spline(kr, kv, i)
    res["eval_s"] = time.perf_counter() - t0
    res["eval_calls"] = len(probes)
    res["acc"] = acc  # defeat dead-code elimination, also a cross-check

    data = _dataset(n_strings, seed=11)
    t0 = time.perf_counter()
    idx = build_index(data, BuildParams(min_rows=500))
    res["build_s"] = time.perf_counter() - t0
    wl = gen_workload(data, 2000, (1, 8), seed=3)
    t0 = time.perf_counter()
    for p, _ in wl.patterns:
        idx.estimate(p)
    res["query_s"] = time.perf_counter() - t0
    res["queries"] = len(wl.patterns)
    return res


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--rows", type=int, default=400_000)
    ap.add_argument("--strings", type=int, default=20_000)
    ap.add_argument("--json", action="store_true", help="print raw json only")
    args = ap.parse_args()

    here = run_measurements(args.rows, args.strings)
    if args.json:
        print(json.dumps(here))
        return 0

    if here["impl"] == "compiled":
        env = dict(os.environ, FMCARD_PURE_KERNELS="1")
        out = subprocess.run(
            [sys.executable, __file__, "--rows", str(args.rows),
             "--strings", str(args.strings), "--json"],
            env=env, capture_output=True, text=True, check=True,
        )
        other = json.loads(out.stdout)
        compiled, pure = here, other
    else:
        print("compiled kernels unavailable; pure numbers only")
        compiled, pure = None, here

    def line(name, key, unit, per=None):
        c = f"{compiled[key]:10.4f}" if compiled else "       n/a"
        p = f"{pure[key]:10.4f}"
        ratio = f"{pure[key] / compiled[key]:6.1f}x" if compiled else "   -"
        print(f"{name:<26}{c}  {p}  {ratio}  {unit}")

    print(f"{'kernel benchmark':<26}{'compiled':>10}  {'pure':>10}  "
          f"{'speedup':>7}")
    line(f"corridor fit ({args.rows} pts)", "fit_s", "s")
    line(f"spline eval ({here['eval_calls']} calls)", "eval_s", "s")
    line(f"index build ({args.strings} strs)", "build_s", "s")
    line(f"queries ({here['queries']})", "query_s", "s")
    if compiled and compiled["acc"] != pure["acc"]:
        print("WARNING: compiled and pure evaluation disagree")
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

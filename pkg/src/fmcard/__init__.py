"""fmcard: substring cardinality estimation over string datasets.

Builds a space-efficient index (sorted multi-string rotation transform,
pruned suffix tree, error-bounded learned rank functions) and answers
"how many strings contain this pattern" with bounded error.
"""

from ._kernels import KERNEL_IMPL
from .ebwt import (
    SENTINEL,
    CyclicShift,
    EbwtOutput,
    LTriple,
    StringSet,
    build_ebwt,
    compare_shifts,
    exact_rank,
)
from .estimator import (
    CardIndex,
    Estimate,
    build_index,
    estimate,
    find_starting_char,
    rank_lookup,
)
from .harness import (
    EvalReport,
    Workload,
    gen_workload,
    ground_truth,
    load_workload,
    occurrence_truth,
    qerror,
    run_eval,
    save_workload,
)
from .serialize import load_index, save_index
from .splinefit import RankFunction, fit_linear, fit_spline
from .suffix_tree import (
    BuildParams,
    SuffixTreeNode,
    assign_and_pushup,
    build_tree,
    locate_path,
)
from .updates import DeltaBuffer, IndexPart, IndexSet, UpdateError

__version__ = "0.1.0"

__all__ = [
    "KERNEL_IMPL",
    "SENTINEL",
    "StringSet",
    "CyclicShift",
    "LTriple",
    "EbwtOutput",
    "compare_shifts",
    "build_ebwt",
    "exact_rank",
    "BuildParams",
    "SuffixTreeNode",
    "build_tree",
    "assign_and_pushup",
    "locate_path",
    "RankFunction",
    "fit_spline",
    "fit_linear",
    "CardIndex",
    "Estimate",
    "build_index",
    "estimate",
    "rank_lookup",
    "find_starting_char",
    "IndexSet",
    "IndexPart",
    "DeltaBuffer",
    "UpdateError",
    "Workload",
    "EvalReport",
    "ground_truth",
    "occurrence_truth",
    "qerror",
    "gen_workload",
    "run_eval",
    "save_workload",
    "load_workload",
    "save_index",
    "load_index",
]

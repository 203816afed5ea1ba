"""k-RNN: a repeated-nearest-neighbor TSP heuristic toolkit.

Enumerates every ordered k-vertex prefix of a tour, completes each by
greedy nearest-neighbor steps, and keeps the best closed tour or open
Hamiltonian path.  Ships with bit-exact TSPLIB parsing, exact oracles
(brute force and Held-Karp), degree-bounded spanning-tree
constructions, an empirical claim-verification harness, and a
48-instance benchmark registry with known optima.
"""

from .bench import (
    PAPER_RESULTS,
    REGISTRY,
    BenchRecord,
    RegistryEntry,
    desk_scale_names,
    emit_report,
    excess_percent,
    run_benchmark,
)
from .claims import (
    CLAIM_IDS,
    PROVEN_CLAIM_IDS,
    ClaimVerdict,
    TrialPlan,
    check_lemma1,
    check_lemma2,
    check_mst_bound,
    check_ratio_bound,
    check_theorem1,
    check_theorem2,
    check_theorem3,
    merge_verdicts,
)
from .errors import (
    BudgetExceededError,
    DegreeViolationError,
    InstanceNotFoundError,
    InvalidInstanceError,
    InvalidKError,
    InvalidOptimumError,
    InvalidPrefixError,
    InvalidSizeError,
    InvalidTourError,
    KrnnError,
    PreconditionError,
    PrefixLimitError,
    SizeRefusedError,
    TsplibParseError,
    UnsupportedFormatError,
)
from .exact import (
    BRUTE_PATH_MAX_N,
    BRUTE_TOUR_MAX_N,
    HELD_KARP_MAX_N,
    METHOD_BRUTE,
    METHOD_HELD_KARP,
    ExactResult,
    brute_force_tour,
    held_karp_tour,
    shortest_ham_path,
)
from .heuristics import (
    MODE_PATH,
    MODE_TOUR,
    KrnnConfig,
    KrnnResult,
    greedy_complete,
    krnn,
    krnn_all_k,
)
from .instance import (
    HamPath,
    Instance,
    Tour,
    is_metric,
    path_cost,
    random_instance,
    tour_cost,
)
from .spanning import (
    RootedTree,
    SpanningTree,
    prim_mst,
    tour_spanning_trees,
    tree4,
)
from .tsplib import (
    TsplibHeader,
    distance,
    load_bundle,
    parse_file,
    parse_header,
    parse_instance,
    serialize_full_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "BRUTE_PATH_MAX_N",
    "BRUTE_TOUR_MAX_N",
    "BenchRecord",
    "BudgetExceededError",
    "CLAIM_IDS",
    "ClaimVerdict",
    "DegreeViolationError",
    "ExactResult",
    "HELD_KARP_MAX_N",
    "HamPath",
    "Instance",
    "InstanceNotFoundError",
    "InvalidInstanceError",
    "InvalidKError",
    "InvalidOptimumError",
    "InvalidPrefixError",
    "InvalidSizeError",
    "InvalidTourError",
    "KrnnConfig",
    "KrnnError",
    "KrnnResult",
    "METHOD_BRUTE",
    "METHOD_HELD_KARP",
    "MODE_PATH",
    "MODE_TOUR",
    "PAPER_RESULTS",
    "PROVEN_CLAIM_IDS",
    "PreconditionError",
    "PrefixLimitError",
    "REGISTRY",
    "RegistryEntry",
    "RootedTree",
    "SizeRefusedError",
    "SpanningTree",
    "Tour",
    "TrialPlan",
    "TsplibHeader",
    "TsplibParseError",
    "UnsupportedFormatError",
    "brute_force_tour",
    "check_lemma1",
    "check_lemma2",
    "check_mst_bound",
    "check_ratio_bound",
    "check_theorem1",
    "check_theorem2",
    "check_theorem3",
    "desk_scale_names",
    "distance",
    "emit_report",
    "excess_percent",
    "greedy_complete",
    "held_karp_tour",
    "is_metric",
    "krnn",
    "krnn_all_k",
    "load_bundle",
    "merge_verdicts",
    "parse_file",
    "parse_header",
    "parse_instance",
    "path_cost",
    "prim_mst",
    "random_instance",
    "run_benchmark",
    "serialize_full_matrix",
    "shortest_ham_path",
    "tour_cost",
    "tour_spanning_trees",
    "tree4",
]

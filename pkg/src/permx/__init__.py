"""Pattern containment for permutations and 0-1 matrices, avoidance
counting, extremal row-density searches, and a certified recursion
schedule for linear extremal bounds."""

from .avoidance import (
    AvoidanceCount,
    JvInclusionReport,
    MergeCountReport,
    MergeQuery,
    SwEstimate,
    avoiders,
    count_avoiders,
    merge_coloring,
    merge_count_upper_check,
    merge_member,
    sw_estimate_sequence,
    verify_jv_inclusion,
)
from .bounds import (
    BoundParams,
    CertCheck,
    CertReport,
    Schedule,
    ScheduleState,
    build_schedule,
    certify_schedule,
    cibulka_note,
    crude_fpts_bound,
    fox_rhs,
    lemma21_bound,
    lemma22_rhs,
    marcus_tardos_bound,
    theorem12_exponent,
    theorem24_alpha,
)
from .core import (
    BinaryMatrix,
    BlockDecomposition,
    Occurrence,
    Permutation,
    PermutationMatrix,
    avoids,
    blockable_decompositions,
    complement,
    contains,
    direct_sum,
    find_matrix_occurrence,
    find_occurrence,
    from_matrix,
    inflate,
    inverse,
    matrix_avoids,
    matrix_contains,
    parse_permutation,
    reverse,
    rotate90,
    skew_sum,
    to_matrix,
)
from .errors import PermxError, PreconditionViolated, ResourceLimit
from .extremal import (
    ExtremalResult,
    FptsResult,
    Lemma21Report,
    Lemma22Report,
    check_lemma21,
    check_lemma22,
    exfn_enumerate,
    exfn_exact,
    fpts_exact,
    gpts_direct,
    gpts_exact,
)

__version__ = "0.1.0"

__all__ = [
    "AvoidanceCount",
    "BinaryMatrix",
    "BlockDecomposition",
    "BoundParams",
    "CertCheck",
    "CertReport",
    "ExtremalResult",
    "FptsResult",
    "JvInclusionReport",
    "Lemma21Report",
    "Lemma22Report",
    "MergeCountReport",
    "MergeQuery",
    "Occurrence",
    "Permutation",
    "PermutationMatrix",
    "PermxError",
    "PreconditionViolated",
    "ResourceLimit",
    "Schedule",
    "ScheduleState",
    "SwEstimate",
    "avoiders",
    "avoids",
    "blockable_decompositions",
    "build_schedule",
    "certify_schedule",
    "check_lemma21",
    "check_lemma22",
    "cibulka_note",
    "complement",
    "contains",
    "count_avoiders",
    "crude_fpts_bound",
    "direct_sum",
    "exfn_enumerate",
    "exfn_exact",
    "find_matrix_occurrence",
    "find_occurrence",
    "fox_rhs",
    "fpts_exact",
    "from_matrix",
    "gpts_direct",
    "gpts_exact",
    "inflate",
    "inverse",
    "lemma21_bound",
    "lemma22_rhs",
    "marcus_tardos_bound",
    "matrix_avoids",
    "matrix_contains",
    "merge_coloring",
    "merge_count_upper_check",
    "merge_member",
    "parse_permutation",
    "reverse",
    "rotate90",
    "skew_sum",
    "sw_estimate_sequence",
    "theorem12_exponent",
    "theorem24_alpha",
    "to_matrix",
    "verify_jv_inclusion",
]

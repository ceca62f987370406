"""Rigidity of bar-joint frameworks whose vertices ride on fixed lines.

A framework here is a graph whose vertex classes are pinned to given lines
in R^d, so a placement is one scalar parameter per vertex. The package
decides infinitesimal rigidity and generic global rigidity combinatorially,
cross-checks the verdicts against exact matrix ranks and a numeric
fiber-search oracle, and emits replayable certificates for YES instances.
"""

from .characterize import (
    Construction,
    CoreWitness,
    GlobalCertificate,
    HypothesesViolated,
    InternalInconsistency,
    NotCrossing,
    NotGeneralPosition,
    certify,
    find_theta_witness,
    is_generically_globally_rigid,
    is_partition_connected,
    is_redundantly_rigid,
    is_rigid,
    replay,
    validate_witness,
    verdict_invariance_suite,
)
from .linegeom import (
    IsomGroup,
    Isometry,
    Line,
    LineSet,
    UnsupportedLineSet,
    Violation,
    apply_isometry,
    classify_pair,
    closest_pair,
    distance_profile,
    is_general_position,
    isometry_group,
    line_from_point_direction,
)
from .oracle import (
    MAX_VERTICES,
    FiberSearchResult,
    TooLarge,
    backend_name,
    congruent,
    fiber_search,
    triangle_flex_check,
)
from .pgraph import (
    PartitionedGraph,
    blocks,
    disjoint_union,
    glue_at_vertex,
    is_crossing,
    open_ear_decomposition,
    partitioned_graph,
    smooth,
    subdivide,
)
from .randgen import (
    SamplingBudgetExceeded,
    random_decided_instance,
    random_general_lines,
    random_graph,
    random_instance,
    random_parallel_lines,
)
from .rigidity import (
    Framework,
    det_expansion_check,
    framework,
    infinitesimally_rigid,
    random_generic_framework,
    rigidity_matrix_full,
    rigidity_matrix_reduced,
)

__version__ = "0.1.0"

__all__ = [
    "Construction",
    "CoreWitness",
    "FiberSearchResult",
    "Framework",
    "GlobalCertificate",
    "HypothesesViolated",
    "InternalInconsistency",
    "IsomGroup",
    "Isometry",
    "Line",
    "LineSet",
    "MAX_VERTICES",
    "NotCrossing",
    "NotGeneralPosition",
    "PartitionedGraph",
    "SamplingBudgetExceeded",
    "TooLarge",
    "UnsupportedLineSet",
    "Violation",
    "backend_name",
    "blocks",
    "certify",
    "apply_isometry",
    "classify_pair",
    "closest_pair",
    "congruent",
    "det_expansion_check",
    "disjoint_union",
    "distance_profile",
    "fiber_search",
    "find_theta_witness",
    "framework",
    "glue_at_vertex",
    "infinitesimally_rigid",
    "is_crossing",
    "is_general_position",
    "is_generically_globally_rigid",
    "is_partition_connected",
    "is_redundantly_rigid",
    "is_rigid",
    "isometry_group",
    "line_from_point_direction",
    "open_ear_decomposition",
    "partitioned_graph",
    "random_decided_instance",
    "random_general_lines",
    "random_generic_framework",
    "random_graph",
    "random_instance",
    "random_parallel_lines",
    "replay",
    "rigidity_matrix_full",
    "rigidity_matrix_reduced",
    "smooth",
    "subdivide",
    "triangle_flex_check",
    "validate_witness",
    "verdict_invariance_suite",
]

"""Low-crossing edge selection in complete simple topological graphs.

The package splits into: exact weighted set systems and their stabbing
pseudometric (:mod:`set_system`), separated nets / partitions / the
reweighting matcher (:mod:`packing`), exact integer polyline drawings
(:mod:`drawing`), the end-to-end selection pipeline (:mod:`pipeline`),
definition-level brute-force oracles (:mod:`oracle`), and a CLI
(:mod:`cli`).
"""

from .constants import Constants, DEFAULT_CONSTANTS, load_constants
from .drawing import (
    CrossingMatrix,
    Drawing,
    RotationLabeling,
    Violation,
    convex_complete,
    crossing_matrix,
    drawing_from_json,
    drawing_to_json,
    edges_cross,
    load_drawing,
    outer_face_vertex,
    point_in_triangle_region,
    random_geometric_complete,
    relabel_ccw,
    save_drawing,
    triangle_family,
    validate_simple,
)
from .errors import (
    CurveBoundaryError,
    DegenerateRotationError,
    DrawingFormatError,
    EmptyMatchingError,
    FamilyTooSmallError,
    GenerationError,
    InfeasiblePartitionError,
    InvalidDrawingError,
    InvalidPairError,
    MatchingBoundError,
    NoOuterVertexError,
    OracleGuardError,
    PipelineStageError,
    ShortEdgeError,
)
from .packing import (
    LowStabMatching,
    MatchConfig,
    MatchingReport,
    StabPartition,
    build_low_stab_matching,
    greedy_net,
    matching_from_json,
    matching_to_json,
    partition_low_stab,
    pigeon_subset,
    refine_by_index,
    verify_matching,
)
from .pipeline import (
    CrossingClasses,
    PipelineReport,
    StabDigraph,
    build_stab_digraph,
    classify_crossings,
    count_enclosed_pairs,
    filter_low_indegree,
    select_short_edge,
    split_by_root_crossing,
    verify_residual_endpoints,
)
from .set_system import (
    GroundSet,
    Member,
    SetFamily,
    ShatterEstimate,
    dual_shatter_estimate,
    family_from_json,
    family_to_json,
    is_delta_separated,
    sauer_shelah_bound,
    stab_count,
    stabs,
    venn_cells,
)

__version__ = "0.1.0"

"""magspec: spectra of magnetic Schrodinger operators on weighted graphs.

Graphs carry vertex weights, edge weights and a U(1) magnetic potential.
The toolkit builds the associated operators, computes holonomies and gauge
reductions, field norms and effective-potential lower bounds, and audits a
self-adjointness criterion on truncations of infinite graph families.
"""

from .angles import angle_distance, angles_close, normalize_angle
from .covering import (
    CoveringCheck,
    EffectivePotential,
    GoodCovering,
    Subgraph,
    ball_covering,
    ball_degree_bound,
    dirichlet_bound_check,
    effective_potential,
    restricted_field_norm,
    validate_covering,
)
from .errors import (
    Disconnected,
    DisconnectedSubgraph,
    DuplicateEdge,
    EmptyFrontier,
    GeneratorFailure,
    GraphError,
    GraphFormatError,
    InvalidTree,
    MagspecError,
    MissingTarget,
    NoConvergence,
    NonPositiveWeight,
    NotAnEdge,
    NotASolution,
    SelfLoop,
    UnknownVertex,
)
from .esa import (
    EsaReport,
    EsaRow,
    LadderClosedForm,
    LadderParams,
    classify_regime,
    criterion_check,
    ladder_closed_forms,
    ladder_criterion_check,
    ladder_family,
    ladder_square_covering,
    ladder_squares,
    ladder_sweep,
    ladder_vertex_id,
    ladder_vertex_pos,
)
from .family import GraphFamily, finite_family, truncate
from .graph import (
    Potential,
    WeightedGraph,
    build_graph,
    degree_bound,
    dumps_graph,
    edge_key,
    graph_from_dict,
    graph_to_dict,
    loads_graph,
)
from .holonomy import (
    Cycle,
    CycleBasis,
    SpanningTree,
    apply_gauge,
    cycle_basis,
    cycle_chord_coefficients,
    gauge_reduce,
    holonomy,
    potential_from_holonomy,
    same_holonomy,
    spanning_tree,
    zero_potential,
)
from .metric import (
    PathMetric,
    completeness_probe,
    distance_to_frontier,
    dp_distance,
    edge_length,
    frontier_distances,
    shortest_path_lengths,
)
from .spectra import (
    MagneticOperator,
    SpectrumResult,
    agmon_identity_check,
    assemble_operator,
    cyclic_field_norm_closed_form,
    dense_spectrum,
    field_norm,
    lowest_eigenvalue,
    quadratic_form,
)

__version__ = "0.1.0"

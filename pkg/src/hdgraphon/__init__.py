"""Hamiltonian decompositions of graphs sampled from step-graphons.

Exact zero-one/residual classification of the limiting probability, the
degenerate Gaussian limit for the residual case, and a Monte Carlo harness
that checks the limit against sampled graphs.
"""

__version__ = "0.1.0"

from .errors import (
    AsymmetricValuesError,
    BreakpointOrderError,
    DisconnectedSkeletonError,
    EdgeListError,
    GraphonError,
    HDGraphonError,
    InvariantViolation,
    MalformedGraphonError,
    RankDeficientError,
    ValueRangeError,
)
from .model import (
    SkeletonGraph,
    StepGraphon,
    concentration_vector,
    has_odd_cycle,
    is_connected,
    load_graphon,
    parse_step_graphon,
    skeleton_graph,
)
from .polytope import (
    EdgePolytope,
    Facet,
    IncidenceMatrix,
    PointClassification,
    PointKind,
    classify_point,
    edge_polytope,
    enumerate_facets,
    incidence_matrix,
    polytope_rank,
)
from .sampling import (
    SampledGraph,
    directed_arc_exists,
    empirical_concentration,
    sample_graph,
    substream,
)
from .hd import HDVerdict, has_hamiltonian_decomposition, hd_bruteforce
from .limitprob import (
    LimitGaussian,
    LimitKind,
    LimitReason,
    LimitVerdict,
    OmegaRegion,
    classify_limit,
    limit_gaussian,
    omega_region,
    omega_region_probability,
    sample_omega,
)
from .experiment import (
    ExperimentConfig,
    ExperimentResult,
    bundled_graphon,
    emit_results,
    reproduce,
    run_experiment,
)

__all__ = [
    "__version__",
    "AsymmetricValuesError",
    "BreakpointOrderError",
    "DisconnectedSkeletonError",
    "EdgeListError",
    "GraphonError",
    "HDGraphonError",
    "InvariantViolation",
    "MalformedGraphonError",
    "RankDeficientError",
    "ValueRangeError",
    "SkeletonGraph",
    "StepGraphon",
    "concentration_vector",
    "has_odd_cycle",
    "is_connected",
    "load_graphon",
    "parse_step_graphon",
    "skeleton_graph",
    "EdgePolytope",
    "Facet",
    "IncidenceMatrix",
    "PointClassification",
    "PointKind",
    "classify_point",
    "edge_polytope",
    "enumerate_facets",
    "incidence_matrix",
    "polytope_rank",
    "SampledGraph",
    "directed_arc_exists",
    "empirical_concentration",
    "sample_graph",
    "substream",
    "LimitGaussian",
    "LimitKind",
    "LimitReason",
    "LimitVerdict",
    "OmegaRegion",
    "classify_limit",
    "limit_gaussian",
    "omega_region",
    "omega_region_probability",
    "sample_omega",
    "ExperimentConfig",
    "ExperimentResult",
    "bundled_graphon",
    "emit_results",
    "reproduce",
    "run_experiment",
    "HDVerdict",
    "has_hamiltonian_decomposition",
    "hd_bruteforce",
]

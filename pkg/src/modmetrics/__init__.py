"""p-modulus of connecting path families on finite graphs, the derived
d_p metrics, snowflake-exponent experiments, and Euclidean embeddability
checks."""

__version__ = "0.1.0"

from .graph import (
    Graph,
    GraphFormatError,
    Path,
    build_graph,
    complete_graph,
    cycle_graph,
    effective_resistance,
    effective_resistance_matrix,
    enumerate_simple_paths,
    erdos_renyi_connected,
    load_graph,
    min_cut,
    parallel_paths,
    parse_graph,
    path_graph,
    shortest_path_hops,
)
from .solver import (
    BeurlingCertificate,
    ModulusResult,
    SolverConfig,
    SolverError,
    beurling_verify,
    modulus,
    p_energy,
)
from .metrics import (
    AsfeEstimate,
    DistanceMatrix,
    asfe_graph,
    distance_matrix,
    dp_distance,
    er_experiment,
    flat_exponent,
    triangle_audit,
    triple_exponents,
)
from .embedding import (
    EmbeddingReport,
    embeddability,
    schoenberg_matrix,
    square_eigencurve,
    square_p_threshold,
    square_twist,
    symmetric_eigen,
)
from .rng import SplitMix64

__all__ = [
    "__version__",
    "Graph", "GraphFormatError", "Path",
    "build_graph", "parse_graph", "load_graph",
    "path_graph", "cycle_graph", "complete_graph", "parallel_paths",
    "erdos_renyi_connected",
    "shortest_path_hops", "min_cut",
    "effective_resistance", "effective_resistance_matrix",
    "enumerate_simple_paths",
    "SolverConfig", "SolverError", "ModulusResult",
    "modulus", "p_energy",
    "BeurlingCertificate", "beurling_verify",
    "DistanceMatrix", "dp_distance", "distance_matrix",
    "triangle_audit", "flat_exponent", "asfe_graph",
    "AsfeEstimate", "triple_exponents", "er_experiment",
    "EmbeddingReport", "embeddability", "schoenberg_matrix",
    "symmetric_eigen", "square_eigencurve", "square_twist",
    "square_p_threshold",
    "SplitMix64",
]

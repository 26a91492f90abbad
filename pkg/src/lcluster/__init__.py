"""Seeded local clustering on general graphs and EDVW hypergraphs."""
from .acl import AUTO, ClusterQuery, ClusterResult, auto_alpha, general_acl, hyper_acl
from .errors import LClusterError, NoConvergence, ValidationError
from .graph_core import (
    GeneralGraph,
    TransitionSystem,
    build_graph_transition,
    load_transition_matrix,
    read_graph,
    write_graph,
)
from .hyper_core import (
    EdvwHypergraph,
    assign_edvw_author_weights,
    build_hyper_transition,
    read_hypergraph,
    write_hypergraph,
)
from .markov import (
    PprVector,
    StartingDistribution,
    lazy_ppr,
    make_psi,
    standard_ppr,
    stationary_distribution,
)
from .oracle import OracleResult, optimal_conductance, verify_theorem_conditions
from .reduce import ReductionReport, clique_expand, project_cluster, star_expand
from .sweep import (
    LscCurve,
    SweepProfile,
    boundary,
    conductance,
    early_stop_sweep,
    lsc_curve,
    lsc_eval,
    sweep_profile,
    volume,
)

__version__ = "0.1.0"

__all__ = [
    "AUTO", "ClusterQuery", "ClusterResult", "auto_alpha", "general_acl", "hyper_acl",
    "LClusterError", "NoConvergence", "ValidationError",
    "GeneralGraph", "TransitionSystem", "build_graph_transition", "load_transition_matrix",
    "read_graph", "write_graph",
    "EdvwHypergraph", "assign_edvw_author_weights", "build_hyper_transition",
    "read_hypergraph", "write_hypergraph",
    "PprVector", "StartingDistribution", "lazy_ppr", "make_psi", "standard_ppr",
    "stationary_distribution",
    "OracleResult", "optimal_conductance", "verify_theorem_conditions",
    "ReductionReport", "clique_expand", "project_cluster", "star_expand",
    "LscCurve", "SweepProfile", "boundary", "conductance", "early_stop_sweep",
    "lsc_curve", "lsc_eval", "sweep_profile", "volume",
]

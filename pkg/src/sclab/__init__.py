"""sclab: a numerical laboratory for stochastic completeness of weighted graphs.

The library decides (at finite-evidence scale) and cross-validates
stochastic completeness of weighted graphs through four independent
routes: the Dirichlet resolvent exhaustion, maximum-principle
violation certificates, minimal-chain Monte Carlo, and volume-growth
diagnostics under adapted metrics, together with the exact
metric-graph calculus that ties the routes together.
"""

__version__ = "0.1.0"

from .completeness import (
    FotProbe,
    OracleResult,
    ResolventProfile,
    SolverError,
    WoympCertificate,
    WoympResult,
    dirichlet_resolvent,
    fot_probe,
    incompleteness_defect,
    nearest_neighbor_oracle,
    woymp_check,
)
from .graph import (
    BallCapError,
    GraphFormatError,
    GraphWindow,
    VertexFunction,
    WeightedGraph,
    ball_window,
    energy,
    formal_laplacian,
    full_window,
    load_graph,
    save_graph,
    truncate_by_jump_size,
    validate,
)
from .growth import (
    GrowthFit,
    GrigoryanReport,
    VolumeProfile,
    grigoryan_integral,
    growth_fit,
    volume_profile,
    volume_profile_metric,
)
from .metric_graph import (
    EdgePoint,
    MetricGraph,
    PiecewisePoly,
    ball_measure,
    boundary_derivatives,
    build,
    compare_lemma,
    energy_form,
    hat_function,
    ibp_check,
    interpolate,
    interpolation_bounds_check,
    quotient_distance,
    restrict,
    sobolev_check,
    woymp_extend,
    woymp_inequality_check,
)
from .metrics import (
    AdaptednessReport,
    EdgeLengths,
    PathMetric,
    check_adapted,
    degree_metric,
    load_metric,
    path_distance,
    save_metric,
)
from .simulate import ChainEnsemble, Trajectory, simulate_chain, simulate_ensemble

__all__ = [
    "__version__",
    # graph core
    "WeightedGraph", "GraphWindow", "VertexFunction", "BallCapError",
    "GraphFormatError", "ball_window", "full_window", "energy",
    "formal_laplacian", "truncate_by_jump_size", "validate",
    "load_graph", "save_graph",
    # metrics
    "EdgeLengths", "PathMetric", "AdaptednessReport", "degree_metric",
    "check_adapted", "path_distance", "load_metric", "save_metric",
    # completeness lab
    "ResolventProfile", "SolverError", "dirichlet_resolvent",
    "incompleteness_defect", "WoympCertificate", "WoympResult",
    "woymp_check", "FotProbe", "fot_probe", "OracleResult",
    "nearest_neighbor_oracle",
    # Monte Carlo
    "Trajectory", "ChainEnsemble", "simulate_chain", "simulate_ensemble",
    # metric graph
    "MetricGraph", "EdgePoint", "PiecewisePoly", "build", "interpolate",
    "restrict", "woymp_extend", "boundary_derivatives", "energy_form",
    "ibp_check", "hat_function", "quotient_distance", "ball_measure",
    "compare_lemma", "woymp_inequality_check", "interpolation_bounds_check",
    "sobolev_check",
    # growth
    "VolumeProfile", "volume_profile", "volume_profile_metric",
    "GrigoryanReport", "grigoryan_integral", "GrowthFit", "growth_fit",
]

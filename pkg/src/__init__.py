"""Scalable second-order consensus on hierarchical multi-agent networks."""

from .config import DEFAULT_OUTPUT_DIR, DEFAULT_SEED
from .graph import (
    AssumptionParams,
    HierarchicalGraph,
    LaplacianDecomposition,
    MixedGraph,
    add_reverse_edges,
    assumption_params,
    build_dag,
    gen_path,
    gen_path_reverse,
    gen_random_mixed,
    gen_star,
    gen_star_mixed,
    has_spanning_tree,
    laplacian,
)
from .graph_io import graph_from_dict, graph_to_dict, load_graph, write_graph
from .spectral import (
    GainPair,
    Protocol,
    SpectralReport,
    Spectrum,
    Verdict,
    VerdictResult,
    abs_criterion,
    analyze,
    consensus_verdict,
    eigenvalues,
    gershgorin_bound,
    gershgorin_discs,
    in_gershgorin_union,
    laplacian_spectrum,
    path_family_abs_criterion,
    path_family_rel_criterion,
    rel_criterion,
    ring_spectrum_closed_form,
    scalable_absolute_gains,
    spectra_match,
    star_spectrum_closed_form,
)
from .dynamics import (
    AgentState,
    Consistency,
    SimOutcome,
    SimulationConfig,
    SimulationTrace,
    classify_consistency,
    control_input,
    initial_conditions,
    left_zero_eigenvector,
    simulate,
    system_matrix,
)
from .sweep import BreakingSize, FamilyKind, FamilySpec, SweepRecord, SweepResult, find_breaking_size, run_sweep
from .exporter import write_json, write_sweep_csv, write_trace_csv
from .logger import get_logger, ActionLogger

__all__ = [
    "DEFAULT_OUTPUT_DIR",
    "DEFAULT_SEED",
    # graph
    "AssumptionParams",
    "HierarchicalGraph",
    "LaplacianDecomposition",
    "MixedGraph",
    "add_reverse_edges",
    "assumption_params",
    "build_dag",
    "gen_path",
    "gen_path_reverse",
    "gen_random_mixed",
    "gen_star",
    "gen_star_mixed",
    "has_spanning_tree",
    "laplacian",
    "graph_from_dict",
    "graph_to_dict",
    "load_graph",
    "write_graph",
    # spectral
    "GainPair",
    "Protocol",
    "SpectralReport",
    "Spectrum",
    "Verdict",
    "VerdictResult",
    "abs_criterion",
    "analyze",
    "consensus_verdict",
    "eigenvalues",
    "gershgorin_bound",
    "gershgorin_discs",
    "in_gershgorin_union",
    "laplacian_spectrum",
    "path_family_abs_criterion",
    "path_family_rel_criterion",
    "rel_criterion",
    "ring_spectrum_closed_form",
    "scalable_absolute_gains",
    "spectra_match",
    "star_spectrum_closed_form",
    # dynamics
    "AgentState",
    "Consistency",
    "SimOutcome",
    "SimulationConfig",
    "SimulationTrace",
    "classify_consistency",
    "control_input",
    "initial_conditions",
    "left_zero_eigenvector",
    "simulate",
    "system_matrix",
    # sweep
    "BreakingSize",
    "FamilyKind",
    "FamilySpec",
    "SweepRecord",
    "SweepResult",
    "find_breaking_size",
    "run_sweep",
    # output
    "write_json",
    "write_sweep_csv",
    "write_trace_csv",
    "get_logger",
    "ActionLogger",
]

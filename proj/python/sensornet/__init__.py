"""Precision bounds and optimal measurement weights for qubit sensor networks."""

from ._core import (
    BasisPair,
    BoundSolution,
    DualSolution,
    FieldModel,
    InconsistentConstraintError,
    InstanceTooLargeError,
    NewtonDivergenceError,
    PhaseWrapError,
    ProtocolResult,
    RankDeficientError,
    ShotPlan,
    UnboundedPrecisionError,
    UnentangledSolution,
    VertexCertificate,
    WeightSolution,
    build_dual_basis,
    check_identifiability,
    enumerate_dual_vertices,
    ghz_rank_one_fisher,
    grid_bound_search,
    mse_lower_bound,
    simulate_ghz_linear,
    simulate_unentangled,
    solve_bound,
    solve_dual,
    solve_protocol,
    transform_fisher,
    two_step_protocol,
    unentangled_weights,
)

__all__ = [
    "BasisPair",
    "BoundSolution",
    "DualSolution",
    "FieldModel",
    "InconsistentConstraintError",
    "InstanceTooLargeError",
    "NewtonDivergenceError",
    "PhaseWrapError",
    "ProtocolResult",
    "RankDeficientError",
    "ShotPlan",
    "UnboundedPrecisionError",
    "UnentangledSolution",
    "VertexCertificate",
    "WeightSolution",
    "build_dual_basis",
    "check_identifiability",
    "enumerate_dual_vertices",
    "ghz_rank_one_fisher",
    "grid_bound_search",
    "mse_lower_bound",
    "simulate_ghz_linear",
    "simulate_unentangled",
    "solve_bound",
    "solve_dual",
    "solve_protocol",
    "transform_fisher",
    "two_step_protocol",
    "unentangled_weights",
]

__version__ = "0.1.0"

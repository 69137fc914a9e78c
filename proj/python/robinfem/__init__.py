"""Finite-element solver for p-Laplacian Robin problems with singular boundary data."""

from ._core import (
    DiscreteField,
    Mesh2D,
    ProblemSpec,
    SolverConfig,
    entropy_residual,
    exact_disk_example,
    g_integrability_exponent,
    generate_unit_disk,
    generate_unit_square,
    marcinkiewicz_exponents,
    marcinkiewicz_quasinorm,
    phi_t_eps,
    problem_from_config,
    refine_uniform,
    scaled_weak_residual,
    solve_barrier,
    solve_ladder,
    truncate,
    v_delta,
)

__all__ = [
    "DiscreteField",
    "Mesh2D",
    "ProblemSpec",
    "SolverConfig",
    "entropy_residual",
    "exact_disk_example",
    "g_integrability_exponent",
    "generate_unit_disk",
    "generate_unit_square",
    "marcinkiewicz_exponents",
    "marcinkiewicz_quasinorm",
    "phi_t_eps",
    "problem_from_config",
    "refine_uniform",
    "scaled_weak_residual",
    "solve_barrier",
    "solve_ladder",
    "truncate",
    "v_delta",
]

"""Certified fidelity floors for quantum circuits with coherent rotation errors."""

__version__ = "0.1.0"

from .bounds import (
    BoundReport,
    Method,
    all_bounds,
    baseline_bound,
    conjugated_generators,
    epsilon_max,
    eta_table,
    theorem1_bound,
    theorem2_bound,
)
from .circuit import Circuit, Gate, Mode, PerturbationSpec, fidelity, ideal_state, perturbed_state, rotation_gate
from .h0solver import H0Method, H0Result, compute_h0, h0_appendix_c, h0_triangle_upper, h0_vertex_enum
from .verify import VerificationConfig, VerificationReport, monte_carlo_check

__all__ = [
    "BoundReport",
    "Circuit",
    "Gate",
    "H0Method",
    "H0Result",
    "Method",
    "Mode",
    "PerturbationSpec",
    "VerificationConfig",
    "VerificationReport",
    "all_bounds",
    "baseline_bound",
    "compute_h0",
    "conjugated_generators",
    "epsilon_max",
    "eta_table",
    "fidelity",
    "h0_appendix_c",
    "h0_triangle_upper",
    "h0_vertex_enum",
    "ideal_state",
    "monte_carlo_check",
    "perturbed_state",
    "rotation_gate",
    "theorem1_bound",
    "theorem2_bound",
]

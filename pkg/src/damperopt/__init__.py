"""Optimal placement and viscosity of a single viscous damper in 1-D
vibrational systems, via closed-form minimization of weighted Lyapunov
traces, with a dense oracle to back every formula."""

from .errors import (
    DegenerateSystemError,
    UnstableIntegrationError,
    NoAdmissiblePositionError,
)
from .models import (
    ModelKind,
    ModalModel,
    DamperVector,
    ChainMatrices,
    chain_model,
    string_model,
    rod_model,
    chain_damper,
    chain_damper_continuous,
    string_damper,
    damper_norm_closed_form,
    assemble_chain_matrices,
    chain_eigenvector_matrix,
    sturm_chain_eigenvalues,
)
from .lyapunov import (
    PhaseMatrix,
    LyapunovSolution,
    assemble_phase_matrix,
    solve_lyapunov,
    dual_trace_pair,
    solution_positive_definite,
    simulated_displacement_integral,
    energy_norm_pair,
)
from .trace_formula import (
    Criterion,
    SpectralWeights,
    TraceCoefficients,
    energy_weights,
    displacement_weights,
    trace_coefficients,
    trace_at,
    optimal_viscosity,
    optimal_trace,
    one_dof_closed_forms,
)
from .positions import (
    SweepRow,
    SweepResult,
    DampingDesign,
    ScalingFit,
    sweep_positions,
    best_position,
    scaling_ratios,
)
from .asymptotics import (
    DisplacementLimits,
    AsymptoticReport,
    energy_a_slope,
    energy_b1_slope,
    b2_tail_sum,
    b3_tail_bound,
    displacement_scaling_limits,
    asymptotic_report,
)

__version__ = "0.1.0"

"""Collective decay of qutrits into a common environment.

One excitation shared among n three-level emitters coupled to the same
zero-temperature bath: brute-force Lindblad propagation, the exact
invariant-subspace solution, and pairwise correlation measures (negativity
and a geometric-discord lower bound with a measurement-search oracle).
"""

from .linalg import (
    DensityMatrix,
    InvariantViolation,
    JacobiConvergenceError,
    gell_mann,
    hermitian_eigenvalues,
    kron,
    partial_trace,
    partial_transpose,
    trace_distance,
    trace_norm,
)
from .lindblad import (
    IntegratorConfig,
    ModelParams,
    build_collective_jump,
    dissipator,
    integrate,
)
from .dfs import (
    DfsBasis,
    DfsCoefficients,
    coefficients_closed_form,
    coefficients_ode,
    full_state,
    reduced_pair_state,
)
from .correlations import (
    GellMannDecomposition,
    c_matrix,
    discord_hs_oracle,
    discord_lower_bound,
    gm_decompose,
    negativity,
)
from .checks import CheckResult, run_checks

__version__ = "0.1.0"

__all__ = [
    "DensityMatrix",
    "InvariantViolation",
    "JacobiConvergenceError",
    "gell_mann",
    "hermitian_eigenvalues",
    "kron",
    "partial_trace",
    "partial_transpose",
    "trace_distance",
    "trace_norm",
    "IntegratorConfig",
    "ModelParams",
    "build_collective_jump",
    "dissipator",
    "integrate",
    "DfsBasis",
    "DfsCoefficients",
    "coefficients_closed_form",
    "coefficients_ode",
    "full_state",
    "reduced_pair_state",
    "GellMannDecomposition",
    "c_matrix",
    "discord_hs_oracle",
    "discord_lower_bound",
    "gm_decompose",
    "negativity",
    "CheckResult",
    "run_checks",
]

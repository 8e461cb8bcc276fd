"""Optimal sparse conductance networks for synchronizing identical LC oscillators."""
from .deflation import DeflationBasis, make_basis, min_trace_solution, trace_via_pinv, trace_via_shift
from .errors import (
    DisconnectedError,
    NotLaplacianError,
    NotPSDError,
    SolverError,
    SyncNetError,
    ValidationError,
)
from .laplacian import LaplacianCandidate, MembershipReport, check_membership, from_matrix, to_matrix
from .linalg import EigDecomp, laplacian_pinv, solve_lyapunov_dense, sqrt_psd, sym_eig
from .objective import (
    ObjectiveValue,
    ProblemSpec,
    check_lyapunov_blocks,
    eval_full_lyapunov_oracle,
    eval_J,
    grad_J,
)
from .sdp import SdpProblemData, assemble_sdp, verify_substitution, write_sdpa
from .solver import (
    EdgeWeightVector,
    SolveReport,
    Termination,
    all_to_all_optimal,
    polish_on_support,
    reweighted_l1,
    solve_gamma0,
    solve_prox,
)

__all__ = [
    "DeflationBasis",
    "make_basis",
    "min_trace_solution",
    "trace_via_pinv",
    "trace_via_shift",
    "DisconnectedError",
    "NotLaplacianError",
    "NotPSDError",
    "SolverError",
    "SyncNetError",
    "ValidationError",
    "LaplacianCandidate",
    "MembershipReport",
    "check_membership",
    "from_matrix",
    "to_matrix",
    "EigDecomp",
    "laplacian_pinv",
    "solve_lyapunov_dense",
    "sqrt_psd",
    "sym_eig",
    "ObjectiveValue",
    "ProblemSpec",
    "check_lyapunov_blocks",
    "eval_full_lyapunov_oracle",
    "eval_J",
    "grad_J",
    "SdpProblemData",
    "assemble_sdp",
    "verify_substitution",
    "write_sdpa",
    "EdgeWeightVector",
    "SolveReport",
    "Termination",
    "all_to_all_optimal",
    "polish_on_support",
    "reweighted_l1",
    "solve_gamma0",
    "solve_prox",
]

__version__ = "0.1.0"

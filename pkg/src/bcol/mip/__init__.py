"""Integer programming by representatives: model, fixings, solvers, oracle."""

from .bb import BBResult, branch_and_bound
from .lpfile import SolutionFormatError, export_lp, format_solution, import_solution
from .model import (
    FAMILIES,
    Constraint,
    InfeasibleFixingError,
    Model,
    apply_improvement_fixing,
    apply_lower_bound_fixing,
    build_formulation,
    isolated_anti_neighbors,
    representatives,
    warm_start_from_coloring,
)
from .oracle import brute_force_chi_b
from .solve import (
    BACKENDS,
    BackendError,
    MipSolution,
    SolverBackend,
    local_search_fixings,
    mip_local_search,
    solve,
)

__all__ = [
    "BACKENDS",
    "BBResult",
    "BackendError",
    "Constraint",
    "FAMILIES",
    "InfeasibleFixingError",
    "MipSolution",
    "Model",
    "SolutionFormatError",
    "SolverBackend",
    "apply_improvement_fixing",
    "apply_lower_bound_fixing",
    "branch_and_bound",
    "brute_force_chi_b",
    "build_formulation",
    "export_lp",
    "format_solution",
    "import_solution",
    "isolated_anti_neighbors",
    "local_search_fixings",
    "mip_local_search",
    "representatives",
    "solve",
    "warm_start_from_coloring",
]

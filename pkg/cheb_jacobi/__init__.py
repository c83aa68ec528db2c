"""Chebyshev-weighted Jacobi iteration for Poisson problems on structured grids."""
from .lib.chebyshev import (
    AmplificationProfile,
    WeightSchedule,
    amplification,
    amplification_bound,
    estimate_sor_omega,
    geometric_mean_inverse,
    harmonic_mean,
    log_abs_chebyshev,
    make_weights,
    min_cycle_size,
    read_schedule,
    rescale_kappa,
    write_schedule,
)
from .lib.const import VERSION as __version__
from .lib.grid import BoundaryCondition, Field, Grid, fill_ghosts, inf_norm_diff
from .lib.ordering import (
    OrderingPlan,
    apply_ordering,
    default_plan,
    interleaved,
    lebedev_finogenov,
)
from .lib.solver import (
    Problem,
    SolverReport,
    cjm_solve,
    classic_solve,
    sor_optimal_omega,
    weighted_jacobi_sweep,
)
from .lib.stencil import (
    SpectralBounds,
    StencilFamily,
    StencilSpec,
    apply_laplacian,
    diagonal_coeff,
    kappa_bounds,
    kappa_symbol,
)

__all__ = [
    "AmplificationProfile",
    "BoundaryCondition",
    "Field",
    "Grid",
    "OrderingPlan",
    "Problem",
    "SolverReport",
    "SpectralBounds",
    "StencilFamily",
    "StencilSpec",
    "WeightSchedule",
    "__version__",
    "amplification",
    "amplification_bound",
    "apply_laplacian",
    "apply_ordering",
    "cjm_solve",
    "classic_solve",
    "default_plan",
    "diagonal_coeff",
    "estimate_sor_omega",
    "fill_ghosts",
    "geometric_mean_inverse",
    "harmonic_mean",
    "inf_norm_diff",
    "interleaved",
    "kappa_bounds",
    "kappa_symbol",
    "lebedev_finogenov",
    "log_abs_chebyshev",
    "make_weights",
    "min_cycle_size",
    "read_schedule",
    "rescale_kappa",
    "sor_optimal_omega",
    "weighted_jacobi_sweep",
]

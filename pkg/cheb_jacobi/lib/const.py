"""Constants for cheb-jacobi."""
from enum import Enum

# Base component constants
NAME = "cheb-jacobi"
VERSION = "0.1.0"

ISSUE_URL = "https://github.com/weltenwort/cheb-jacobi/issues"

# Problems
PROBLEM_LAPLACE2D_NEUMANN = "laplace2d-neumann"
PROBLEM_POISSON3D_SPHERE = "poisson3d-sphere"
PROBLEM_POISSON2D_EXP = "poisson2d-exp"
PROBLEMS = [PROBLEM_LAPLACE2D_NEUMANN, PROBLEM_POISSON3D_SPHERE, PROBLEM_POISSON2D_EXP]

# Stencil names accepted in configuration files
STENCIL_FIVE_POINT = "five-point"
STENCIL_SEVEN_POINT = "seven-point"
STENCIL_NINE_POINT = "nine-point"
STENCIL_SEVENTEEN_POINT = "seventeen-point"
STENCIL_GENERAL_COMBO = "general-combo"
STENCILS = [
    STENCIL_FIVE_POINT,
    STENCIL_SEVEN_POINT,
    STENCIL_NINE_POINT,
    STENCIL_SEVENTEEN_POINT,
    STENCIL_GENERAL_COMBO,
]

# Methods
METHOD_CJM = "cjm"
METHOD_JACOBI = "jacobi"
METHOD_GAUSS_SEIDEL = "gauss-seidel"
METHOD_SOR = "sor"
METHODS = [METHOD_CJM, METHOD_JACOBI, METHOD_GAUSS_SEIDEL, METHOD_SOR]

# Ordering names accepted in configuration files
ORDERING_DEFAULT = "default"

# Schedule bounds for derived (octant) problems
SCHEDULE_BOUNDS_PROBLEM = "problem"
SCHEDULE_BOUNDS_FULL_DOMAIN = "full-domain"

# Verification suites
SUITES = ["weights", "orderings", "bounds", "theorems"]

# Solver guards
DIVERGENCE_FACTOR = 1e12

# Exit codes
EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIGURATION_ERROR = 2

# Output formats
RESIDUAL_CSV_HEADER = ["iteration", "residual"]
SUMMARY_CSV_HEADER = [
    "method",
    "iterations",
    "converged",
    "final_residual",
    "predicted_bound",
    "achieved_reduction",
    "speedup_vs_jacobi",
]


class BoundaryKind(str, Enum):
    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"


class AxisLayout(str, Enum):
    VERTEX = "vertex"
    CELL = "cell"


STARTUP_MESSAGE = f"""
-------------------------------------------------------------------
{NAME}
Version: {VERSION}
If you have any issues with this you need to open an issue here:
{ISSUE_URL}
-------------------------------------------------------------------
"""

"""Second-order finite-difference solver for the space-time tempered
fractional diffusion-wave equation, with tools to check its convergence,
positivity and stability properties numerically.

>>> from tempered_wave import manufactured_problem, Discretization, solve
>>> problem = manufactured_problem(alpha=1.5, gamma=2.0, lam=0.1)
>>> result = solve(problem, Discretization(M=20, N=10))
"""

from ._version import __version__
from .exceptions import DomainError, InvariantViolation, UnsupportedFeatureError
from .kernels import (
    GrunwaldSeq,
    RieszStencil,
    TemperedCoeffs,
    generating_fn_value,
    grunwald_coeffs,
    riesz_weights,
    tempered_coeffs,
    tempered_coeffs_oracle,
)
from .operators import DiscreteRiesz, SymToeplitz, apply, assemble_riesz, definiteness_check
from .problems import ProblemSpec, exact_riesz_of_manufactured, manufactured_problem
from .solver import Discretization, SolveResult, solve
from .analysis import (
    ConvergenceReport,
    ErrorReport,
    build_L_matrix,
    convergence_study,
    error_report,
    psd_check,
    stability_experiment,
)

__all__ = [
    "__version__",
    "DomainError",
    "InvariantViolation",
    "UnsupportedFeatureError",
    "GrunwaldSeq",
    "RieszStencil",
    "TemperedCoeffs",
    "generating_fn_value",
    "grunwald_coeffs",
    "riesz_weights",
    "tempered_coeffs",
    "tempered_coeffs_oracle",
    "DiscreteRiesz",
    "SymToeplitz",
    "apply",
    "assemble_riesz",
    "definiteness_check",
    "ProblemSpec",
    "exact_riesz_of_manufactured",
    "manufactured_problem",
    "Discretization",
    "SolveResult",
    "solve",
    "ConvergenceReport",
    "ErrorReport",
    "build_L_matrix",
    "convergence_study",
    "error_report",
    "psd_check",
    "stability_experiment",
]

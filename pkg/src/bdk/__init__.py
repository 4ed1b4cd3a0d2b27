"""bdk: exactly solvable birth-death processes.

Transition kernels of 18 birth-death chains in closed form, by spectral
expansion over (q-)hypergeometric orthogonal polynomials, cross-validated
against dense linear algebra and exact stochastic simulation.
"""
from . import models, oracle, qspecial, spectral, verify
from .defaults import all_default_models, default_model, defaults_table
from .models import (
    FAMILIES,
    FAMILY_ORDER,
    ConstraintViolationError,
    ModelDegeneracyError,
    ModelParams,
    NonNormalizableError,
    StateSpace,
    get_family,
    validate,
)
from .spectral import (
    CutoffError,
    Distribution,
    InternalConsistencyError,
    KernelResult,
    SpectralData,
    build,
    evolve,
    kernel,
    stationary_distribution,
    transition_matrix,
    transition_probability,
    transition_probability_alt,
)

__version__ = "0.1.0"

__all__ = [
    "models", "oracle", "qspecial", "spectral", "verify",
    "FAMILIES", "FAMILY_ORDER", "get_family", "validate",
    "ModelParams", "StateSpace", "Distribution", "SpectralData", "KernelResult",
    "ConstraintViolationError", "ModelDegeneracyError", "NonNormalizableError",
    "InternalConsistencyError", "CutoffError",
    "build", "kernel", "transition_matrix", "transition_probability",
    "transition_probability_alt", "evolve", "stationary_distribution",
    "default_model", "all_default_models", "defaults_table",
    "__version__",
]

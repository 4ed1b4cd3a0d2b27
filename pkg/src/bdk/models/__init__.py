"""Model catalog and per-family closed-form evaluation."""
from .base import (
    ConstraintViolationError,
    FamilySpec,
    ModelDegeneracyError,
    ModelParams,
    NonNormalizableError,
    StateSpace,
    birth_rate,
    death_rate,
    dual_poly_table,
    dual_polynomial,
    energy,
    ground_state_sq,
    log_ground_state_sq,
    log_norm_const_sq,
    norm_const_sq,
    polynomial,
    sinusoidal,
    truncate_state_space,
    validate,
)
from .catalog import FAMILIES, FAMILY_ORDER, get_family

__all__ = [
    "ConstraintViolationError",
    "ModelDegeneracyError",
    "NonNormalizableError",
    "FamilySpec",
    "ModelParams",
    "StateSpace",
    "FAMILIES",
    "FAMILY_ORDER",
    "get_family",
    "validate",
    "birth_rate",
    "death_rate",
    "energy",
    "sinusoidal",
    "ground_state_sq",
    "log_ground_state_sq",
    "norm_const_sq",
    "log_norm_const_sq",
    "polynomial",
    "dual_polynomial",
    "dual_poly_table",
    "truncate_state_space",
]

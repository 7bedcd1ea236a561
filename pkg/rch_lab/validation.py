"""Validation utilities.

Exception hierarchy, status enums and the pure input checks shared by the
library and the CLI.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np


class ValidationError(Exception):
    """Raised when an input violates a model or discretization contract."""

    pass


class ModelInvalidError(ValidationError):
    """Raised when (omega, eps, mu) lie outside the admissible region."""

    pass


class GridError(ValidationError):
    """Raised for malformed grids or fields that do not match their grid."""

    pass


class NonFiniteFieldError(ValidationError):
    """Raised when a field holds NaN or infinite entries."""

    pass


class ScalingError(ValidationError):
    """Raised when a state is handed to an operation of the other scaling."""

    pass


class ConfigError(ValidationError):
    """Raised for invalid run configuration; names the offending key."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


class Scaling(Enum):
    """Which form of the equation a state lives in."""

    PHYSICAL = "physical"
    NORMALIZED = "normalized"


class TerminationStatus(Enum):
    """How an evolution ended."""

    COMPLETED = "Completed"
    SLOPE_BLOWUP = "SlopeBlowup"
    NON_FINITE = "NonFinite"


MIN_GRID_NODES = 8

# Periodic surrogate of decaying data on the line
BOUNDARY_FRACTION = 0.1
BOUNDARY_TOLERANCE = 1e-12


@dataclass
class ValidationResult:
    """Result of a validation check."""

    is_valid: bool
    error_message: str | None = None


def validate_grid_size(n: int) -> ValidationResult:
    """Validate the node count is a power of two and at least 8.

    Args:
        n: Number of grid nodes

    Returns:
        ValidationResult with status and error message if invalid
    """
    if n < MIN_GRID_NODES or n & (n - 1) != 0:
        return ValidationResult(
            is_valid=False,
            error_message=f"Node count {n} must be a power of two >= {MIN_GRID_NODES}",
        )
    return ValidationResult(is_valid=True)


def validate_positive(name: str, value: float) -> ValidationResult:
    """Validate a real parameter is finite and strictly positive."""
    if not np.isfinite(value) or value <= 0:
        return ValidationResult(
            is_valid=False,
            error_message=f"{name} must be positive, got {value!r}",
        )
    return ValidationResult(is_valid=True)


def validate_finite(values: np.ndarray) -> ValidationResult:
    """Validate every entry of a field is finite.

    Args:
        values: Field samples

    Returns:
        ValidationResult with status and error message if invalid
    """
    bad = np.count_nonzero(~np.isfinite(values))
    if bad:
        return ValidationResult(
            is_valid=False,
            error_message=f"Field has {bad} non-finite entries",
        )
    return ValidationResult(is_valid=True)


def validate_boundary_decay(
    values: np.ndarray,
    fraction: float = BOUNDARY_FRACTION,
    tol: float = BOUNDARY_TOLERANCE,
) -> ValidationResult:
    """Validate a datum is negligible near both ends of the periodic interval.

    Line-like experiments on [0, L) are only faithful when the datum vanishes
    within `fraction` of the length from either end.

    Args:
        values: Field samples on the grid
        fraction: Width of each boundary band as a share of the node count
        tol: Largest admissible magnitude inside the bands

    Returns:
        ValidationResult with status and error message if invalid
    """
    band = max(1, int(round(fraction * len(values))))
    edge = max(np.max(np.abs(values[:band])), np.max(np.abs(values[-band:])))
    if edge >= tol:
        return ValidationResult(
            is_valid=False,
            error_message=f"Datum reaches {edge:.3e} within {fraction:.0%} of the boundary",
        )
    return ValidationResult(is_valid=True)

"""Numerical laboratory for the rotation-Camassa-Holm equation.

Exports:
- Params: model constants and coefficient identities
- Nonlocal: periodic grid and spectral operator kit
- Solver: RK4 evolution in physical and normalized scalings
- Diagnostics: conserved quantities, slopes, free surface
- Breaking: breaking certificates and characteristics
- Initial data: datum families and sample files
- Validation: errors, enums and input checks
- Logging: Structured JSON logging
"""

from .breaking import (
    BreakingCertificate,
    CharacteristicTrace,
    LaunchConditions,
    breaking_constant,
    certify,
    convolution_bound_margin,
    launch_conditions,
    riccati_h,
    track_characteristic,
)
from .diagnostics import (
    ConservedTriple,
    SlopeReport,
    conserved,
    momentum_density,
    slope_report,
    surface_elevation,
)
from .initial_data import (
    FAMILIES,
    InitialDataSpec,
    build_initial_data,
    constant,
    gaussian_bump,
    load_sample_file,
    neg_slope,
    random_modes,
    sine,
)
from .logging_utils import StructuredLogger, structured_logger
from .nonlocal_ops import (
    Field,
    PeriodicGrid,
    conv_half_kernels,
    dealiased_product,
    helmholtz_inverse,
    interpolate,
    make_field,
    spectral_derivative,
    spectral_shift,
)
from .params import (
    OMEGA_MAX,
    IdentityCheck,
    ModelParameters,
    admissible_omega_limit,
    derive_params,
    identity_report,
)
from .solver import (
    RunConfig,
    StageRecord,
    Trajectory,
    WaveState,
    evolve,
    resolve_blowup_threshold,
    resolve_time_step,
    rhs_ch_with_drift,
    rhs_normalized,
    rhs_physical,
    scale_map,
    to_classical_ch,
    unscale_map,
)
from .validation import (
    ConfigError,
    GridError,
    ModelInvalidError,
    NonFiniteFieldError,
    Scaling,
    ScalingError,
    TerminationStatus,
    ValidationError,
    ValidationResult,
    validate_boundary_decay,
    validate_finite,
    validate_grid_size,
)

__all__ = [
    # Params
    "ModelParameters",
    "IdentityCheck",
    "derive_params",
    "identity_report",
    "admissible_omega_limit",
    "OMEGA_MAX",
    # Nonlocal
    "Field",
    "PeriodicGrid",
    "make_field",
    "spectral_derivative",
    "helmholtz_inverse",
    "conv_half_kernels",
    "dealiased_product",
    "interpolate",
    "spectral_shift",
    # Solver
    "WaveState",
    "RunConfig",
    "StageRecord",
    "Trajectory",
    "rhs_physical",
    "rhs_normalized",
    "rhs_ch_with_drift",
    "evolve",
    "resolve_time_step",
    "resolve_blowup_threshold",
    "scale_map",
    "unscale_map",
    "to_classical_ch",
    # Diagnostics
    "ConservedTriple",
    "SlopeReport",
    "conserved",
    "slope_report",
    "surface_elevation",
    "momentum_density",
    # Breaking
    "BreakingCertificate",
    "CharacteristicTrace",
    "LaunchConditions",
    "breaking_constant",
    "certify",
    "track_characteristic",
    "convolution_bound_margin",
    "riccati_h",
    "launch_conditions",
    # Initial data
    "FAMILIES",
    "InitialDataSpec",
    "build_initial_data",
    "gaussian_bump",
    "neg_slope",
    "sine",
    "constant",
    "random_modes",
    "load_sample_file",
    # Validation
    "Scaling",
    "TerminationStatus",
    "ValidationError",
    "ModelInvalidError",
    "GridError",
    "NonFiniteFieldError",
    "ScalingError",
    "ConfigError",
    "ValidationResult",
    "validate_grid_size",
    "validate_finite",
    "validate_boundary_decay",
    # Logging
    "StructuredLogger",
    "structured_logger",
]

"""Periodic grid and spectral operator kit.

All operators act on real fields through numpy's real FFT. Odd derivatives
drop the Nyquist mode; even derivatives keep it.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .validation import (
    GridError,
    NonFiniteFieldError,
    ValidationError,
    validate_finite,
    validate_grid_size,
    validate_positive,
)

# Field is a plain float array aligned with the grid nodes
Field = np.ndarray

DERIVATIVE_ORDERS = (1, 2, 3)
MIN_PRODUCT_FACTORS = 2
MAX_PRODUCT_FACTORS = 4


def _frozen(values: np.ndarray) -> np.ndarray:
    values.setflags(write=False)
    return values


@dataclass(frozen=True)
class PeriodicGrid:
    """Uniform grid on [0, length) with periodic wrap."""

    length: float
    n: int

    def __post_init__(self):
        result = validate_positive("length", self.length)
        if not result.is_valid:
            raise GridError(result.error_message)
        result = validate_grid_size(self.n)
        if not result.is_valid:
            raise GridError(result.error_message)

    @property
    def spacing(self) -> float:
        return self.length / self.n

    @cached_property
    def nodes(self) -> np.ndarray:
        """Node j sits at j * length / n."""
        return _frozen(self.length * np.arange(self.n) / self.n)

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        """Signed wavenumbers in standard transform ordering."""
        return _frozen(2 * np.pi / self.length * np.fft.fftfreq(self.n, d=1.0 / self.n))

    @cached_property
    def rfft_wavenumbers(self) -> np.ndarray:
        """Nonnegative wavenumbers matching the real transform layout."""
        return _frozen(2 * np.pi / self.length * np.arange(self.n // 2 + 1))

    @property
    def dealias_cutoff(self) -> int:
        """Largest retained mode index under the half rule."""
        return self.n // 4


def make_field(grid: PeriodicGrid, values) -> Field:
    """Validate samples against a grid and return them as a float array.

    Raises:
        GridError: If the length does not match the node count
        NonFiniteFieldError: If any sample is NaN or infinite
    """
    field = np.array(values, dtype=float)
    if field.shape != (grid.n,):
        raise GridError(f"Field shape {field.shape} does not match grid of {grid.n} nodes")
    result = validate_finite(field)
    if not result.is_valid:
        raise NonFiniteFieldError(result.error_message)
    return field


def _derivative_symbol(grid: PeriodicGrid, order: int) -> np.ndarray:
    symbol = (1j * grid.rfft_wavenumbers) ** order
    if order % 2 == 1:
        symbol = symbol.copy()
        symbol[-1] = 0.0
    return symbol


def spectral_derivative(grid: PeriodicGrid, f: Field, order: int = 1) -> Field:
    """Differentiate a periodic field by wavenumber multiplication.

    Args:
        grid: Periodic grid
        f: Field samples
        order: Derivative order, one of 1, 2, 3

    Returns:
        The order-th derivative on the same nodes

    Raises:
        ValidationError: If order is not supported
    """
    if order not in DERIVATIVE_ORDERS:
        raise ValidationError(f"Derivative order must be one of {DERIVATIVE_ORDERS}, got {order}")
    return np.fft.irfft(np.fft.rfft(f) * _derivative_symbol(grid, order), n=grid.n)


def helmholtz_inverse(grid: PeriodicGrid, lam: float, f: Field) -> Field:
    """Solve (1 - lam * d^2/dx^2) g = f on the periodic grid.

    Raises:
        ValidationError: If lam is not positive
    """
    result = validate_positive("lam", lam)
    if not result.is_valid:
        raise ValidationError(result.error_message)
    kk = grid.rfft_wavenumbers
    return np.fft.irfft(np.fft.rfft(f) / (1.0 + lam * kk * kk), n=grid.n)


def helmholtz_forward(grid: PeriodicGrid, lam: float, f: Field) -> Field:
    """Apply (1 - lam * d^2/dx^2)."""
    return f - lam * spectral_derivative(grid, f, 2)


def conv_half_kernels(grid: PeriodicGrid, f: Field) -> tuple[Field, Field]:
    """Convolve with the one-sided kernels of the unit Helmholtz operator.

    p+ and p- have symbols 1/(2(1 + ik)) and 1/(2(1 - ik)), so that
    p+ + p- = (1 - d^2)^-1 and p- - p+ = d/dx (1 - d^2)^-1 hold exactly.

    Returns:
        (p+ * f, p- * f)
    """
    f_hat = np.fft.rfft(f)
    kk = grid.rfft_wavenumbers
    plus = np.fft.irfft(f_hat * (0.5 / (1.0 + 1j * kk)), n=grid.n)
    minus = np.fft.irfft(f_hat * (0.5 / (1.0 - 1j * kk)), n=grid.n)
    return plus, minus


def _truncate(grid: PeriodicGrid, f_hat: np.ndarray) -> np.ndarray:
    f_hat[grid.dealias_cutoff + 1 :] = 0.0
    return f_hat


def dealias(grid: PeriodicGrid, f: Field) -> Field:
    """Drop every mode above the half-rule cutoff."""
    return np.fft.irfft(_truncate(grid, np.fft.rfft(f)), n=grid.n)


def dealiased_product(grid: PeriodicGrid, fs: list[Field]) -> Field:
    """Pointwise product with spectral truncation of inputs and output.

    Args:
        grid: Periodic grid
        fs: Two to four factor fields

    Returns:
        Truncated product field

    Raises:
        ValidationError: If the factor count is out of range
    """
    if not MIN_PRODUCT_FACTORS <= len(fs) <= MAX_PRODUCT_FACTORS:
        raise ValidationError(
            f"Product needs {MIN_PRODUCT_FACTORS}-{MAX_PRODUCT_FACTORS} factors, got {len(fs)}"
        )
    product = np.ones(grid.n)
    for f in fs:
        product = product * dealias(grid, f)
    return dealias(grid, product)


def interpolate(grid: PeriodicGrid, f: Field, x) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate the trigonometric interpolant of f and its slope off the grid.

    The interpolant reproduces f exactly at the nodes. The Nyquist mode enters
    as a cosine and is dropped from the slope.

    Args:
        grid: Periodic grid
        f: Field samples
        x: Scalar or array of positions (any real values)

    Returns:
        (values, slopes) with the shape of x
    """
    x = np.asarray(x, dtype=float)
    f_hat = np.fft.rfft(f) / grid.n
    kk = grid.rfft_wavenumbers
    weights = np.full(kk.shape, 2.0)
    weights[0] = 1.0
    weights[-1] = 1.0
    phase = np.exp(1j * np.multiply.outer(x, kk))
    coeffs = weights * f_hat
    values = np.real(phase @ coeffs)
    slope_coeffs = coeffs * 1j * kk
    slope_coeffs[-1] = 0.0
    slopes = np.real(phase @ slope_coeffs)
    return values, slopes


def spectral_shift(grid: PeriodicGrid, f: Field, shift: float) -> Field:
    """Return samples of f(x - shift) through the trigonometric interpolant."""
    phase = np.exp(-1j * grid.rfft_wavenumbers * shift)
    return np.fft.irfft(np.fft.rfft(f) * phase, n=grid.n)


def periodic_integral(grid: PeriodicGrid, f: Field) -> float:
    """Trapezoid rule over one period."""
    return float(grid.spacing * np.sum(f))

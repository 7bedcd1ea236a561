"""Initial-data families and the two-column sample-file reader."""

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .nonlocal_ops import Field, PeriodicGrid, make_field
from .validation import ValidationError

FAMILIES = ("gaussian_bump", "neg_slope", "sine", "constant", "random_modes", "file")


@dataclass(frozen=True)
class InitialDataSpec:
    """A named family with its parameters, or a sample file."""

    family: str = "gaussian_bump"
    amplitude: float = 0.1
    center: float | None = None
    width: float = 1.0
    mode: int = 1
    seed: int = 0
    data_file: Path | None = None


def gaussian_bump(grid: PeriodicGrid, amplitude: float, center: float, width: float) -> Field:
    """a * exp(-((x - x_c) / w)^2)."""
    s = (grid.nodes - center) / width
    return amplitude * np.exp(-s * s)


def neg_slope(grid: PeriodicGrid, amplitude: float, center: float, width: float) -> Field:
    """-a * s * exp(-s^2) with s = (x - x_c) / w.

    Vanishes at x_c where the slope is -a / w, the steepest descent of the profile.
    """
    s = (grid.nodes - center) / width
    return -amplitude * s * np.exp(-s * s)


def sine(grid: PeriodicGrid, amplitude: float, mode: int) -> Field:
    """a * sin(2 pi mode x / L)."""
    return amplitude * np.sin(2 * np.pi * mode * grid.nodes / grid.length)


def constant(grid: PeriodicGrid, amplitude: float) -> Field:
    return np.full(grid.n, float(amplitude))


def random_modes(grid: PeriodicGrid, amplitude: float, mode: int, seed: int) -> Field:
    """Random field built from modes 0..mode, scaled to max |u| = amplitude.

    Args:
        grid: Periodic grid
        amplitude: Target sup norm
        mode: Highest mode index, at most n / 4 so products stay unaliased
        seed: Seed of numpy's default generator

    Raises:
        ValidationError: If mode is out of range
    """
    if not 1 <= mode <= grid.dealias_cutoff:
        raise ValidationError(f"mode must lie in [1, {grid.dealias_cutoff}], got {mode}")
    rng = np.random.default_rng(seed)
    coeffs = np.zeros(grid.n // 2 + 1, dtype=complex)
    coeffs[: mode + 1] = rng.standard_normal(mode + 1) + 1j * rng.standard_normal(mode + 1)
    coeffs[0] = coeffs[0].real
    field = np.fft.irfft(coeffs, n=grid.n)
    peak = np.max(np.abs(field))
    return amplitude * field / peak


def load_sample_file(grid: PeriodicGrid, path: Path) -> Field:
    """Read two-column (x, u) samples and resample them periodically onto the grid.

    Raises:
        ValidationError: If the file cannot be read or has the wrong shape
    """
    try:
        samples = np.loadtxt(path, dtype=float, ndmin=2)
    except (OSError, ValueError) as e:
        raise ValidationError(f"Cannot read initial data file {path}: {e}") from e

    if samples.shape[1] != 2 or samples.shape[0] < 2:
        raise ValidationError(f"Initial data file {path} must hold at least two (x, u) rows")

    x, u = samples[:, 0], samples[:, 1]
    order = np.argsort(x)
    values = np.interp(grid.nodes, x[order], u[order], period=grid.length)
    return make_field(grid, values)


def build_initial_data(grid: PeriodicGrid, spec: InitialDataSpec) -> Field:
    """Sample the requested family on the grid.

    Raises:
        ValidationError: For unknown families or missing parameters
    """
    center = grid.length / 2 if spec.center is None else spec.center

    if spec.family == "gaussian_bump":
        values = gaussian_bump(grid, spec.amplitude, center, spec.width)
    elif spec.family == "neg_slope":
        values = neg_slope(grid, spec.amplitude, center, spec.width)
    elif spec.family == "sine":
        values = sine(grid, spec.amplitude, spec.mode)
    elif spec.family == "constant":
        values = constant(grid, spec.amplitude)
    elif spec.family == "random_modes":
        values = random_modes(grid, spec.amplitude, spec.mode, spec.seed)
    elif spec.family == "file":
        if spec.data_file is None:
            raise ValidationError("family 'file' needs a data_file")
        values = load_sample_file(grid, spec.data_file)
    else:
        raise ValidationError(f"Unknown initial data family {spec.family!r}")

    return make_field(grid, values)

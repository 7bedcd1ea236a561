"""Shared fixtures."""

import numpy as np
import pytest

from rch_lab.nonlocal_ops import PeriodicGrid
from rch_lab.params import derive_params


@pytest.fixture
def params_still():
    """Non-rotating model."""
    return derive_params(0.0, 0.1, 0.01)


@pytest.fixture
def params_mild():
    return derive_params(0.3, 0.1, 0.01)


@pytest.fixture
def params_strong():
    return derive_params(0.5, 0.1, 0.01)


@pytest.fixture
def unit_grid():
    """2*pi-periodic grid with 64 nodes."""
    return PeriodicGrid(2 * np.pi, 64)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def band_limited(grid: PeriodicGrid, rng: np.random.Generator, modes: int | None = None):
    """Random real field using only modes up to `modes` (default n/4)."""
    modes = grid.n // 4 if modes is None else modes
    coeffs = np.zeros(grid.n // 2 + 1, dtype=complex)
    coeffs[: modes + 1] = rng.standard_normal(modes + 1) + 1j * rng.standard_normal(modes + 1)
    coeffs[0] = coeffs[0].real
    coeffs[1 : modes + 1] /= np.arange(1, modes + 1)
    return np.fft.irfft(coeffs, n=grid.n) * grid.n / 8


@pytest.fixture
def random_field(rng):
    """Factory for band-limited random fields sharing the seeded generator."""

    def make(grid: PeriodicGrid, modes: int | None = None):
        return band_limited(grid, rng, modes)

    return make


@pytest.fixture
def read_key_values():
    """Reader for key = value artifacts (manifests, certificates)."""

    def read(path):
        entries = {}
        for line in path.read_text(encoding="utf-8").splitlines():
            key, sep, value = line.partition("=")
            if sep:
                entries[key.strip()] = value.strip()
        return entries

    return read


@pytest.fixture
def read_csv_columns():
    """Reader for numeric CSV artifacts, keyed by column name."""

    def read(path):
        data = np.genfromtxt(path, delimiter=",", names=True, dtype=float)
        return {name: np.atleast_1d(data[name]) for name in data.dtype.names}

    return read

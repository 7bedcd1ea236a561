"""Tests for the periodic grid and spectral operator kit."""

import numpy as np
import pytest

from rch_lab.nonlocal_ops import (
    PeriodicGrid,
    conv_half_kernels,
    dealiased_product,
    helmholtz_forward,
    helmholtz_inverse,
    interpolate,
    make_field,
    periodic_integral,
    spectral_derivative,
    spectral_shift,
)
from rch_lab.validation import GridError, NonFiniteFieldError, ValidationError


class TestPeriodicGrid:
    def test_nodes_and_spacing(self):
        grid = PeriodicGrid(10.0, 16)
        assert grid.spacing * grid.n == pytest.approx(10.0, abs=1e-15)
        np.testing.assert_allclose(grid.nodes, np.arange(16) * 10.0 / 16)

    def test_wavenumbers_are_signed_multiples(self):
        grid = PeriodicGrid(4 * np.pi, 8)
        np.testing.assert_allclose(grid.wavenumbers, 0.5 * np.array([0, 1, 2, 3, -4, -3, -2, -1]))

    @pytest.mark.parametrize("n", [4, 12, 100, 0])
    def test_rejects_bad_node_counts(self, n):
        with pytest.raises(GridError):
            PeriodicGrid(1.0, n)

    def test_rejects_nonpositive_length(self):
        with pytest.raises(GridError):
            PeriodicGrid(0.0, 16)

    def test_cached_arrays_are_read_only(self, unit_grid):
        with pytest.raises(ValueError):
            unit_grid.nodes[0] = 1.0


class TestFields:
    def test_rejects_wrong_length(self, unit_grid):
        with pytest.raises(GridError):
            make_field(unit_grid, np.zeros(10))

    def test_rejects_non_finite(self, unit_grid):
        values = np.zeros(unit_grid.n)
        values[3] = np.nan
        with pytest.raises(NonFiniteFieldError):
            make_field(unit_grid, values)


class TestSpectralDerivative:
    def test_constant_has_zero_derivative(self, unit_grid):
        result = spectral_derivative(unit_grid, np.full(unit_grid.n, 3.0), 1)
        assert np.max(np.abs(result)) < 1e-14

    def test_first_derivative_of_sine(self):
        grid = PeriodicGrid(5.0, 64)
        kappa = 2 * np.pi / grid.length
        f = np.sin(kappa * grid.nodes)
        expected = kappa * np.cos(kappa * grid.nodes)
        assert np.max(np.abs(spectral_derivative(grid, f, 1) - expected)) < 1e-12

    def test_third_derivative_of_sine(self):
        grid = PeriodicGrid(5.0, 64)
        kappa = 2 * np.pi / grid.length
        f = np.sin(kappa * grid.nodes)
        expected = -(kappa**3) * np.cos(kappa * grid.nodes)
        assert np.max(np.abs(spectral_derivative(grid, f, 3) - expected)) < 1e-10

    @pytest.mark.parametrize("order", [0, 4, -1])
    def test_rejects_unsupported_orders(self, unit_grid, order):
        with pytest.raises(ValidationError):
            spectral_derivative(unit_grid, np.zeros(unit_grid.n), order)


class TestHelmholtz:
    def test_constant_is_fixed(self, unit_grid):
        result = helmholtz_inverse(unit_grid, 0.7, np.ones(unit_grid.n))
        np.testing.assert_allclose(result, 1.0, atol=1e-15)

    def test_cosine_eigenfunction(self):
        grid = PeriodicGrid(3.0, 64)
        kappa = 2 * np.pi / grid.length
        f = np.cos(kappa * grid.nodes)
        expected = f / (1 + kappa**2)
        np.testing.assert_allclose(helmholtz_inverse(grid, 1.0, f), expected, atol=1e-14)

    def test_rejects_nonpositive_parameter(self, unit_grid):
        with pytest.raises(ValidationError):
            helmholtz_inverse(unit_grid, 0.0, np.zeros(unit_grid.n))

    def test_roundtrip_on_random_fields(self, random_field):
        grid = PeriodicGrid(20.0, 256)
        for _ in range(50):
            f = random_field(grid)
            for lam in (1.0, 0.0025):
                back = helmholtz_forward(grid, lam, helmholtz_inverse(grid, lam, f))
                assert np.max(np.abs(back - f)) < 1e-12

    def test_commutes_with_derivative(self, unit_grid, random_field):
        f = random_field(unit_grid)
        a = helmholtz_inverse(unit_grid, 0.5, spectral_derivative(unit_grid, f, 1))
        b = spectral_derivative(unit_grid, helmholtz_inverse(unit_grid, 0.5, f), 1)
        assert np.max(np.abs(a - b)) < 1e-12

    def test_linearity(self, unit_grid, random_field):
        f, g = random_field(unit_grid), random_field(unit_grid)
        lhs = helmholtz_inverse(unit_grid, 1.0, 2.0 * f - 3.0 * g)
        rhs = 2.0 * helmholtz_inverse(unit_grid, 1.0, f)
        rhs -= 3.0 * helmholtz_inverse(unit_grid, 1.0, g)
        assert np.max(np.abs(lhs - rhs)) < 1e-12

    def test_spike_response_approaches_exponential_kernel(self):
        lam = 5 / 12 * 0.01
        scale = np.sqrt(lam)
        spacing = scale / 64
        grid = PeriodicGrid(spacing * 4096, 4096)
        assert grid.length >= 40 * scale
        spike = np.zeros(grid.n)
        spike[0] = 1.0 / grid.spacing
        response = helmholtz_inverse(grid, lam, spike)
        assert response[0] == pytest.approx(1 / (2 * scale), rel=0.01)


class TestHalfKernels:
    def test_constant_field(self, unit_grid):
        plus, minus = conv_half_kernels(unit_grid, np.ones(unit_grid.n))
        np.testing.assert_allclose(plus, 0.5, atol=1e-15)
        np.testing.assert_allclose(minus, 0.5, atol=1e-15)

    def test_sum_and_difference_identities(self, random_field):
        grid = PeriodicGrid(20.0, 256)
        for _ in range(50):
            f = random_field(grid)
            plus, minus = conv_half_kernels(grid, f)
            full = helmholtz_inverse(grid, 1.0, f)
            assert np.max(np.abs(plus + minus - full)) < 1e-12
            slope = spectral_derivative(grid, full, 1)
            assert np.max(np.abs(minus - plus - slope)) < 1e-12

    def test_cosine_amplitude_and_phase(self):
        grid = PeriodicGrid(3.0, 64)
        kappa = 2 * np.pi / grid.length
        x = grid.nodes
        plus, minus = conv_half_kernels(grid, np.cos(kappa * x))
        amplitude = 0.5 / np.sqrt(1 + kappa**2)
        shift = np.arctan(kappa)
        np.testing.assert_allclose(plus, amplitude * np.cos(kappa * x - shift), atol=1e-14)
        np.testing.assert_allclose(minus, amplitude * np.cos(kappa * x + shift), atol=1e-14)

    def test_sup_norm_bound(self, unit_grid, random_field):
        f = random_field(unit_grid)
        fine = np.linspace(0.0, unit_grid.length, 16 * unit_grid.n, endpoint=False)
        sup = np.max(np.abs(interpolate(unit_grid, f, fine)[0]))
        for part in conv_half_kernels(unit_grid, f):
            assert np.max(np.abs(part)) <= 0.5 * sup * 1.01

    def test_operator_norm_is_one_half(self, unit_grid):
        kk = unit_grid.rfft_wavenumbers
        assert np.max(np.abs(0.5 / (1 + 1j * kk))) == pytest.approx(0.5)


class TestDealiasedProduct:
    def test_constants(self, unit_grid):
        result = dealiased_product(unit_grid, [np.full(64, 2.0), np.full(64, -1.5)])
        np.testing.assert_allclose(result, -3.0, atol=1e-14)

    def test_low_modes_multiply_exactly(self, unit_grid):
        x = unit_grid.nodes
        f, g = np.sin(3 * x), np.sin(5 * x)
        result = dealiased_product(unit_grid, [f, g])
        assert np.max(np.abs(result - f * g)) < 1e-12

    def test_quartic_power(self, unit_grid):
        x = unit_grid.nodes
        s = np.sin(x)
        expected = 3 / 8 - 0.5 * np.cos(2 * x) + 0.125 * np.cos(4 * x)
        result = dealiased_product(unit_grid, [s, s, s, s])
        assert np.max(np.abs(result - expected)) < 1e-12

    def test_high_modes_are_removed(self, unit_grid):
        x = unit_grid.nodes
        high = np.cos(20 * x)
        result = dealiased_product(unit_grid, [high, np.ones(64)])
        assert np.max(np.abs(result)) < 1e-14

    @pytest.mark.parametrize("count", [0, 1, 5])
    def test_rejects_factor_count(self, unit_grid, count):
        with pytest.raises(ValidationError):
            dealiased_product(unit_grid, [np.ones(64)] * count)


class TestInterpolation:
    def test_reproduces_nodes(self, unit_grid, random_field):
        f = random_field(unit_grid)
        values, slopes = interpolate(unit_grid, f, unit_grid.nodes)
        np.testing.assert_allclose(values, f, atol=1e-12)
        np.testing.assert_allclose(slopes, spectral_derivative(unit_grid, f, 1), atol=1e-11)

    def test_off_grid_band_limited(self, unit_grid):
        x = unit_grid.nodes
        f = np.sin(3 * x) + 0.5 * np.cos(x)
        points = np.array([0.123, 1.7, 4.9, 7.5])
        values, slopes = interpolate(unit_grid, f, points)
        np.testing.assert_allclose(values, np.sin(3 * points) + 0.5 * np.cos(points), atol=1e-13)
        np.testing.assert_allclose(
            slopes, 3 * np.cos(3 * points) - 0.5 * np.sin(points), atol=1e-12
        )

    def test_scalar_position(self, unit_grid):
        value, slope = interpolate(unit_grid, np.sin(unit_grid.nodes), 0.5)
        assert float(value) == pytest.approx(np.sin(0.5), abs=1e-13)
        assert float(slope) == pytest.approx(np.cos(0.5), abs=1e-13)


def test_spectral_shift_matches_translate(unit_grid):
    x = unit_grid.nodes
    shifted = spectral_shift(unit_grid, np.sin(2 * x), 0.3)
    np.testing.assert_allclose(shifted, np.sin(2 * (x - 0.3)), atol=1e-13)


def test_grid_shift_is_roll(unit_grid, random_field):
    f = random_field(unit_grid)
    shifted = spectral_shift(unit_grid, f, 5 * unit_grid.spacing)
    np.testing.assert_allclose(shifted, np.roll(f, 5), atol=1e-12)


def test_periodic_integral_of_squared_sine(unit_grid):
    assert periodic_integral(unit_grid, np.sin(unit_grid.nodes) ** 2) == pytest.approx(np.pi)

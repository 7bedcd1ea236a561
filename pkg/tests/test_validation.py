"""Tests for the shared input checks."""

import numpy as np
import pytest

from rch_lab.validation import (
    ConfigError,
    ModelInvalidError,
    ValidationError,
    validate_boundary_decay,
    validate_finite,
    validate_grid_size,
    validate_positive,
)


@pytest.mark.parametrize("n, valid", [(8, True), (1024, True), (4, False), (96, False)])
def test_grid_size(n, valid):
    result = validate_grid_size(n)
    assert result.is_valid is valid
    assert (result.error_message is None) is valid


@pytest.mark.parametrize("value", [0.0, -1.0, float("nan"), float("inf")])
def test_positive_rejects(value):
    result = validate_positive("width", value)
    assert not result.is_valid
    assert "width" in result.error_message


def test_finite_counts_bad_entries():
    result = validate_finite(np.array([1.0, np.nan, np.inf, 0.0]))
    assert not result.is_valid
    assert "2 non-finite" in result.error_message
    assert validate_finite(np.zeros(3)).is_valid


def test_boundary_decay():
    x = np.linspace(0.0, 20.0, 256, endpoint=False)
    assert validate_boundary_decay(np.exp(-((x - 10.0) ** 2))).is_valid
    assert not validate_boundary_decay(np.sin(x)).is_valid


def test_error_hierarchy():
    assert issubclass(ModelInvalidError, ValidationError)
    error = ConfigError("n", "must be a power of two")
    assert isinstance(error, ValidationError)
    assert error.key == "n"
    assert str(error) == "n: must be a power of two"

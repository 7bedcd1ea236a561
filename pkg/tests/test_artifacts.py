"""Tests for the plain-text artifact writers."""

import numpy as np
import pytest

from rch_lab.artifacts import (
    DIAGNOSTICS_COLUMNS,
    format_value,
    write_certificate,
    write_diagnostics_csv,
    write_snapshot,
    write_sweep_csv,
)
from rch_lab.breaking import BreakingCertificate
from rch_lab.diagnostics import ConservedTriple, SlopeReport
from rch_lab.validation import TerminationStatus


@pytest.mark.parametrize(
    "value, text",
    [
        (None, "none"),
        (True, "true"),
        (np.bool_(False), "false"),
        (7, "7"),
        (np.int64(3), "3"),
        (0.1, "0.10000000000000001"),
        (np.float64(2.5), "2.5"),
        (TerminationStatus.SLOPE_BLOWUP, "SlopeBlowup"),
        ((1.5, 2.0), "1.5,2"),
        ("neg_slope", "neg_slope"),
    ],
)
def test_format_value(value, text):
    assert format_value(value) == text


def test_floats_survive_a_text_roundtrip():
    value = 1 / 3
    assert float(format_value(value)) == value


def test_diagnostics_csv(tmp_path, read_csv_columns):
    rows = [
        (0.0, ConservedTriple(1.0, 2.0, 3.0), SlopeReport(-0.5, 4.0, 0.7)),
        (0.5, ConservedTriple(1.0, 2.0, 3.0), SlopeReport(-0.6, 4.1, 0.7)),
    ]
    path = write_diagnostics_csv(tmp_path / "nested" / "diagnostics.csv", rows)
    assert path.read_text().splitlines()[0] == ",".join(DIAGNOSTICS_COLUMNS)
    columns = read_csv_columns(path)
    np.testing.assert_array_equal(columns["min_ux"], [-0.5, -0.6])
    np.testing.assert_array_equal(columns["t"], [0.0, 0.5])


def test_snapshot_columns(tmp_path):
    x = np.array([0.0, 0.5])
    path = write_snapshot(tmp_path / "snap.txt", x, np.array([1.0, 2.0]), np.array([3.0, 4.0]))
    assert path.read_text() == "0 1 3\n0.5 2 4\n"
    np.testing.assert_array_equal(np.loadtxt(path)[:, 1], [1.0, 2.0])


def test_certificate_roundtrip(tmp_path, read_key_values):
    cert = BreakingCertificate(
        x0=4.0,
        u0_at=0.1,
        u0x_at=-2.0,
        e0=0.5,
        c0=0.6,
        k=-0.3,
        margin=-0.2,
        t_bound=None,
        certified=False,
    )
    path = write_certificate(tmp_path / "certificate.txt", cert, {"termination": None})
    entries = read_key_values(path)
    assert entries["certified"] == "false"
    assert entries["t_bound"] == "none"
    assert entries["termination"] == "none"
    assert float(entries["u0_at"]) == 0.1


def test_rewriting_replaces_contents(tmp_path, read_key_values):
    cert = BreakingCertificate(4.0, 0.0, -2.0, 0.5, 0.6, -0.3, 0.9, 1.8, True)
    path = tmp_path / "certificate.txt"
    write_certificate(path, cert, {"note": "x" * 200})
    write_certificate(path, cert)
    assert "note" not in read_key_values(path)


def test_sweep_fills_missing_columns(tmp_path):
    path = write_sweep_csv(tmp_path / "sweep.csv", [{"omega": 0.3, "amplitude": 0.5}])
    row = path.read_text().splitlines()[1].split(",")
    assert row[:2] == ["0.29999999999999999", "0.5"]
    assert set(row[2:]) == {"none"}

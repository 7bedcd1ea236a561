"""End-to-end tests of the command-line workflows."""

import math
from pathlib import Path

import numpy as np
import pytest

from rch_lab import solver
from rch_lab.cli import (
    EXIT_INVALID_CONFIG,
    EXIT_NON_FINITE,
    EXIT_OK,
    main,
    sweep_point_dir,
)
from rch_lab.nonlocal_ops import PeriodicGrid
from rch_lab.solver import BLOWUP_RESOLUTION_FRACTION

CONFIGS = Path(__file__).parent.parent / "configs"


def test_verify_writes_report(tmp_path):
    status = main(["verify", "--omega", "0.3", "--output-dir", str(tmp_path)])
    assert status == EXIT_OK
    lines = (tmp_path / "identity_report.csv").read_text().splitlines()
    assert lines[0] == "name,value,reference,residual,enforced,passes"
    assert any(line.startswith("c_quadratic,") and line.endswith(",true,true") for line in lines)
    assert any(line.startswith("b2_sum_form,") and ",false," in line for line in lines)


def test_simulate_constant_state(tmp_path, read_csv_columns, read_key_values):
    status = main(
        [
            "simulate",
            "--omega", "0.3",
            "--length", "6.283185307179586",
            "--n", "64",
            "--family", "constant",
            "--amplitude", "0.2",
            "--t-end", "1",
            "--snapshot-stride", "5",
            "--output-dir", str(tmp_path),
        ]
    )
    assert status == EXIT_OK
    columns = read_csv_columns(tmp_path / "diagnostics.csv")
    for name in ("I", "E", "F"):
        assert np.ptp(columns[name]) < 1e-12
    assert columns["t"][-1] == pytest.approx(1.0)

    manifest = read_key_values(tmp_path / "manifest.txt")
    assert manifest["termination"] == "Completed"
    assert manifest["t_break"] == "none"
    assert manifest["family"] == "constant"
    threshold = BLOWUP_RESOLUTION_FRACTION / math.sqrt(2 * math.pi / 64)
    assert float(manifest["blowup_threshold_effective"]) == pytest.approx(threshold)
    assert float(manifest["param.omega"]) == 0.3
    snapshots = sorted((tmp_path / "snapshots").iterdir())
    assert len(snapshots) == len(columns["t"])
    assert len(snapshots[0].read_text().splitlines()) == 64


def test_physical_snapshots_carry_elevation(tmp_path):
    status = main(
        [
            "simulate",
            "--scaling", "physical",
            "--length", "1",
            "--n", "32",
            "--family", "sine",
            "--amplitude", "0.5",
            "--t-end", "0.01",
            "--output-dir", str(tmp_path),
        ]
    )
    assert status == EXIT_OK
    first = (tmp_path / "snapshots" / "snapshot_00000.txt").read_text().splitlines()[0]
    assert len(first.split()) == 3


def test_certify_from_sample_file(tmp_path, read_key_values):
    grid = PeriodicGrid(20.0, 512)
    y = grid.nodes - 10.0
    data = tmp_path / "datum.txt"
    np.savetxt(data, np.column_stack([grid.nodes, (-0.2 - y) * np.exp(-y * y)]))

    status = main(
        [
            "certify",
            "--omega", "0",
            "--length", "20",
            "--n", "512",
            "--family", "file",
            "--data-file", str(data),
            "--output-dir", str(tmp_path / "out"),
        ]
    )
    assert status == EXIT_OK
    certificate = read_key_values(tmp_path / "out" / "certificate.txt")
    assert certificate["certified"] == "true"
    assert float(certificate["t_bound"]) == pytest.approx(2.0, abs=1e-8)
    assert float(certificate["x0"]) == pytest.approx(10.0)


def test_uncertified_datum_reports_none(tmp_path, read_key_values):
    status = main(
        [
            "certify",
            "--omega", "0.3",
            "--length", "8",
            "--n", "128",
            "--family", "neg_slope",
            "--amplitude", "0.01",
            "--width", "0.25",
            "--center", "4",
            "--output-dir", str(tmp_path),
        ]
    )
    assert status == EXIT_OK
    certificate = read_key_values(tmp_path / "certificate.txt")
    assert certificate["certified"] == "false"
    assert certificate["t_bound"] == "none"


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--n", "100"],
        ["verify", "--omega", "1.3"],
        ["simulate", "--family", "nothing"],
        ["certify", "--family", "file", "--data-file", "/nonexistent/datum.txt"],
        [],
    ],
)
def test_invalid_configuration_exits_2(tmp_path, argv):
    assert main([*argv, "--output-dir", str(tmp_path)]) == EXIT_INVALID_CONFIG


def test_unknown_config_key_exits_2(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("subcommand = verify\nomegaa = 0.3\n", encoding="utf-8")
    assert main(["--config", str(path)]) == EXIT_INVALID_CONFIG


def test_non_finite_run_exits_3(tmp_path, monkeypatch, read_key_values):
    monkeypatch.setattr(solver, "_normalized_rhs", lambda p, g, u: np.full(g.n, np.inf))
    status = main(["simulate", "--n", "64", "--t-end", "0.1", "--output-dir", str(tmp_path)])
    assert status == EXIT_NON_FINITE
    assert read_key_values(tmp_path / "manifest.txt")["termination"] == "NonFinite"


def test_physical_seeds_rejected_before_stepping(tmp_path):
    out = tmp_path / "out"
    status = main(
        [
            "simulate",
            "--scaling", "physical",
            "--length", "1",
            "--n", "32",
            "--seeds", "0.5",
            "--output-dir", str(out),
        ]
    )
    assert status == EXIT_INVALID_CONFIG
    assert not out.exists()


def _contents(directory: Path) -> dict[str, bytes]:
    return {
        str(path.relative_to(directory)): path.read_bytes()
        for path in sorted(directory.rglob("*"))
        if path.is_file()
    }


def test_identical_configs_give_identical_outputs(tmp_path):
    argv = [
        "simulate",
        "--omega", "0.3",
        "--family", "random_modes",
        "--mode", "5",
        "--seed", "11",
        "--n", "64",
        "--t-end", "0.5",
        "--seeds", "3,20",
        "--output-dir", str(tmp_path),
    ]
    assert main(argv) == EXIT_OK
    first = _contents(tmp_path)
    assert main(argv) == EXIT_OK
    assert _contents(tmp_path) == first
    assert "characteristic_001.csv" in first


def test_sweep_outputs_do_not_depend_on_workers(tmp_path):
    outputs = []
    for workers in ("1", "2", "2"):
        out = tmp_path / f"run{len(outputs)}"
        status = main(
            [
                "sweep",
                "--sweep-omegas", "0,0.3",
                "--sweep-amplitudes", "0.05,0.1",
                "--family", "random_modes",
                "--mode", "4",
                "--seed", "5",
                "--n", "64",
                "--t-end", "0.2",
                "--sweep-simulate",
                "--workers", workers,
                "--output-dir", str(out),
            ]
        )
        assert status == EXIT_OK
        outputs.append(_contents(out))
    assert outputs[0] == outputs[1] == outputs[2]
    assert "sweep.csv" in outputs[0]


@pytest.mark.parametrize("workers", ["1", "2"])
def test_sweep_writes_ordered_table(tmp_path, workers, read_csv_columns):
    status = main(
        [
            "sweep",
            "--sweep-omegas", "0,0.3",
            "--sweep-amplitudes", "0.01,0.5",
            "--family", "neg_slope",
            "--width", "0.25",
            "--center", "4",
            "--length", "8",
            "--n", "128",
            "--workers", workers,
            "--output-dir", str(tmp_path),
        ]
    )
    assert status == EXIT_OK
    columns = read_csv_columns(tmp_path / "sweep.csv")
    np.testing.assert_array_equal(columns["omega"], [0.0, 0.0, 0.3, 0.3])
    np.testing.assert_array_equal(columns["amplitude"], [0.01, 0.5, 0.01, 0.5])
    lines = (tmp_path / "sweep.csv").read_text().splitlines()
    assert [line.split(",")[10] for line in lines[1:]] == ["false", "true", "false", "true"]
    for omega in (0.0, 0.3):
        for amplitude in (0.01, 0.5):
            assert (sweep_point_dir(tmp_path, omega, amplitude) / "certificate.txt").is_file()


@pytest.mark.slow
def test_breaking_configuration_follow_up(tmp_path, read_csv_columns, read_key_values):
    status = main(["--config", str(CONFIGS / "breaking.cfg"), "--output-dir", str(tmp_path)])
    assert status == EXIT_OK
    certificate = read_key_values(tmp_path / "certificate.txt")
    assert certificate["certified"] == "true"
    assert certificate["termination"] == "SlopeBlowup"
    assert float(certificate["t_num"]) <= 1.05 * float(certificate["t_bound"])
    trace = read_csv_columns(tmp_path / "follow_up" / "characteristic.csv")
    assert trace["M"][0] > 0 > trace["N"][0]

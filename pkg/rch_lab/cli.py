"""Command-line entry point.

Usage:
    rch-lab verify --omega 0.3
    rch-lab simulate --config run.cfg --t-end 5
    rch-lab certify --omega 0.3 --family neg_slope --amplitude 0.5 --width 0.25 --follow-up
    rch-lab sweep --sweep-omegas 0,0.3,0.6 --sweep-amplitudes 0.1,0.3,0.5 --workers 4

Exit status: 0 success, 1 failed identity check, 2 invalid configuration or
data file, 3 non-finite termination.
"""

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor, as_completed
from pathlib import Path

from tqdm import tqdm

from . import artifacts
from .breaking import certify, track_characteristic
from .config import (
    CONFIG_KEYS,
    RCH_IDENTITY_TOLERANCE,
    RCH_LOG_LEVEL,
    CliConfig,
    Subcommand,
    build_cli_config,
    load_config_file,
)
from .diagnostics import conserved, slope_report, surface_elevation
from .initial_data import build_initial_data
from .logging_utils import structured_logger
from .nonlocal_ops import Field, PeriodicGrid
from .params import ModelParameters, derive_params, identity_report
from .solver import Trajectory, WaveState, evolve, resolve_blowup_threshold, unscale_map
from .validation import ConfigError, Scaling, TerminationStatus, ValidationError

EXIT_OK = 0
EXIT_IDENTITY_FAILURE = 1
EXIT_INVALID_CONFIG = 2
EXIT_NON_FINITE = 3

# Follow-up simulations run slightly past the certified bound
FOLLOW_UP_SLACK = 1.05

BANNER_WIDTH = 55


def _banner(title: str) -> None:
    print("=" * BANNER_WIDTH)
    print(title)
    print("=" * BANNER_WIDTH)
    print()


def _normalized_datum(
    config: CliConfig, params: ModelParameters, amplitude: float | None = None
) -> tuple[PeriodicGrid, Field]:
    """Sample the configured datum and express it in the normalized scaling."""
    grid = config.grid()
    values = build_initial_data(grid, config.initial_data(amplitude))
    if config.scaling is Scaling.NORMALIZED:
        return grid, values
    normalized = unscale_map(params, WaveState(grid, values, 0.0, Scaling.PHYSICAL))
    return normalized.grid, normalized.u


def write_trajectory(
    directory: Path, params: ModelParameters, trajectory: Trajectory, manifest: dict
) -> None:
    """Diagnostics CSV, snapshots and manifest of one evolution."""
    rows = []
    for index, state in enumerate(trajectory.states):
        rows.append((state.t, conserved(params, state), slope_report(state)))
        eta = None
        if state.scaling is Scaling.PHYSICAL:
            eta = surface_elevation(params, state)
        artifacts.write_snapshot(
            directory / "snapshots" / f"snapshot_{index:05d}.txt", state.grid.nodes, state.u, eta
        )
    artifacts.write_diagnostics_csv(directory / "diagnostics.csv", rows)

    entries = dict(manifest)
    entries.update({f"param.{key}": value for key, value in params.as_dict().items()})
    entries.update(
        {
            "termination": trajectory.termination,
            "t_break": trajectory.t_break,
            "x_break": trajectory.x_break,
            "slope_integral": trajectory.slope_integral,
            "blowup_threshold_effective": resolve_blowup_threshold(trajectory.config),
            "dt_effective": trajectory.dt,
            "steps": trajectory.steps,
            "snapshots": len(trajectory.states),
        }
    )
    artifacts.write_key_values(directory / "manifest.txt", entries)


def _trace_seeds(directory: Path, params: ModelParameters, trajectory: Trajectory) -> None:
    for index, seed in enumerate(trajectory.config.characteristic_seeds):
        trace = track_characteristic(trajectory, params, seed)
        artifacts.write_characteristic_csv(directory / f"characteristic_{index:03d}.csv", trace)


def run_verify(config: CliConfig) -> int:
    params = derive_params(config.omega, config.eps, config.mu)
    checks = identity_report(params, RCH_IDENTITY_TOLERANCE)

    _banner(f"Coefficient identities (omega = {config.omega:g})")
    print(f"  {'identity':<16} {'residual':>12}  status")
    failures = 0
    for check in checks:
        if not check.enforced:
            status = "info"
        elif check.passes(RCH_IDENTITY_TOLERANCE):
            status = "ok"
        else:
            status = "FAIL"
            failures += 1
        print(f"  {check.name:<16} {check.residual:>12.3e}  {status}")

    path = artifacts.write_identity_report(
        config.output_dir / "identity_report.csv", checks, RCH_IDENTITY_TOLERANCE
    )
    print(f"\nReport written to {path}")
    structured_logger.info("verify", "Identity report written", failures=failures)
    return EXIT_IDENTITY_FAILURE if failures else EXIT_OK


def run_simulate(config: CliConfig) -> int:
    params = derive_params(config.omega, config.eps, config.mu)
    run_config = config.run_config(params)
    u0 = build_initial_data(run_config.grid, config.initial_data())

    _banner(f"Simulation ({config.scaling.value}, omega = {config.omega:g})")
    with structured_logger.timed_operation("simulate", "Simulation written"):
        trajectory = evolve(run_config, u0)
        write_trajectory(config.output_dir, params, trajectory, config.effective_values())
        _trace_seeds(config.output_dir, params, trajectory)

    print(f"  Termination: {trajectory.termination.value}")
    print(f"  Final time:  {trajectory.final.t:.6g} after {trajectory.steps} steps")
    if trajectory.t_break is not None:
        print(f"  Breaking:    t = {trajectory.t_break:.6g} at x = {trajectory.x_break:.6g}")
    print(f"\nOutputs written to {config.output_dir}")

    if trajectory.termination is TerminationStatus.NON_FINITE:
        return EXIT_NON_FINITE
    return EXIT_OK


def run_certify(config: CliConfig) -> int:
    params = derive_params(config.omega, config.eps, config.mu)
    grid, u0 = _normalized_datum(config, params)
    certificate = certify(params, grid, u0)

    _banner(f"Breaking certificate (omega = {config.omega:g})")
    for key, value in certificate.as_dict().items():
        print(f"  {key:<10} {artifacts.format_value(value)}")

    extra = {}
    status = EXIT_OK
    if config.follow_up:
        t_end = None
        if certificate.certified:
            t_end = FOLLOW_UP_SLACK * certificate.t_bound
        trajectory = evolve(config.follow_up_config(params, grid, t_end), u0)
        directory = config.output_dir / "follow_up"
        write_trajectory(directory, params, trajectory, config.effective_values())
        trace = track_characteristic(trajectory, params, certificate.x0)
        artifacts.write_characteristic_csv(directory / "characteristic.csv", trace)
        extra = {"termination": trajectory.termination, "t_num": trajectory.t_break}
        print(f"\n  Follow-up:  {trajectory.termination.value}, t_num = {trajectory.t_break}")
        if trajectory.termination is TerminationStatus.NON_FINITE:
            status = EXIT_NON_FINITE

    path = artifacts.write_certificate(config.output_dir / "certificate.txt", certificate, extra)
    print(f"\nCertificate written to {path}")
    return status


def sweep_point_dir(output_dir: Path, omega: float, amplitude: float) -> Path:
    """Distinct output directory of one (omega, amplitude) tuple."""
    name = f"omega={artifacts.format_value(omega)}_amplitude={artifacts.format_value(amplitude)}"
    return output_dir / "sweep" / name


def sweep_point(config: CliConfig, omega: float, amplitude: float) -> dict:
    """Certify (and optionally evolve) one datum of the sweep grid."""
    params = derive_params(omega, config.eps, config.mu)
    grid, u0 = _normalized_datum(config, params, amplitude)
    certificate = certify(params, grid, u0)
    row = {"omega": omega, "amplitude": amplitude, **certificate.as_dict()}
    directory = sweep_point_dir(config.output_dir, omega, amplitude)

    if config.sweep_simulate:
        trajectory = evolve(config.follow_up_config(params, grid), u0)
        write_trajectory(directory, params, trajectory, {"omega": omega, "amplitude": amplitude})
        row.update(termination=trajectory.termination, t_num=trajectory.t_break)

    extra = {key: row[key] for key in ("termination", "t_num") if key in row}
    artifacts.write_certificate(directory / "certificate.txt", certificate, extra)
    return row


def run_sweep(config: CliConfig) -> int:
    tasks = [(om, amp) for om in config.sweep_omegas for amp in config.sweep_amplitudes]
    _banner(f"Sweep over {len(tasks)} (omega, amplitude) pairs")

    rows: dict[int, dict] = {}
    with structured_logger.timed_operation("sweep", "Sweep finished", points=len(tasks)):
        with tqdm(total=len(tasks), desc="sweep", disable=not config.progress) as bar:
            if config.workers > 1:
                with ProcessPoolExecutor(max_workers=config.workers) as executor:
                    future_to_index = {
                        executor.submit(sweep_point, config, om, amp): index
                        for index, (om, amp) in enumerate(tasks)
                    }
                    for future in as_completed(future_to_index):
                        rows[future_to_index[future]] = future.result()
                        bar.update(1)
            else:
                for index, (om, amp) in enumerate(tasks):
                    rows[index] = sweep_point(config, om, amp)
                    bar.update(1)

    ordered = [rows[index] for index in range(len(tasks))]
    path = artifacts.write_sweep_csv(config.output_dir / "sweep.csv", ordered)
    certified = sum(1 for row in ordered if row["certified"])
    print(f"  Certified: {certified} of {len(ordered)}")
    print(f"\nSweep table written to {path}")
    return EXIT_OK


_WORKFLOWS = {
    Subcommand.VERIFY: run_verify,
    Subcommand.SIMULATE: run_simulate,
    Subcommand.CERTIFY: run_certify,
    Subcommand.SWEEP: run_sweep,
}


def run(config: CliConfig) -> int:
    """Dispatch one workflow and map domain errors to exit status 2."""
    structured_logger.set_context(subcommand=config.subcommand.value)
    try:
        return _WORKFLOWS[config.subcommand](config)
    except ValidationError as e:
        key = getattr(e, "key", None)
        structured_logger.error(config.subcommand.value, "Run rejected", error=str(e), key=key)
        print(f"\nError: {e}")
        return EXIT_INVALID_CONFIG
    finally:
        structured_logger.clear_context()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rch-lab",
        description="Numerical laboratory for the rotation-Camassa-Holm equation",
    )
    parser.add_argument(
        "subcommand",
        nargs="?",
        choices=[s.value for s in Subcommand],
        help="Workflow to run (may also come from the config file)",
    )
    parser.add_argument("--config", type=Path, help="Flat key = value configuration file")
    for key in CONFIG_KEYS:
        if key == "subcommand":
            continue
        flag = "--" + key.replace("_", "-")
        if key in ("follow_up", "sweep_simulate", "progress"):
            parser.add_argument(flag, dest=key, action=argparse.BooleanOptionalAction)
        else:
            parser.add_argument(flag, dest=key, type=str)
    return parser


def collect_values(args: argparse.Namespace) -> dict:
    """Merge config-file values with flags; flags win."""
    values: dict = {}
    if args.config is not None:
        values.update(load_config_file(args.config))
    for key in CONFIG_KEYS:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            values[key] = flag_value
    return values


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=RCH_LOG_LEVEL.upper(), format="%(message)s")
    args = build_parser().parse_args(argv)
    try:
        config = build_cli_config(collect_values(args))
    except ConfigError as e:
        structured_logger.error("config", "Invalid configuration", key=e.key, error=str(e))
        print(f"Configuration error: {e}")
        return EXIT_INVALID_CONFIG
    return run(config)


if __name__ == "__main__":
    sys.exit(main())

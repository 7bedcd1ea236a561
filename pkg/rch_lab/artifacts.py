"""Plain-text run artifacts.

Every number is written with 17 significant digits through format(), which
never consults the locale. Files are newline-terminated and rewritten in
place, so rerunning a configuration replaces its outputs.
"""

from pathlib import Path

import numpy as np

from .breaking import BreakingCertificate, CharacteristicTrace
from .diagnostics import ConservedTriple, SlopeReport
from .logging_utils import structured_logger
from .params import IdentityCheck

DIAGNOSTICS_COLUMNS = ("t", "I", "E", "F", "min_ux", "argmin_x", "max_abs_u")
CHARACTERISTIC_COLUMNS = ("t", "q", "u", "ux", "M", "N")
SWEEP_COLUMNS = (
    "omega",
    "amplitude",
    "x0",
    "u0_at",
    "u0x_at",
    "e0",
    "c0",
    "k",
    "margin",
    "t_bound",
    "certified",
    "termination",
    "t_num",
)

NUMBER_FORMAT = ".17g"


def format_value(value) -> str:
    """Render one value for a text artifact."""
    if value is None:
        return "none"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), NUMBER_FORMAT)
    if hasattr(value, "value"):
        return str(value.value)
    if isinstance(value, (list, tuple)):
        return ",".join(format_value(item) for item in value)
    return str(value)


def _write_lines(path: Path, lines: list[str]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    structured_logger.debug("artifacts", "Wrote artifact", path=str(path), lines=len(lines))
    return path


def _row(values) -> str:
    return ",".join(format_value(v) for v in values)


def write_diagnostics_csv(
    path: Path, rows: list[tuple[float, ConservedTriple, SlopeReport]]
) -> Path:
    """One line per recorded state: t, I, E, F, min_ux, argmin_x, max_abs_u."""
    lines = [",".join(DIAGNOSTICS_COLUMNS)]
    for t, triple, slope in rows:
        lines.append(
            _row(
                (
                    t,
                    triple.i_val,
                    triple.e_val,
                    triple.f_val,
                    slope.min_ux,
                    slope.argmin_x,
                    slope.max_abs_u,
                )
            )
        )
    return _write_lines(path, lines)


def write_snapshot(path: Path, x: np.ndarray, u: np.ndarray, eta: np.ndarray | None = None) -> Path:
    """Whitespace-separated columns x, u and optionally eta."""
    columns = [x, u] if eta is None else [x, u, eta]
    lines = [" ".join(format_value(float(v)) for v in row) for row in zip(*columns)]
    return _write_lines(path, lines)


def write_key_values(path: Path, entries: dict) -> Path:
    """Flat key = value record, the format of manifests and certificates."""
    return _write_lines(path, [f"{key} = {format_value(value)}" for key, value in entries.items()])


def write_certificate(
    path: Path, certificate: BreakingCertificate, extra: dict | None = None
) -> Path:
    entries = certificate.as_dict()
    if extra:
        entries.update(extra)
    return write_key_values(path, entries)


def write_identity_report(path: Path, checks: list[IdentityCheck], tolerance: float) -> Path:
    lines = ["name,value,reference,residual,enforced,passes"]
    for check in checks:
        lines.append(
            _row(
                (
                    check.name,
                    check.value,
                    check.reference,
                    check.residual,
                    check.enforced,
                    check.passes(tolerance),
                )
            )
        )
    return _write_lines(path, lines)


def write_characteristic_csv(path: Path, trace: CharacteristicTrace) -> Path:
    lines = [",".join(CHARACTERISTIC_COLUMNS)]
    for row in zip(
        trace.times, trace.q, trace.u_along, trace.ux_along, trace.m_along, trace.n_along
    ):
        lines.append(_row(row))
    return _write_lines(path, lines)


def write_sweep_csv(path: Path, rows: list[dict]) -> Path:
    lines = [",".join(SWEEP_COLUMNS)]
    for row in rows:
        lines.append(_row(row.get(column) for column in SWEEP_COLUMNS))
    return _write_lines(path, lines)


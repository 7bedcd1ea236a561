"""Configuration for the R-CH laboratory.

Environment defaults come from a .env file; run configurations are flat
key = value files whose entries command-line flags can override.
"""

import math
import os
from collections.abc import Callable, Mapping
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from dotenv import dotenv_values, load_dotenv

from .initial_data import FAMILIES, InitialDataSpec
from .nonlocal_ops import PeriodicGrid
from .params import ModelParameters
from .solver import RunConfig
from .validation import ConfigError, Scaling, validate_grid_size

# Load environment variables
load_dotenv()


def get_env(key: str, default: str | None = None) -> str:
    """Get environment variable or raise if required and missing."""
    value = os.environ.get(key, default)
    if value is None:
        raise ValueError(f"Missing required environment variable: {key}")
    return value


def _parse_auto(raw: str) -> float | str:
    return "auto" if raw.strip().lower() == "auto" else float(raw)


# Output and logging
RCH_OUTPUT_DIR = get_env("RCH_OUTPUT_DIR", "runs")
RCH_LOG_LEVEL = get_env("RCH_LOG_LEVEL", "WARNING")

# Numerics
RCH_BLOWUP_THRESHOLD = _parse_auto(get_env("RCH_BLOWUP_THRESHOLD", "auto"))
RCH_IDENTITY_TOLERANCE = float(get_env("RCH_IDENTITY_TOLERANCE", "1e-10"))

# Sweeps
RCH_SWEEP_WORKERS = int(get_env("RCH_SWEEP_WORKERS", "1"))


class Subcommand(Enum):
    """CLI workflows."""

    VERIFY = "verify"
    SIMULATE = "simulate"
    CERTIFY = "certify"
    SWEEP = "sweep"


@dataclass(frozen=True)
class CliConfig:
    """Parsed and typed run configuration."""

    subcommand: Subcommand
    omega: float = 0.0
    eps: float = 0.1
    mu: float = 0.01
    scaling: Scaling = Scaling.NORMALIZED
    length: float = 40.0
    n: int = 512
    t_end: float = 1.0
    dt: float | str = "auto"
    family: str = "gaussian_bump"
    amplitude: float = 0.1
    center: float | None = None
    width: float = 1.0
    mode: int = 1
    seed: int = 0
    data_file: Path | None = None
    output_dir: Path = Path(RCH_OUTPUT_DIR)
    seeds: tuple[float, ...] = ()
    blowup_threshold: float | str = RCH_BLOWUP_THRESHOLD
    snapshot_stride: int = 10
    follow_up: bool = False
    sweep_omegas: tuple[float, ...] = (0.0,)
    sweep_amplitudes: tuple[float, ...] = (0.1,)
    sweep_simulate: bool = False
    workers: int = RCH_SWEEP_WORKERS
    progress: bool = False

    def grid(self) -> PeriodicGrid:
        return PeriodicGrid(self.length, self.n)

    def initial_data(self, amplitude: float | None = None) -> InitialDataSpec:
        return InitialDataSpec(
            family=self.family,
            amplitude=self.amplitude if amplitude is None else amplitude,
            center=self.center,
            width=self.width,
            mode=self.mode,
            seed=self.seed,
            data_file=self.data_file,
        )

    def run_config(self, params: ModelParameters) -> RunConfig:
        """Solver configuration of a simulate run."""
        return RunConfig(
            params=params,
            grid=self.grid(),
            scaling=self.scaling,
            t_end=self.t_end,
            dt=self.dt,
            blowup_threshold=self.blowup_threshold,
            snapshot_stride=self.snapshot_stride,
            characteristic_seeds=self.seeds,
            retain_stages=bool(self.seeds),
        )

    def follow_up_config(
        self, params: ModelParameters, grid: PeriodicGrid, t_end: float | None = None
    ) -> RunConfig:
        """Normalized evolution of a certified datum, keeping the stage cache.

        Without t_end the configured end time is used. Times, steps and
        thresholds given in the physical scaling are carried over to
        normalized units.
        """
        dt = self.dt
        threshold = self.blowup_threshold
        configured_end = self.t_end
        if self.scaling is Scaling.PHYSICAL:
            length_scale = math.sqrt(params.kernel_scale)
            configured_end = configured_end / length_scale
            if dt != "auto":
                dt = dt / length_scale
            if threshold != "auto":
                threshold = threshold * params.alpha * params.eps * length_scale
        return RunConfig(
            params=params,
            grid=grid,
            scaling=Scaling.NORMALIZED,
            t_end=configured_end if t_end is None else t_end,
            dt=dt,
            blowup_threshold=threshold,
            snapshot_stride=self.snapshot_stride,
            retain_stages=True,
        )

    def effective_values(self) -> dict:
        """Every field by name, for the run manifest."""
        return {name: getattr(self, name) for name in self.__dataclass_fields__}


def _parse_bool(raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("true", "yes", "1", "on"):
        return True
    if lowered in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def _parse_floats(raw: str) -> tuple[float, ...]:
    return tuple(float(item) for item in raw.split(",") if item.strip())


def _parse_optional_float(raw: str) -> float | None:
    return None if raw.strip().lower() in ("", "none") else float(raw)


_PARSERS: dict[str, Callable[[str], object]] = {
    "subcommand": lambda raw: Subcommand(raw.strip().lower()),
    "omega": float,
    "eps": float,
    "mu": float,
    "scaling": lambda raw: Scaling(raw.strip().lower()),
    "length": float,
    "n": int,
    "t_end": float,
    "dt": _parse_auto,
    "family": lambda raw: raw.strip(),
    "amplitude": float,
    "center": _parse_optional_float,
    "width": float,
    "mode": int,
    "seed": int,
    "data_file": lambda raw: Path(raw.strip()),
    "output_dir": lambda raw: Path(raw.strip()),
    "seeds": _parse_floats,
    "blowup_threshold": _parse_auto,
    "snapshot_stride": int,
    "follow_up": _parse_bool,
    "sweep_omegas": _parse_floats,
    "sweep_amplitudes": _parse_floats,
    "sweep_simulate": _parse_bool,
    "workers": int,
    "progress": _parse_bool,
}

CONFIG_KEYS = tuple(_PARSERS)

_POSITIVE_KEYS = ("eps", "mu", "length", "t_end", "width")
_AUTO_KEYS = ("dt", "blowup_threshold")


def load_config_file(path: Path) -> dict[str, str | None]:
    """Read a flat key = value file without variable interpolation.

    Raises:
        ConfigError: If the file does not exist
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError("config", f"cannot read configuration file {path}")
    return dict(dotenv_values(path, interpolate=False))


def build_cli_config(values: Mapping[str, object]) -> CliConfig:
    """Parse raw values (strings or already-typed flags) into a CliConfig.

    Args:
        values: Mapping of configuration keys to raw values

    Returns:
        Validated CliConfig

    Raises:
        ConfigError: Naming the first offending key
    """
    parsed: dict[str, object] = {}
    for key, raw in values.items():
        if key not in _PARSERS:
            raise ConfigError(key, "unknown key")
        if raw is None:
            raise ConfigError(key, "missing value")
        if isinstance(raw, str):
            try:
                parsed[key] = _PARSERS[key](raw)
            except ValueError as e:
                raise ConfigError(key, f"cannot parse {raw!r}: {e}") from e
        else:
            parsed[key] = raw

    if "subcommand" not in parsed:
        raise ConfigError("subcommand", "missing; choose verify, simulate, certify or sweep")

    config = CliConfig(**parsed)
    _validate(config)
    return config


def _validate(config: CliConfig) -> None:
    for key in _POSITIVE_KEYS:
        value = getattr(config, key)
        if not value > 0:
            raise ConfigError(key, f"must be positive, got {value!r}")
    if config.omega < 0:
        raise ConfigError("omega", f"must be nonnegative, got {config.omega!r}")
    for key in _AUTO_KEYS:
        value = getattr(config, key)
        if value != "auto" and not value > 0:
            raise ConfigError(key, f"must be positive or auto, got {value!r}")

    result = validate_grid_size(config.n)
    if not result.is_valid:
        raise ConfigError("n", result.error_message)

    for key in ("snapshot_stride", "workers", "mode"):
        if getattr(config, key) < 1:
            raise ConfigError(key, f"must be >= 1, got {getattr(config, key)!r}")

    if config.family not in FAMILIES:
        raise ConfigError("family", f"unknown family {config.family!r}; choose from {FAMILIES}")
    if config.family == "file" and config.data_file is None:
        raise ConfigError("data_file", "required when family = file")
    if config.seeds and config.scaling is not Scaling.NORMALIZED:
        raise ConfigError("seeds", "characteristics are traced in the normalized scaling")
    if config.subcommand is Subcommand.SWEEP and not (
        config.sweep_omegas and config.sweep_amplitudes
    ):
        raise ConfigError("sweep_omegas", "sweep needs at least one omega and one amplitude")

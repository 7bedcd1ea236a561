"""Method-of-lines time integration of the R-CH equation.

Both scalings share one classic RK4 stepper. The physical form keeps the
amplitude and shallowness parameters explicit; the normalized form is the
same equation after u -> alpha*eps*u and (t, x) -> sqrt(beta*mu) * (t, x).
"""

import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from .logging_utils import structured_logger
from .nonlocal_ops import (
    Field,
    PeriodicGrid,
    dealiased_product,
    helmholtz_inverse,
    make_field,
    spectral_derivative,
    spectral_shift,
)
from .params import ModelParameters
from .validation import (
    Scaling,
    ScalingError,
    TerminationStatus,
    ValidationError,
    validate_finite,
    validate_positive,
)

# Auto time step: dt = AUTO_CFL * spacing / (max|u0| + |beta0/beta| + |c - beta0/beta|)
AUTO_CFL = 0.3
DEFAULT_BLOWUP_THRESHOLD = 1e3

# Auto blow-up threshold in normalized units: BLOWUP_RESOLUTION_FRACTION / sqrt(spacing).
# Calibration: once a steepening front is unresolved, -min u_x on a truncated
# spectral grid saturates near 0.5 / sqrt(spacing).
BLOWUP_RESOLUTION_FRACTION = 0.35

# Tolerance when deciding whether an explicit dt already divides t_end
STEP_COUNT_SLACK = 1e-9

RhsFunction = Callable[[Field], Field]


@dataclass(frozen=True, eq=False)
class WaveState:
    """Velocity field on a grid at one instant, tagged with its scaling."""

    grid: PeriodicGrid
    u: Field
    t: float
    scaling: Scaling

    def __post_init__(self):
        object.__setattr__(self, "u", make_field(self.grid, self.u))
        self.u.setflags(write=False)
        if not math.isfinite(self.t) or self.t < 0:
            raise ValidationError(f"State time must be finite and nonnegative, got {self.t!r}")


@dataclass(frozen=True)
class RunConfig:
    """Everything one evolution needs besides the initial datum.

    characteristic_seeds lists start points the caller traces afterwards
    from the stage cache; retain_stages must stay on for them, and they are
    only traced in the normalized scaling. blowup_threshold may be "auto"
    to follow the grid resolution.
    """

    params: ModelParameters
    grid: PeriodicGrid
    scaling: Scaling
    t_end: float
    dt: float | str = "auto"
    blowup_threshold: float | str = DEFAULT_BLOWUP_THRESHOLD
    snapshot_stride: int = 1
    characteristic_seeds: tuple[float, ...] = ()
    retain_stages: bool = True

    def __post_init__(self):
        for name in ("t_end", "dt", "blowup_threshold"):
            value = getattr(self, name)
            if name != "t_end" and value == "auto":
                continue
            if isinstance(value, str):
                raise ValidationError(f"{name} must be a positive number, got {value!r}")
            result = validate_positive(name, value)
            if not result.is_valid:
                raise ValidationError(result.error_message)
        if self.snapshot_stride < 1:
            raise ValidationError(f"snapshot_stride must be >= 1, got {self.snapshot_stride}")
        object.__setattr__(self, "scaling", Scaling(self.scaling))
        if self.characteristic_seeds and not self.retain_stages:
            raise ValidationError("characteristic_seeds require retain_stages")
        if self.characteristic_seeds and self.scaling is not Scaling.NORMALIZED:
            raise ScalingError("Characteristics are tracked in the normalized scaling")
        object.__setattr__(
            self, "characteristic_seeds", tuple(float(x) for x in self.characteristic_seeds)
        )


@dataclass(frozen=True, eq=False)
class StageRecord:
    """The four fields at which one RK4 step evaluated the right-hand side."""

    t: float
    dt: float
    stages: tuple[Field, Field, Field, Field]


@dataclass(eq=False)
class Trajectory:
    """Result of one evolution."""

    config: RunConfig
    states: list[WaveState]
    termination: TerminationStatus
    dt: float
    steps: int
    stage_cache: list[StageRecord] | None = None
    t_break: float | None = None
    x_break: float | None = None
    slope_integral: float = 0.0
    min_ux_history: list[float] = field(default_factory=list)

    @property
    def final(self) -> WaveState:
        return self.states[-1]


def _require_scaling(state: WaveState, expected: Scaling) -> None:
    if state.scaling is not expected:
        raise ScalingError(f"Expected a {expected.value} state, got {state.scaling.value}")


def _physical_rhs(params: ModelParameters, grid: PeriodicGrid, u: Field) -> Field:
    b = params.drift
    lam = params.kernel_scale
    ae = params.alpha * params.eps
    ux = spectral_derivative(grid, u, 1)
    source = (
        (params.c - b) * u
        + ae * dealiased_product(grid, [u, u])
        + 0.5 * ae * lam * dealiased_product(grid, [ux, ux])
        + (params.w1 / 3) * params.eps**2 * dealiased_product(grid, [u, u, u])
        + (params.w2 / 4) * params.eps**3 * dealiased_product(grid, [u, u, u, u])
    )
    pressure_x = spectral_derivative(grid, helmholtz_inverse(grid, lam, source), 1)
    return -b * ux - ae * dealiased_product(grid, [u, ux]) - pressure_x


def _normalized_rhs(params: ModelParameters, grid: PeriodicGrid, u: Field) -> Field:
    b = params.drift
    ux = spectral_derivative(grid, u, 1)
    source = (
        (params.c - b) * u
        + dealiased_product(grid, [u, u])
        + 0.5 * dealiased_product(grid, [ux, ux])
        + (params.w1n / 3) * dealiased_product(grid, [u, u, u])
        + (params.w2n / 4) * dealiased_product(grid, [u, u, u, u])
    )
    pressure_x = spectral_derivative(grid, helmholtz_inverse(grid, 1.0, source), 1)
    return -dealiased_product(grid, [u, ux]) - b * ux - pressure_x


def rhs_physical(params: ModelParameters, state: WaveState) -> Field:
    """Time derivative of u in the physical scaling.

    u_t = -(beta0/beta) u_x - alpha*eps*u*u_x - P_x with
    (1 - beta*mu*d^2) P = (c - beta0/beta) u + alpha*eps*u^2
    + alpha*beta*eps*mu*u_x^2 / 2 + (w1/3) eps^2 u^3 + (w2/4) eps^3 u^4.

    Raises:
        ScalingError: If the state is not physical
    """
    _require_scaling(state, Scaling.PHYSICAL)
    return _physical_rhs(params, state.grid, state.u)


def rhs_normalized(params: ModelParameters, state: WaveState) -> Field:
    """Time derivative of u in the normalized scaling (kernel parameter 1).

    Raises:
        ScalingError: If the state is not normalized
    """
    _require_scaling(state, Scaling.NORMALIZED)
    return _normalized_rhs(params, state.grid, state.u)


def rhs_ch_with_drift(grid: PeriodicGrid, u: Field, drift: float, linear: float) -> Field:
    """Classical Camassa-Holm right-hand side with a drift and a linear source.

    u_t + u u_x + drift * u_x = -d/dx p * (linear * u + u^2 + u_x^2 / 2)
    """
    ux = spectral_derivative(grid, u, 1)
    source = linear * u + dealiased_product(grid, [u, u]) + 0.5 * dealiased_product(grid, [ux, ux])
    nonlocal_term = helmholtz_inverse(grid, 1.0, source)
    advection = dealiased_product(grid, [u, ux]) + drift * ux
    return -advection - spectral_derivative(grid, nonlocal_term, 1)


def rk4_step(rhs: RhsFunction, u: Field, dt: float) -> tuple[Field, tuple[Field, ...]]:
    """Advance one classic RK4 step.

    Returns:
        (next field, the four stage fields the rhs was evaluated at)
    """
    k1 = rhs(u)
    u2 = u + 0.5 * dt * k1
    k2 = rhs(u2)
    u3 = u + 0.5 * dt * k2
    k3 = rhs(u3)
    u4 = u + dt * k3
    k4 = rhs(u4)
    return u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4), (u, u2, u3, u4)


def resolve_time_step(config: RunConfig, u0: Field) -> tuple[float, int]:
    """Pick the step so that an integer number of steps lands on t_end.

    The auto step bounds every linear phase speed, which lies between
    beta0/beta and c, by magnitude; beta0/beta turns large and negative
    close to the admissible rotation limit.

    Returns:
        (dt, number of steps)
    """
    if config.dt == "auto":
        drift = config.params.drift
        speed = float(np.max(np.abs(u0))) + abs(drift) + abs(config.params.c - drift)
        target = AUTO_CFL * config.grid.spacing / speed
    else:
        target = float(config.dt)
    steps = max(1, math.ceil(config.t_end / target - STEP_COUNT_SLACK))
    return config.t_end / steps, steps


def resolve_blowup_threshold(config: RunConfig) -> float:
    """Slope magnitude that ends the run, resolving "auto" from the grid spacing.

    Physical grids are measured in normalized units and the result is mapped
    back through u -> u / (alpha*eps), x -> sqrt(beta*mu) * x.
    """
    if config.blowup_threshold != "auto":
        return float(config.blowup_threshold)
    spacing = config.grid.spacing
    slope_scale = 1.0
    if config.scaling is Scaling.PHYSICAL:
        length_scale = math.sqrt(config.params.kernel_scale)
        spacing /= length_scale
        slope_scale = 1.0 / (config.params.alpha * config.params.eps * length_scale)
    return BLOWUP_RESOLUTION_FRACTION / math.sqrt(spacing) * slope_scale


def rhs_for(config: RunConfig) -> RhsFunction:
    """Bind the right-hand side matching the configured scaling."""
    if config.scaling is Scaling.PHYSICAL:
        return lambda u: _physical_rhs(config.params, config.grid, u)
    return lambda u: _normalized_rhs(config.params, config.grid, u)


def evolve(config: RunConfig, u0: Field) -> Trajectory:
    """Integrate from u0 until t_end, slope blow-up, or loss of finiteness.

    Args:
        config: Run configuration
        u0: Initial field on config.grid

    Returns:
        Trajectory whose states always include the initial and final fields
    """
    grid = config.grid
    u = make_field(grid, u0)
    rhs = rhs_for(config)
    dt, steps = resolve_time_step(config, u)
    threshold = resolve_blowup_threshold(config)

    states = [WaveState(grid, u, 0.0, config.scaling)]
    stage_cache: list[StageRecord] | None = [] if config.retain_stages else None
    termination = TerminationStatus.COMPLETED
    t_break = None
    x_break = None

    ux = spectral_derivative(grid, u, 1)
    slope_norm = float(np.max(np.abs(ux)))
    slope_integral = 0.0
    min_ux_history = [float(np.min(ux))]

    with structured_logger.timed_operation(
        "evolve",
        "Evolution finished",
        scaling=config.scaling.value,
        n=grid.n,
        dt=dt,
        blowup_threshold=threshold,
    ) as extra:
        for step in range(steps):
            t_now = step * dt
            u_next, stages = rk4_step(rhs, u, dt)
            t_next = (step + 1) * dt

            if not validate_finite(u_next).is_valid:
                termination = TerminationStatus.NON_FINITE
                structured_logger.warning(
                    "evolve", "Non-finite field, stopping", t=t_next, step_index=step + 1
                )
                break

            if stage_cache is not None:
                stage_cache.append(StageRecord(t_now, dt, tuple(stages)))

            u = u_next
            ux = spectral_derivative(grid, u, 1)
            next_norm = float(np.max(np.abs(ux)))
            slope_integral += 0.5 * dt * (slope_norm + next_norm)
            slope_norm = next_norm
            min_ux = float(np.min(ux))
            min_ux_history.append(min_ux)

            if -min_ux > threshold:
                termination = TerminationStatus.SLOPE_BLOWUP
                t_break = t_next
                x_break = float(grid.nodes[int(np.argmin(ux))])
                states.append(WaveState(grid, u, t_next, config.scaling))
                structured_logger.info(
                    "evolve", "Slope blow-up detected", t_break=t_break, x_break=x_break
                )
                break

            if (step + 1) % config.snapshot_stride == 0 or step + 1 == steps:
                states.append(WaveState(grid, u, t_next, config.scaling))

        if termination is TerminationStatus.NON_FINITE and states[-1].t != step * dt:
            states.append(WaveState(grid, u, step * dt, config.scaling))

        extra.update(termination=termination.value, steps_taken=len(min_ux_history) - 1)

    return Trajectory(
        config=config,
        states=states,
        termination=termination,
        dt=dt,
        steps=len(min_ux_history) - 1,
        stage_cache=stage_cache,
        t_break=t_break,
        x_break=x_break,
        slope_integral=slope_integral,
        min_ux_history=min_ux_history,
    )


def _rescaled(state: WaveState, factor: float, amplitude: float, scaling: Scaling) -> WaveState:
    grid = PeriodicGrid(state.grid.length * factor, state.grid.n)
    return WaveState(grid, state.u * amplitude, state.t * factor, scaling)


def scale_map(params: ModelParameters, normalized: WaveState) -> WaveState:
    """Map a normalized state to the physical scaling.

    A normalized state (v, t, L) corresponds to the physical state
    (v / (alpha*eps), sqrt(beta*mu) * t, sqrt(beta*mu) * L).

    Raises:
        ScalingError: If the input is not normalized
    """
    _require_scaling(normalized, Scaling.NORMALIZED)
    factor = math.sqrt(params.kernel_scale)
    return _rescaled(normalized, factor, 1.0 / (params.alpha * params.eps), Scaling.PHYSICAL)


def unscale_map(params: ModelParameters, physical: WaveState) -> WaveState:
    """Inverse of scale_map.

    Raises:
        ScalingError: If the input is not physical
    """
    _require_scaling(physical, Scaling.PHYSICAL)
    factor = 1.0 / math.sqrt(params.kernel_scale)
    return _rescaled(physical, factor, params.alpha * params.eps, Scaling.NORMALIZED)


def galilean_speed(params: ModelParameters) -> float:
    """Frame speed (c - 3*beta0/beta) / 2 of the reduction to classical CH."""
    return (params.c - 3 * params.drift) / 2


def to_classical_ch(params: ModelParameters, state: WaveState) -> WaveState:
    """Map a non-rotating normalized state to the classical CH frame.

    w(t, y) = u(t, y - sigma*t) - k/2 solves w_t + w w_y = -d/dy p * (w^2 + w_y^2 / 2).

    Raises:
        ScalingError: If the state is not normalized
        ValidationError: If the rotation is nonzero
    """
    _require_scaling(state, Scaling.NORMALIZED)
    if params.omega != 0:
        raise ValidationError(f"Classical reduction needs omega = 0, got {params.omega!r}")
    shifted = spectral_shift(state.grid, state.u, galilean_speed(params) * state.t)
    return WaveState(state.grid, shifted - params.k / 2, state.t, Scaling.NORMALIZED)

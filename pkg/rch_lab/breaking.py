"""Wave-breaking certification and characteristic tracking.

A datum breaks in finite time if at some point x0

    u0_x(x0) < -|u0(x0) - k/2| - sqrt(2) * C0,

and then the slope blows up no later than

    T = 2 / (sqrt(u0_x(x0)^2 - (u0(x0) - k/2)^2) - sqrt(2) * C0).

The characteristic through x0 carries M = u - k/2 - u_x and N = u - k/2 + u_x,
which move apart monotonically until breaking. The solver works in the
untranslated frame, so characteristics move with u + beta0/beta and the
drift is subtracted from reported positions.
"""

import math
from dataclasses import dataclass

import numpy as np

from .diagnostics import conserved
from .logging_utils import structured_logger
from .nonlocal_ops import (
    Field,
    PeriodicGrid,
    conv_half_kernels,
    interpolate,
    make_field,
    spectral_derivative,
)
from .params import ModelParameters
from .solver import Trajectory, WaveState
from .validation import Scaling, ScalingError, ValidationError, validate_boundary_decay


@dataclass(frozen=True)
class BreakingCertificate:
    """Verdict of the breaking criterion for one initial datum."""

    x0: float
    u0_at: float
    u0x_at: float
    e0: float
    c0: float
    k: float
    margin: float
    t_bound: float | None
    certified: bool

    def as_dict(self) -> dict:
        return {
            "x0": self.x0,
            "u0_at": self.u0_at,
            "u0x_at": self.u0x_at,
            "e0": self.e0,
            "c0": self.c0,
            "k": self.k,
            "margin": self.margin,
            "t_bound": self.t_bound,
            "certified": self.certified,
        }


@dataclass(eq=False)
class CharacteristicTrace:
    """Values carried along one characteristic."""

    x0: float
    times: np.ndarray
    q: np.ndarray
    u_along: np.ndarray
    ux_along: np.ndarray
    m_along: np.ndarray
    n_along: np.ndarray


@dataclass(frozen=True)
class LaunchConditions:
    """Sign conditions on M and N at the certifying node."""

    m0: float
    n0: float
    holds: bool


def breaking_constant(params: ModelParameters, e0: float) -> float:
    """C0 with C0^2 = |w1|/(2 alpha^2) E0^(3/2) + |w2|/(2 alpha^3) E0^2.

    Raises:
        ValidationError: If e0 is negative
    """
    if e0 < 0:
        raise ValidationError(f"Energy must be nonnegative, got {e0!r}")
    c0_sq = 0.5 * abs(params.w1n) * e0**1.5 + 0.5 * abs(params.w2n) * e0**2
    return math.sqrt(c0_sq)


def certify(params: ModelParameters, grid: PeriodicGrid, u0: Field) -> BreakingCertificate:
    """Scan every node of a normalized datum for the breaking condition.

    The node with the largest margin wins; ties go to the smallest x.

    Args:
        params: Model parameters
        grid: Periodic grid of the datum
        u0: Normalized initial velocity

    Returns:
        BreakingCertificate, certified or not
    """
    u0 = make_field(grid, u0)
    decay = validate_boundary_decay(u0)
    if not decay.is_valid:
        structured_logger.warning(
            "certify", "Datum does not decay near the boundary", detail=decay.error_message
        )

    state = WaveState(grid, u0, 0.0, Scaling.NORMALIZED)
    e0 = conserved(params, state).e_val
    c0 = breaking_constant(params, e0)
    k = params.k

    ux = spectral_derivative(grid, u0, 1)
    margins = -ux - np.abs(u0 - k / 2) - math.sqrt(2) * c0
    index = int(np.argmax(margins))
    margin = float(margins[index])
    u_at = float(u0[index])
    ux_at = float(ux[index])

    certified = margin > 0
    t_bound = None
    if certified:
        t_bound = 2.0 / (math.sqrt(ux_at**2 - (u_at - k / 2) ** 2) - math.sqrt(2) * c0)

    certificate = BreakingCertificate(
        x0=float(grid.nodes[index]),
        u0_at=u_at,
        u0x_at=ux_at,
        e0=e0,
        c0=c0,
        k=k,
        margin=margin,
        t_bound=t_bound,
        certified=certified,
    )
    structured_logger.info(
        "certify", "Certificate computed", certified=certified, margin=margin, t_bound=t_bound
    )
    return certificate


def launch_conditions(certificate: BreakingCertificate) -> LaunchConditions:
    """M(0) > 0, N(0) < 0 and M(0) N(0) / 2 + C0^2 < 0 at the certifying node."""
    shifted = certificate.u0_at - certificate.k / 2
    m0 = shifted - certificate.u0x_at
    n0 = shifted + certificate.u0x_at
    holds = m0 > 0 and n0 < 0 and 0.5 * m0 * n0 + certificate.c0**2 < 0
    return LaunchConditions(m0=m0, n0=n0, holds=holds)


def track_characteristic(
    trajectory: Trajectory, params: ModelParameters, x0: float
) -> CharacteristicTrace:
    """Follow the characteristic from x0 through a normalized trajectory.

    Positions advance with the same RK4 stages as the field, evaluating the
    cached stage fields by trigonometric interpolation.

    Raises:
        ValidationError: If the trajectory kept no stage cache
        ScalingError: If the trajectory is not normalized
    """
    if trajectory.stage_cache is None:
        raise ValidationError("Trajectory has no stage cache; rerun with retain_stages")
    if trajectory.config.scaling is not Scaling.NORMALIZED:
        raise ScalingError("Characteristics are tracked in the normalized scaling")

    grid = trajectory.config.grid
    b = params.drift
    q = float(x0)
    times, positions, u_vals, ux_vals = [], [], [], []

    def record(t: float, field: Field, position: float) -> None:
        value, slope = interpolate(grid, field, position)
        times.append(t)
        positions.append((position - b * t) % grid.length)
        u_vals.append(float(value))
        ux_vals.append(float(slope))

    def velocity(field: Field, position: float) -> float:
        value, _ = interpolate(grid, field, position)
        return float(value) + b

    with structured_logger.timed_operation("characteristic", "Characteristic traced", x0=x0):
        for record_step in trajectory.stage_cache:
            first, second, third, fourth = record_step.stages
            dt = record_step.dt
            record(record_step.t, first, q)
            v1 = velocity(first, q)
            v2 = velocity(second, q + 0.5 * dt * v1)
            v3 = velocity(third, q + 0.5 * dt * v2)
            v4 = velocity(fourth, q + dt * v3)
            q += dt / 6.0 * (v1 + 2 * v2 + 2 * v3 + v4)
        final = trajectory.final
        record(final.t, final.u, q)

    u_along = np.array(u_vals)
    ux_along = np.array(ux_vals)
    shifted = u_along - params.k / 2
    return CharacteristicTrace(
        x0=float(x0),
        times=np.array(times),
        q=np.array(positions),
        u_along=u_along,
        ux_along=ux_along,
        m_along=shifted - ux_along,
        n_along=shifted + ux_along,
    )


def riccati_h(trace: CharacteristicTrace) -> np.ndarray:
    """h = sqrt(-M N) along a trace, zero where M N is nonnegative."""
    return np.sqrt(np.clip(-trace.m_along * trace.n_along, 0.0, None))


def convolution_bound_margin(params: ModelParameters, grid: PeriodicGrid, u: Field) -> float:
    """Smallest slack of p+- * (u^2 - k u + u_x^2/2) >= (u^2 - k u - k^2/4) / 4.

    Products are taken pointwise without truncation. A value at or above
    about -1e-10 means the estimate holds for this field.
    """
    u = make_field(grid, u)
    k = params.k
    ux = spectral_derivative(grid, u, 1)
    plus, minus = conv_half_kernels(grid, u * u - k * u + 0.5 * ux * ux)
    lower = 0.25 * (u * u - k * u - k * k / 4)
    return float(min(np.min(plus - lower), np.min(minus - lower)))

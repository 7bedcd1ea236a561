"""Conserved quantities, slope extrema and free-surface reconstruction."""

from dataclasses import dataclass

import numpy as np

from .nonlocal_ops import Field, helmholtz_forward, periodic_integral, spectral_derivative
from .params import ModelParameters
from .solver import WaveState
from .validation import Scaling, ScalingError


@dataclass(frozen=True)
class ConservedTriple:
    """Momentum-like mass I, energy E and the higher Hamiltonian F."""

    i_val: float
    e_val: float
    f_val: float


@dataclass(frozen=True)
class SlopeReport:
    """Steepest descent of a field and its sup norm."""

    min_ux: float
    argmin_x: float
    max_abs_u: float


def conserved(params: ModelParameters, state: WaveState) -> ConservedTriple:
    """Evaluate I, E, F with the periodic trapezoid rule.

    Physical scaling:
        I = int u
        E = 1/2 int (u^2 + beta*mu*u_x^2)
        F = 1/2 int (c u^2 + alpha*eps u^3 + beta0*mu u_x^2 + (w1 eps^2/6) u^4
                     + (w2 eps^3/10) u^5 + alpha*beta*eps*mu u u_x^2)

    Normalized scaling uses lam = 1 in E and the coefficients
    (c, 1, beta0/beta, w1n/6, w2n/10, 1) in F.
    """
    grid = state.grid
    u = state.u
    ux = spectral_derivative(grid, u, 1)

    if state.scaling is Scaling.PHYSICAL:
        lam = params.kernel_scale
        ae = params.alpha * params.eps
        coeffs = (
            params.c,
            ae,
            params.beta0 * params.mu,
            params.w1 * params.eps**2 / 6,
            params.w2 * params.eps**3 / 10,
            ae * lam,
        )
    else:
        lam = 1.0
        coeffs = (params.c, 1.0, params.drift, params.w1n / 6, params.w2n / 10, 1.0)

    c_quad, c_cubic, c_slope, c_quartic, c_quintic, c_mixed = coeffs
    u2 = u * u
    ux2 = ux * ux
    f_density = (
        c_quad * u2
        + c_cubic * u2 * u
        + c_slope * ux2
        + c_quartic * u2 * u2
        + c_quintic * u2 * u2 * u
        + c_mixed * u * ux2
    )
    return ConservedTriple(
        i_val=periodic_integral(grid, u),
        e_val=0.5 * periodic_integral(grid, u2 + lam * ux2),
        f_val=0.5 * periodic_integral(grid, f_density),
    )


def slope_report(state: WaveState) -> SlopeReport:
    """Minimum of u_x over the nodes (first node on ties) and max |u|."""
    ux = spectral_derivative(state.grid, state.u, 1)
    index = int(np.argmin(ux))
    return SlopeReport(
        min_ux=float(ux[index]),
        argmin_x=float(state.grid.nodes[index]),
        max_abs_u=float(np.max(np.abs(state.u))),
    )


def surface_elevation(params: ModelParameters, state: WaveState) -> Field:
    """Free-surface elevation reconstructed from the velocity.

    eta = u/c + g1 eps u^2 + g2 eps^2 u^3 + g3 eps^3 u^4 + g4 eps mu u_xx,
    with g4 taken at the height parameter z0.

    Raises:
        ScalingError: If the state is not physical
    """
    if state.scaling is not Scaling.PHYSICAL:
        raise ScalingError("Surface elevation is defined for physical states only")
    u = state.u
    eps = params.eps
    uxx = spectral_derivative(state.grid, u, 2)
    return (
        u / params.c
        + params.gamma1 * eps * u**2
        + params.gamma2 * eps**2 * u**3
        + params.gamma3 * eps**3 * u**4
        + params.gamma4 * eps * params.mu * uxx
    )


def momentum_density(params: ModelParameters, state: WaveState) -> Field:
    """m = (1 - lam d^2/dx^2) u with lam = beta*mu (physical) or 1 (normalized)."""
    lam = params.kernel_scale if state.scaling is Scaling.PHYSICAL else 1.0
    return helmholtz_forward(state.grid, lam, state.u)

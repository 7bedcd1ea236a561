"""Model constants of the rotation-Camassa-Holm equation.

Every coefficient is a closed-form function of the linear wave speed c, which
is the positive root of c^2 + 2*omega*c - 1 = 0. Inside the identity chains
omega is replaced by (1 - c^2) / (2c) so that both sides reduce to rational
functions of c and no cancellation between omega and c enters the residuals.
"""

import math
from dataclasses import dataclass

from scipy.optimize import brentq

from .logging_utils import structured_logger
from .validation import ModelInvalidError, validate_positive

# Beta vanishes at this rotation rate; the admissible region is 0 <= omega < OMEGA_MAX
OMEGA_MAX = math.sqrt((1 + 2 * math.sqrt(19)) / 6)

# Height parameter range
Z0_LOWER = 1 / math.sqrt(2)
Z0_UPPER = math.sqrt((61 - 2 * math.sqrt(19)) / 54)

IDENTITY_TOLERANCE = 1e-10


@dataclass(frozen=True)
class ModelParameters:
    """All constants of the model for one (omega, eps, mu)."""

    omega: float
    eps: float
    mu: float
    c: float
    alpha: float
    beta: float
    beta0: float
    w1: float
    w2: float
    c1: float
    z0: float
    gamma1: float
    gamma2: float
    gamma3: float
    gamma4: float
    a0: float
    a1: float
    a2: float
    a3: float
    a4: float
    w1n: float
    w2n: float
    k: float

    @property
    def drift(self) -> float:
        """Linear drift speed beta0 / beta."""
        return self.beta0 / self.beta

    @property
    def kernel_scale(self) -> float:
        """Helmholtz parameter beta * mu of the physical scaling."""
        return self.beta * self.mu

    def as_dict(self) -> dict[str, float]:
        """Every field plus the drift, keyed by name."""
        values = {name: getattr(self, name) for name in self.__dataclass_fields__}
        values["drift"] = self.drift
        return values


@dataclass(frozen=True)
class IdentityCheck:
    """One row of the coefficient identity report."""

    name: str
    value: float
    reference: float
    residual: float
    enforced: bool = True

    def passes(self, tolerance: float = IDENTITY_TOLERANCE) -> bool:
        return self.residual < tolerance


def wave_speed(omega: float) -> float:
    """Positive root of c^2 + 2*omega*c - 1 = 0, written without cancellation."""
    return 1.0 / (math.sqrt(1.0 + omega * omega) + omega)


def _beta_of_speed(c: float) -> float:
    s = c * c
    return (3 * s * s + 8 * s - 1) / (6 * (s + 1) ** 2)


def _z0_squared(s: float) -> float:
    return 0.5 - (2.0 / 3.0) / (s + 1) + (4.0 / 3.0) / (s + 1) ** 2


def derive_params(omega: float, eps: float, mu: float) -> ModelParameters:
    """Derive every model constant from the rotation, amplitude and shallowness.

    Args:
        omega: Nondimensional Coriolis frequency, 0 <= omega < OMEGA_MAX
        eps: Amplitude parameter (> 0)
        mu: Shallowness parameter (> 0)

    Returns:
        ModelParameters with all derived constants filled in

    Raises:
        ModelInvalidError: If the parameters leave the admissible region
    """
    for name, value in (("eps", eps), ("mu", mu)):
        result = validate_positive(name, value)
        if not result.is_valid:
            structured_logger.error("params", "Invalid model parameter", parameter=name)
            raise ModelInvalidError(f"model invalid: {result.error_message}")

    if not math.isfinite(omega) or omega < 0:
        structured_logger.error("params", "Invalid model parameter", parameter="omega")
        raise ModelInvalidError(f"model invalid: omega must be nonnegative, got {omega!r}")

    if omega >= OMEGA_MAX:
        structured_logger.error(
            "params", "Rotation outside admissible range", omega=omega, omega_max=OMEGA_MAX
        )
        raise ModelInvalidError(
            f"model invalid: beta nonpositive for omega={omega!r} (limit {OMEGA_MAX:.12f})"
        )

    c = wave_speed(omega)
    s = c * c
    sp = s + 1

    alpha = s / sp
    beta = _beta_of_speed(c)
    if beta <= 0:
        raise ModelInvalidError(f"model invalid: beta nonpositive for omega={omega!r}")
    beta0 = c * (s * s + 6 * s - 1) / (6 * sp**2)

    w1 = -3 * c * (s - 1) * (s - 2) / (2 * sp**3)
    w2 = (s - 2) * (s - 1) ** 2 * (8 * s - 1) / (2 * sp**5)
    c1 = -3 * c**3 / (2 * sp)
    z0_sq = _z0_squared(s)

    gamma1 = (2 - s) / (2 * s * sp)
    gamma2 = (s - 1) * (s - 2) * (2 * s + 1) / (2 * c**3 * sp**3)
    gamma3 = -((s - 1) ** 2) * (s - 2) * (21 * s * s + 16 * s + 4) / (8 * s * s * sp**5)
    gamma4 = z0_sq / (2 * c) - (3 * s + 1) / (6 * c * sp)

    a0 = (
        s
        * (s - 2)
        * (3 * s**5 + 228 * s**4 - 540 * s**3 - 180 * s**2 - 13 * s + 42)
        / (12 * sp**6)
    )
    a1 = 3 * s * (s - 2) / sp**2
    a2 = -s * (2 - s) * (s**3 - 7 * s**2 + 5 * s - 5) / sp**4
    a3 = -s * (9 * s * s + 16 * s - 2) / (3 * sp**2)
    a4 = -s * (3 * s * s + 8 * s - 1) / (3 * sp**2)

    params = ModelParameters(
        omega=float(omega),
        eps=float(eps),
        mu=float(mu),
        c=c,
        alpha=alpha,
        beta=beta,
        beta0=beta0,
        w1=w1,
        w2=w2,
        c1=c1,
        z0=math.sqrt(z0_sq),
        gamma1=gamma1,
        gamma2=gamma2,
        gamma3=gamma3,
        gamma4=gamma4,
        a0=a0,
        a1=a1,
        a2=a2,
        a3=a3,
        a4=a4,
        w1n=w1 / alpha**2,
        w2n=w2 / alpha**3,
        k=beta0 / beta - c,
    )
    structured_logger.debug("params", "Derived model parameters", omega=omega, c=c, beta=beta)
    return params


def relative_residual(value: float, reference: float) -> float:
    """Residual that is relative for |reference| > 1 and absolute otherwise."""
    diff = abs(value - reference)
    scale = abs(reference)
    return diff / scale if scale > 1 else diff


def _check(name: str, value: float, reference: float, enforced: bool = True) -> IdentityCheck:
    return IdentityCheck(
        name=name,
        value=value,
        reference=reference,
        residual=relative_residual(value, reference),
        enforced=enforced,
    )


def identity_report(
    params: ModelParameters, tolerance: float = IDENTITY_TOLERANCE
) -> list[IdentityCheck]:
    """Evaluate the coefficient identities linking the closed forms.

    Each chain is evaluated independently of the closed form it is compared to.
    Rows with enforced=False document known inconsistencies between two printed
    forms of the same coefficient and never count as failures.

    Args:
        params: Valid model parameters
        tolerance: Threshold above which an enforced residual is logged

    Returns:
        List of IdentityCheck rows in a fixed order
    """
    c = params.c
    s = c * c
    sp = s + 1
    om = (1 - s) / (2 * c)
    c1 = params.c1
    d = c + c1
    gamma2_closed = (s - 1) * (s - 2) * (2 * s + 1) / (2 * c**3 * sp**3)
    a1_closed = 3 * s * (s - 2) / sp**2
    a2_closed = -s * (2 - s) * (s**3 - 7 * s**2 + 5 * s - 5) / sp**4

    # Expansion-chain intermediates
    q_gamma = 64 * c * c1 + 24 * c1**2 + 45 * s + 24 * om**2 - 3
    q_a2 = 64 * c * c1 + 24 * c1**2 + 45 * s - 15
    a6 = 9 * d / s + a1_closed / c**3
    a11 = (s * a6 - 6 * d) / (2 * c * (om + c))
    a5 = 6 * d**2 / s**2 + 12 * c * gamma2_closed + 4 * a1_closed * d / c**5 + a2_closed / s**2
    a12 = (
        c * a5 / (2 * (om + c))
        - 9 * s * gamma2_closed / (2 * (om + c))
        - (2 * d / s) * a11
    )
    b2_closed = (
        s
        * (2 - s)
        * (3 * s**5 + 228 * s**4 - 540 * s**3 - 180 * s**2 - 13 * s + 42)
        / (60 * sp**6)
    )
    g_b1 = 82 * c * c1 + 36 * c1**2 + 45 * s - 18 * om * c1 - 27 * om * c - 15
    b1 = d**2 * g_b1 / (3 * (om + c) ** 2) + c1 * d * q_gamma / (3 * (om + c) ** 2)
    b2_sum = (
        b1 / 5
        - d**2 * (2 * c1 - 3 * om) / (3 * (om + c))
        + 2 * c * d * q_gamma / (12 * (om + c) ** 2)
    )

    checks = [
        _check("c_quadratic", s + 2 * params.omega * c - 1, 0.0),
        _check("c1_forms", c1, -3 * s / (4 * (params.omega + c))),
        _check("a1_product", -2 * (3 * c + 2 * c1) * (c + c1), a1_closed),
        _check("a2_product", -q_a2 * d / (3 * (c + om)), a2_closed),
        _check("a3_product", 2 * s / 3 + 40 * c * c1 / 9 + 4 * c1**2 / 3, params.a3),
        _check("a4_product", s / 3 + 20 * c * c1 / 9 + 8 * c1**2 / 9, params.a4),
        _check("gamma1_chain", d / c**3, params.gamma1),
        _check(
            "gamma2_chain",
            2 * d**2 / c**5 + (2 * c1 - 3 * om) * d / (3 * s * s * (c + om)),
            params.gamma2,
        ),
        _check(
            "gamma3_chain",
            5 * d**3 / c**7
            + 5 * (2 * c1 - 3 * om) * d**2 / (3 * c**6 * (c + om))
            + q_gamma * d / (24 * c**5 * (c + om) ** 2),
            params.gamma3,
        ),
        _check("gamma4_z0", params.gamma4, -(3 * s * s + 6 * s - 5) / (12 * c * sp**2)),
        _check(
            "gamma4_scaled",
            2 * c**3 * params.gamma4 / sp,
            -s * (3 * s * s + 6 * s - 5) / (6 * sp**3),
        ),
        _check("w1_chain", a11, params.w1),
        _check("w2_chain", a12, params.w2),
        _check("a0_b2_closed", params.a0, -5 * b2_closed),
        _check(
            "a14_matching",
            -s * (3 * s * s + 8 * s - 1) / (3 * sp**3),
            -2 * s * params.beta / sp,
        ),
        _check("b2_sum_form", b2_sum, b2_closed, enforced=False),
        _check("beta0_chain", -c * params.beta - c**3 / (3 * sp), params.beta0, enforced=False),
    ]

    for check in checks:
        if check.enforced and not check.passes(tolerance):
            structured_logger.warning(
                "params",
                "Identity residual above tolerance",
                identity=check.name,
                residual=check.residual,
                omega=params.omega,
            )
    return checks


def admissible_omega_limit() -> float:
    """Locate the sign change of beta(omega) by root finding.

    Returns:
        The rotation rate at which beta vanishes
    """
    return brentq(lambda om: _beta_of_speed(wave_speed(om)), 0.0, 2.0, xtol=1e-15, rtol=1e-15)

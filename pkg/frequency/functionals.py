"""Boundary and bulk functionals of a separated function u = f(r)·a(θ)

On an end with |∇r| = ψ and area factor A = h^{(n-1)/2}:

    B(ρ)   = ψ·A·f²·‖a‖²
    F(ρ)   = −ψ·A·f·f′·‖a‖²
    D̂_w(ρ) = ∫_ρ^∞ (ψ²f′² + μ f²/h)·‖a‖²·w·A/ψ dr
    L̂_w(ρ) = ∫_ρ^∞ f·(L f)·‖a‖²·w·A/ψ dr

with w = Φ_m for L_m and w = Ψ_m for L⁺_m. Every quantity is kept as a
LogScaled number; the profile's own log scale enters twice (u is squared).
"""

import logging
import math
from dataclasses import dataclass

from errors import DomainError
from geometry.ends import area_element_log
from operators.context import DriftOperator, OperatorSign, SeparatedFunction
from operators.drift import radial_action, radial_action_scale
from quadrature.integrate import DEFAULT_QUADRATURE, LogScaled, QuadratureSpec, WeightedIntegral, integrate_radial
from quadrature.weights import WeightSpec

logger = logging.getLogger(__name__)

INTEGRABILITY_OFFSETS = (10.0, 20.0)
INTEGRABILITY_SLOPE = -1.0 / 16.0
"""the coefficient of t² in ln(f²·w·A/ψ) must stay below this"""


@dataclass(frozen=True)
class BoundaryQuantities:
    """B and F at ρ, both in units of e^{log_scale}"""

    rho: float
    b: float
    f: float
    log_scale: float

    @property
    def B(self) -> LogScaled:
        return LogScaled(self.b, self.log_scale)

    @property
    def F(self) -> LogScaled:
        return LogScaled(self.f, self.log_scale)

    @property
    def frequency(self) -> float:
        """N(ρ) = ρF/B"""
        if self.b == 0.0:
            return math.nan
        return self.rho * self.f / self.b


@dataclass(frozen=True)
class BulkQuantities:
    rho: float
    operator: DriftOperator
    d_hat: WeightedIntegral
    l_hat: WeightedIntegral
    l_shifted: WeightedIntegral | None = None
    """∫u(L + λ)u·w for the eigen-context λ, when u carries one"""

    @property
    def f_hat(self) -> LogScaled:
        """D̂ + L̂, the weighted flux by the divergence theorem"""
        return self.d_hat + self.l_hat


def log_weight_at(op: DriftOperator, rho: float) -> float:
    """ln Φ_m(ρ) or ln Ψ_m(ρ)"""
    return op.weight.log_value(rho)


def boundary_quantities(u: SeparatedFunction, rho: float) -> BoundaryQuantities:
    u.end.check_radius(rho)
    f0, f1, _ = u.profile.scaled_derivatives(rho)
    psi = u.end.psi(rho)
    log_scale = 2.0 * u.log_reference(rho) + u.end.log_area_factor(rho) + math.log(u.norm_sq)
    return BoundaryQuantities(rho=rho, b=psi * f0 * f0, f=-psi * f0 * f1, log_scale=log_scale)


def sphere_l2(u: SeparatedFunction, rho: float) -> LogScaled:
    """∫_{S_ρ} u² = A·f²·‖a‖²"""
    boundary = boundary_quantities(u, rho)
    return LogScaled(boundary.b / u.end.psi(rho), boundary.log_scale)


class RadialDensity:
    """Scaled integrands of a separated function, with the matching log factor

    Each integrand is in units of e^{2L(t)}; `log_factor` restores that
    scale together with the volume density A/ψ, ‖a‖² and, for L⁺_m, the
    factor e^{t²/2} turning Φ_m into Ψ_m.
    """

    def __init__(self, u: SeparatedFunction, op: DriftOperator):
        self.u = u
        self.op = op
        self.end = u.end
        self.log_norm = math.log(u.norm_sq)

    def log_factor(self, t: float) -> float:
        extra = 0.5 * t * t if self.op.sign is OperatorSign.PLUS else 0.0
        return 2.0 * self.u.log_reference(t) + area_element_log(self.end, t) + self.log_norm + extra

    def square(self, t: float) -> float:
        return self.u.profile.scaled_derivatives(t)[0] ** 2

    def energy(self, t: float) -> float:
        """|∇u|² per ‖a‖²"""
        f0, f1, _ = self.u.profile.scaled_derivatives(t)
        psi = self.end.psi(t)
        return psi * psi * f1 * f1 + self.u.mu_link * f0 * f0 / self.end.h(t)

    def action(self, t: float, shift: float = 0.0) -> float:
        """u·(L + shift)u per ‖a‖²"""
        f0, f1, f2 = self.u.profile.scaled_derivatives(t)
        return f0 * (radial_action(self.op, self.end, self.u.mu_link, t, f0, f1, f2) + shift * f0)

    def action_scale(self, t: float, shift: float = 0.0) -> float:
        """Size of the terms cancelling in action(t, shift)"""
        f0, f1, f2 = self.u.profile.scaled_derivatives(t)
        return abs(f0) * (radial_action_scale(self.op, self.end, self.u.mu_link, t, f0, f1, f2) + abs(shift * f0))

    def integrate(self, integrand, a: float, q: QuadratureSpec = DEFAULT_QUADRATURE, b: float = math.inf, scale=None) -> WeightedIntegral:
        """∫_a^b integrand·w over the end, w the operator's weight"""
        return integrate_radial(
            integrand,
            WeightSpec.gaussian(self.op.m),
            a,
            b,
            q,
            log_factor=self.log_factor,
            points=self.u.profile.breakpoints,
            scale=scale,
        )


def check_integrable(u: SeparatedFunction, op: DriftOperator, rho: float) -> None:
    """Reject tails that are not integrable against the operator's weight

    Compares ln(f² + f′²) + ln w + ln(A/ψ) at ρ + 10 and ρ + 20; a Gaussian-
    integrable tail falls like −t²/4 there, the Gaussian branch rises like +t²/4.
    """
    if not math.isinf(u.profile.r_hi):
        raise DomainError(f"{u.label} is not defined on the whole tail", r_hi=u.profile.r_hi, rho=rho)
    logs = []
    for offset in INTEGRABILITY_OFFSETS:
        t = rho + offset
        f0, f1, _ = u.profile.scaled_derivatives(t)
        size = f0 * f0 + f1 * f1
        if size == 0.0:
            return
        logs.append(2.0 * u.log_reference(t) + math.log(size) + op.weight.log_value(t) + area_element_log(u.end, t))
    t1, t2 = (rho + offset for offset in INTEGRABILITY_OFFSETS)
    slope = (logs[1] - logs[0]) / (t2 * t2 - t1 * t1)
    if slope >= INTEGRABILITY_SLOPE:
        raise DomainError(
            f"{u.label} is not integrable against the {op.label} weight",
            rho=rho,
            gaussian_slope=slope,
        )


def bulk_quantities(
    u: SeparatedFunction,
    m: float,
    rho: float,
    sign: OperatorSign | str = OperatorSign.MINUS,
    q: QuadratureSpec = DEFAULT_QUADRATURE,
) -> BulkQuantities:
    """D̂ and L̂ on [ρ, ∞) for the drift operator of the given sign"""
    op = DriftOperator(OperatorSign(sign), m)
    u.end.check_radius(rho)
    check_integrable(u, op, rho)
    density = RadialDensity(u, op)

    d_hat = density.integrate(density.energy, rho, q)
    l_hat = density.integrate(density.action, rho, q, scale=density.action_scale)
    l_shifted = None
    if u.context is not None and u.context.operator == op:
        lam = u.context.lam
        l_shifted = density.integrate(lambda t: density.action(t, lam), rho, q, scale=lambda t: density.action_scale(t, lam))
    logger.debug(f"{u.label} at ρ={rho:g} under {op.label}: D̂ log={d_hat.log_abs():.4f}, L̂ log={l_hat.log_abs():.4f}")
    return BulkQuantities(rho=rho, operator=op, d_hat=d_hat, l_hat=l_hat, l_shifted=l_shifted)

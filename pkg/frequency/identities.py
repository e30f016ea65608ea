"""Derivative identities of the frequency functionals, checked by finite differences

Derivatives come from a five-point central stencil applied to independently
evaluated quadratures; the right-hand sides are assembled from their own
quadratures. Values are compared in common units: e^{ref} for B, F and
w(ρ)·e^{ref} for the hatted quantities, with ref the log scale of B(ρ).
Hatted quantities are differentiated with the weight divided out, and
w′/w = m/ρ ∓ ρ/2 is added back exactly; the stencil then only sees
polynomially varying values.
"""

import logging
import math
from dataclasses import dataclass

from errors import DomainError
from frequency.functionals import RadialDensity, boundary_quantities, bulk_quantities, log_weight_at
from operators.context import DriftOperator, OperatorSign, SeparatedFunction
from operators.drift import radial_action, radial_action_scale
from quadrature.integrate import DEFAULT_QUADRATURE, QuadratureSpec

logger = logging.getLogger(__name__)

STENCIL = ((-2, 1.0), (-1, -8.0), (1, 8.0), (2, -1.0))


@dataclass(frozen=True)
class IdentityResidual:
    name: str
    anchor: str
    lhs: float
    rhs: float
    relative_residual: float


@dataclass(frozen=True)
class IdentityReport:
    label: str
    operator: DriftOperator
    rho: float
    step: float
    residuals: tuple[IdentityResidual, ...]

    def get(self, name: str) -> IdentityResidual:
        for residual in self.residuals:
            if residual.name == name:
                return residual
        raise KeyError(name)

    @property
    def worst(self) -> float:
        return max(r.relative_residual for r in self.residuals)


def _residual(name: str, anchor: str, lhs: float, terms: list[float]) -> IdentityResidual:
    rhs = math.fsum(terms)
    scale = max(abs(lhs), math.fsum(abs(t) for t in terms))
    relative = abs(lhs - rhs) / scale if scale > 0 else 0.0
    return IdentityResidual(name=name, anchor=anchor, lhs=lhs, rhs=rhs, relative_residual=relative)


def _derivative(values: dict[int, float], step: float) -> float:
    return math.fsum(c * values[k] for k, c in STENCIL) / (12.0 * step)


def check_identities(
    u: SeparatedFunction,
    m: float,
    rho: float,
    h: float = 1e-3,
    sign: OperatorSign | str = OperatorSign.MINUS,
    q: QuadratureSpec = DEFAULT_QUADRATURE,
) -> IdentityReport:
    """Residuals of the B′, B̂′, flux-energy, D̂′ and N̂′ identities at ρ

    The step is h·ρ. The D̂′ and N̂′ identities are stated for the Gaussian
    weight Φ_m and are only evaluated for L_m. On exact cones all of them
    hold without error terms.
    """
    op = DriftOperator(OperatorSign(sign), m)
    end = u.end
    step = h * rho
    if rho - 2 * step < end.r_inner:
        raise DomainError("Stencil reaches below the inner radius", rho=rho, step=step, r_inner=end.r_inner)

    n, sigma = end.n, op.sign.sigma
    centre = boundary_quantities(u, rho)
    ref = centre.log_scale
    ref_hat = ref + log_weight_at(op, rho)
    bulk = bulk_quantities(u, m, rho, op.sign, q)

    log_weight_slope = m / rho - sigma * rho / 2.0
    b_values, d_values, n_hat_values = {}, {}, {}
    for k, _ in STENCIL:
        r = rho + k * step
        boundary = boundary_quantities(u, r)
        b_values[k] = boundary.B.relative_to(ref)
        if op.sign is OperatorSign.MINUS:
            stripped = bulk_quantities(u, m, r, op.sign, q).d_hat.relative_to(ref + log_weight_at(op, r))
            d_values[k] = stripped
            n_hat_values[k] = r * stripped / b_values[k] if b_values[k] > 0 else 0.0

    b0, f0 = centre.b, centre.f
    residuals = [
        _residual("boundary_norm", "boundary-norm-derivative", _derivative(b_values, step), [(n - 1) / rho * b0, -2.0 * f0]),
        _residual(
            "weighted_boundary_norm",
            "boundary-norm-derivative",
            _derivative(b_values, step) + log_weight_slope * b0,
            [((n + m - 1) / rho - sigma * rho / 2.0) * b0, -2.0 * f0],
        ),
        _residual("flux_energy", "flux-energy-identity", f0, [bulk.d_hat.relative_to(ref_hat), bulk.l_hat.relative_to(ref_hat)]),
    ]

    if op.sign is OperatorSign.MINUS:
        density = RadialDensity(u, op)
        g0, g1, _ = u.profile.scaled_derivatives(rho)
        psi = end.psi(rho)
        d_hat = bulk.d_hat.relative_to(ref_hat)

        def position_action(t: float) -> float:
            """(X·u)(L u) per ‖a‖², X·u = r f′ for X = r∇r/|∇r|²"""
            a0, a1, a2 = u.profile.scaled_derivatives(t)
            return t * a1 * radial_action(op, end, u.mu_link, t, a0, a1, a2)

        def position_scale(t: float) -> float:
            a0, a1, a2 = u.profile.scaled_derivatives(t)
            return abs(t * a1) * radial_action_scale(op, end, u.mu_link, t, a0, a1, a2)

        def tail_energy(t: float) -> float:
            return 0.5 * (t * t - rho * rho) * density.energy(t)

        position = density.integrate(position_action, rho, q, scale=position_scale).relative_to(ref_hat)
        tail = density.integrate(tail_energy, rho, q).relative_to(ref_hat)
        normal_flux = psi * g1 * g1
        residuals.append(
            _residual(
                "energy_derivative",
                "energy-derivative",
                _derivative(d_values, step) + log_weight_slope * d_hat,
                [-2.0 / rho * position, -2.0 * normal_flux, ((n + m - 2) / rho - rho / 2.0) * d_hat, -tail / rho],
            )
        )

        frequency = centre.frequency

        def shifted_action(t: float) -> float:
            """(X·u + N(ρ)u)(L u) per ‖a‖²"""
            a0, a1, a2 = u.profile.scaled_derivatives(t)
            return (t * a1 + frequency * a0) * radial_action(op, end, u.mu_link, t, a0, a1, a2)

        def shifted_scale(t: float) -> float:
            a0, a1, a2 = u.profile.scaled_derivatives(t)
            return abs(t * a1 + frequency * a0) * radial_action_scale(op, end, u.mu_link, t, a0, a1, a2)

        if b0 > 0:
            shifted = density.integrate(shifted_action, rho, q, scale=shifted_scale).relative_to(ref_hat)
            boundary_term = psi * (rho * g1 + frequency * g0) ** 2
            residuals.append(
                _residual(
                    "frequency_derivative",
                    "frequency-derivative",
                    _derivative(n_hat_values, step),
                    [-2.0 * shifted / b0, -tail / b0, -2.0 / rho * boundary_term / b0],
                )
            )

    report = IdentityReport(label=u.label, operator=op, rho=rho, step=step, residuals=tuple(residuals))
    logger.debug(f"Identities for {u.label} at ρ={rho:g}: worst relative residual {report.worst:.2e}")
    return report

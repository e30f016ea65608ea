"""Radial action of L_m and L⁺_m on separated functions"""

from errors import DomainError
from geometry.ends import WeaklyConicalEnd
from operators.context import DriftOperator, SeparatedFunction
from quadrature.weights import safe_exp


def radial_action(op: DriftOperator, end: WeaklyConicalEnd, mu_link: float, r: float, f0: float, f1: float, f2: float) -> float:
    """ψ²f″ + [ψψ′ + (n−1)ψ²h′/(2h) + ψ²(m/r ∓ r/2)]f′ − μ_link f/h

    Linear in (f, f′, f″), so scaled derivatives give the scaled result.
    """
    drift = op.m / r - op.sign.sigma * r / 2.0
    if end.is_exact_cone:
        return f2 + ((end.n - 1) / r + drift) * f1 - mu_link * f0 / (r * r)
    psi, dpsi, h, dh = end.psi(r), end.dpsi(r), end.h(r), end.dh(r)
    psi2 = psi * psi
    first = psi * dpsi + 0.5 * (end.n - 1) * psi2 * dh / h + psi2 * drift
    return psi2 * f2 + first * f1 - mu_link * f0 / h


def radial_action_scale(op: DriftOperator, end: WeaklyConicalEnd, mu_link: float, r: float, f0: float, f1: float, f2: float) -> float:
    """Sum of the absolute values of the three terms of radial_action"""
    drift = op.m / r - op.sign.sigma * r / 2.0
    if end.is_exact_cone:
        return abs(f2) + abs(((end.n - 1) / r + drift) * f1) + abs(mu_link * f0 / (r * r))
    psi, dpsi, h, dh = end.psi(r), end.dpsi(r), end.h(r), end.dh(r)
    psi2 = psi * psi
    first = psi * dpsi + 0.5 * (end.n - 1) * psi2 * dh / h + psi2 * drift
    return abs(psi2 * f2) + abs(first * f1) + abs(mu_link * f0 / h)


def apply_scaled(op: DriftOperator, end: WeaklyConicalEnd, u: SeparatedFunction, r: float) -> tuple[float, float]:
    """(e^{-L}·Lu, L) per unit a(θ), with L the profile's log scale at r"""
    if r < end.r_inner * (1 - 1e-12):
        raise DomainError("Operator evaluated below the inner radius", radius=r, r_inner=end.r_inner)
    f0, f1, f2 = u.profile.scaled_derivatives(r)
    return radial_action(op, end, u.mu_link, r, f0, f1, f2), u.profile.log_scale(r)[0]


def apply_operator(op: DriftOperator, end: WeaklyConicalEnd, u: SeparatedFunction, r: float) -> float:
    """(L u)(r, ·) per unit a(θ)"""
    value, log_scale = apply_scaled(op, end, u, r)
    return value * safe_exp(log_scale) if log_scale != 0.0 else value

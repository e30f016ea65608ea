"""Power and Gaussian twists of almost eigenfunctions

power(μ):               û = r^{2μ}u, (L_m, λ) → (L_{m−4μ}, λ+μ), (L⁺_m, λ) → (L⁺_{m−4μ}, λ−μ)
gauss_twist(μ):         û = Φ_μ u,   (L_m, λ) → (L⁺_{m−2μ}, ½(n+m+2λ−μ))
inverse_gauss_twist(μ): û = Ψ_μ u,   (L⁺_m, λ) → (L_{m−2μ}, ½(−n−m+2λ+μ))

The multiplier is added to the profile's log scale.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from errors import DomainError
from operators.context import DriftOperator, EigenContext, OperatorSign, ResidualConvention, SeparatedFunction
from solvers.profiles import TransformedProfile, gaussian_factor, power_factor


class TransformKind(str, Enum):
    POWER = "power"
    GAUSS_TWIST = "gauss_twist"
    INVERSE_GAUSS_TWIST = "inverse_gauss_twist"


def _twisted(convention: ResidualConvention) -> ResidualConvention:
    """A Gaussian multiplier trades one power of r between |û| and |∇û|"""
    if convention is ResidualConvention.QUADRATIC:
        return ResidualConvention.TWISTED
    if convention is ResidualConvention.LINEAR:
        raise DomainError("A Gaussian twist of an r^{-1}(|u| + |∇u|) residual does not decay")
    return convention


def transformed_context(context: EigenContext, n: int, kind: TransformKind | str, mu: float) -> EigenContext:
    kind = TransformKind(kind)
    m, lam = context.m, context.lam
    if kind is TransformKind.POWER:
        shift = mu if context.sign is OperatorSign.MINUS else -mu
        return EigenContext(DriftOperator(context.sign, m - 4 * mu), lam + shift, context.convention)
    if kind is TransformKind.GAUSS_TWIST:
        if context.sign is not OperatorSign.MINUS:
            raise DomainError("gauss_twist maps L_m contexts; got L⁺", m=m)
        return EigenContext(DriftOperator.plus(m - 2 * mu), 0.5 * (n + m + 2 * lam - mu), _twisted(context.convention))
    if context.sign is not OperatorSign.PLUS:
        raise DomainError("inverse_gauss_twist maps L⁺_m contexts; got L", m=m)
    return EigenContext(DriftOperator.minus(m - 2 * mu), 0.5 * (-n - m + 2 * lam + mu), _twisted(context.convention))


def transform(u: SeparatedFunction, kind: TransformKind | str, mu: float) -> SeparatedFunction:
    kind = TransformKind(kind)
    context = transformed_context(u.require_context(), u.end.n, kind, mu)
    if kind is TransformKind.POWER:
        extra = power_factor(2 * mu)
    elif kind is TransformKind.GAUSS_TWIST:
        extra = gaussian_factor(mu, -1)
    else:
        extra = gaussian_factor(mu, 1)
    label = f"{kind.value}({mu:g})·{u.label}"
    return u.with_profile(TransformedProfile(u.profile, extra, label=label), context, label)


@dataclass(frozen=True)
class CompositionCheck:
    mu: float
    max_relative_difference: float
    """over f, f′, f″ on the sample radii"""
    operator_match: bool
    eigenvalue_difference: float


def compose_check(u: SeparatedFunction, mu: float, radii) -> CompositionCheck:
    """inverse_gauss_twist(μ) ∘ gauss_twist(μ) against power(μ)"""
    twisted = transform(transform(u, TransformKind.GAUSS_TWIST, mu), TransformKind.INVERSE_GAUSS_TWIST, mu)
    powered = transform(u, TransformKind.POWER, mu)
    worst = 0.0
    for r in radii:
        a = np.array(twisted.profile.scaled_derivatives(float(r)))
        b = np.array(powered.profile.scaled_derivatives(float(r)))
        log_a = twisted.profile.log_scale(float(r))[0]
        log_b = powered.profile.log_scale(float(r))[0]
        a = a * np.exp(log_a - log_b)
        scale = max(float(np.max(np.abs(b))), 1e-300)
        worst = max(worst, float(np.max(np.abs(a - b))) / scale)
    ta, pa = twisted.require_context(), powered.require_context()
    return CompositionCheck(
        mu=mu,
        max_relative_difference=worst,
        operator_match=ta.operator == pa.operator,
        eigenvalue_difference=abs(ta.lam - pa.lam),
    )

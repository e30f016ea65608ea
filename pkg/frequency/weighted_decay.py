"""Ψ_m-weighted estimates for almost L⁺ eigenfunctions"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from errors import DomainError
from frequency.functionals import RadialDensity, boundary_quantities, check_integrable
from frequency.tails import InequalityCheck, InequalityPoint, TailEstimate, boundary_trace, stable_constant, tail_estimate
from operators.context import DriftOperator, SeparatedFunction
from quadrature.integrate import DEFAULT_QUADRATURE, QuadratureSpec
from quadrature.weights import log_psi
from solvers.profiles import TransformedProfile, gaussian_factor

logger = logging.getLogger(__name__)

STRONG_DECAY_MARGIN = 0.1
"""B(ρ)ρ^{4λ−n+1} must fall at least like ρ^{-0.1} on the sampled grid"""


def psi_poincare(u: SeparatedFunction, m: float, annuli: Sequence[tuple[float, float]], q: QuadratureSpec = DEFAULT_QUADRATURE) -> InequalityCheck:
    """∫_{A_{t,s}} r^{-1}φ²Ψ_m ≤ 32t^{-3}Ď_m(φ, t, s) + 8s^{-2}Ψ_m(s)∫_{S_s}|∇r|φ²"""
    density = RadialDensity(u, DriftOperator.plus(m))
    points = []
    for t, s in annuli:
        if not s > t:
            raise DomainError("Annulus needs s > t", t=t, s=s)
        ref = log_psi(m, s) + boundary_quantities(u, s).log_scale
        lhs = density.integrate(lambda r: density.square(r) / r, t, q, b=s).relative_to(ref)
        energy = density.integrate(density.energy, t, q, b=s).relative_to(ref)
        rhs = 32.0 / t**3 * energy + 8.0 / s**2 * boundary_quantities(u, s).b
        points.append(InequalityPoint(radius=t, lhs=lhs, rhs=rhs, holds=lhs <= rhs))
    return InequalityCheck(name="psi_poincare", anchor="inverse-gaussian-poincare", points=tuple(points))


def flux_monotonicity(u: SeparatedFunction, m: float, pairs: Sequence[tuple[float, float]]) -> InequalityCheck:
    """Smallest K₁₀ with Ψ_m(r₁)F(r₁) − Ψ_m(r₂)F(r₂) ≥ −K₁₀r₂^{-2}Ψ_m(r₂)B(r₂)

    Like K₂, the K₁₀ needed by each pair must stay within 20% of the smallest.
    """
    samples, needed = [], []
    for r1, r2 in pairs:
        if not r2 > r1:
            raise DomainError("Flux monotonicity needs r₂ > r₁", r1=r1, r2=r2)
        outer = boundary_quantities(u, r2)
        inner = boundary_quantities(u, r1)
        ref = log_psi(m, r2) + outer.log_scale
        difference = inner.F.relative_to(ref - log_psi(m, r1)) - outer.f
        scale = outer.b / (r2 * r2)
        k = max(0.0, -difference / scale) if scale > 0 else 0.0
        needed.append(k)
        samples.append((r1, difference, -k * scale))
    points = [InequalityPoint(radius=r1, lhs=lhs, rhs=rhs, holds=ok) for (r1, lhs, rhs), ok in zip(samples, stable_constant(needed))]
    constant = max(needed) if needed else 0.0
    return InequalityCheck(name="flux_monotonicity", anchor="flux-monotonicity", points=tuple(points), constant=constant)


@dataclass(frozen=True)
class StrongDecayCheck:
    lam: float
    decay_exponent: float
    """log-log slope of B(ρ)ρ^{4λ−n+1}"""
    hypothesis: bool
    integrable: dict[float, bool]
    """Ψ₀u Gaussian integrable against Φ_{m′}"""

    @property
    def passed(self) -> bool:
        return not self.hypothesis or all(self.integrable.values())


def _integrable(u: SeparatedFunction, m_prime: float, rho: float) -> bool:
    try:
        check_integrable(u, DriftOperator.minus(m_prime), rho)
    except DomainError:
        return False
    return True


def strong_decay(u: SeparatedFunction, lam: float, radii: Sequence[float], m_primes: Sequence[float] = (-2.0, 0.0, 2.0, 4.0)) -> StrongDecayCheck:
    """If B(ρ) = o(ρ^{n−1−4λ}), then Ψ₀u is integrable with gradient against every Φ_{m′}"""
    n = u.end.n
    radii = np.asarray(radii, dtype=float)
    logs = np.array([boundary_quantities(u, float(r)).B.log_abs() + (4 * lam - n + 1) * math.log(r) for r in radii])
    slope = float(np.polyfit(np.log(radii), logs, 1)[0]) if np.all(np.isfinite(logs)) else -math.inf
    hypothesis = slope < -STRONG_DECAY_MARGIN

    twisted = u.with_profile(TransformedProfile(u.profile, gaussian_factor(0.0, 1), label=f"Ψ₀·{u.label}"), None)
    rho = float(radii[0])
    integrable = {float(mp): _integrable(twisted, mp, rho) for mp in m_primes}
    check = StrongDecayCheck(lam=lam, decay_exponent=slope, hypothesis=hypothesis, integrable=integrable)
    logger.debug(f"{u.label}: B·ρ^(4λ−n+1) slope {slope:.3f}, Ψ₀u integrable {integrable}")
    return check


def twisted_tail_estimate(u: SeparatedFunction, lam: float, radii: Sequence[float], q: QuadratureSpec = DEFAULT_QUADRATURE) -> TailEstimate:
    """Degree-0 tail displays for û = Ψ_{n−2λ}u, with constant K₉"""
    mu = u.end.n - 2 * lam
    twisted = u.with_profile(TransformedProfile(u.profile, gaussian_factor(mu, 1), label=f"Ψ_{mu:g}·{u.label}"), None)
    estimate = tail_estimate(twisted, 0.0, radii, q, trace=boundary_trace(twisted, 0.0), constant_name="K9")
    return replace(estimate, anchor="twisted-tail-estimate", lam=lam, passed=estimate.passed and estimate.trace.alpha_sq > 0)

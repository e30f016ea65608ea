import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from errors import PreconditionError
from frequency.functionals import RadialDensity, boundary_quantities, bulk_quantities, check_integrable, log_weight_at
from frequency.tails import BoundaryTrace, InequalityCheck, InequalityPoint, TailEstimate, boundary_trace, stable_constant, tail_estimate
from frequency.weighted_decay import StrongDecayCheck, flux_monotonicity, psi_poincare, strong_decay, twisted_tail_estimate
from operators.context import DriftOperator, OperatorSign, SeparatedFunction
from quadrature.integrate import DEFAULT_QUADRATURE, QuadratureSpec

logger = logging.getLogger(__name__)

HARNACK_SAMPLES = 21


@dataclass(frozen=True)
class InequalityParameters:
    radii: tuple[float, ...] = (10.0, 15.0, 20.0)
    taus: tuple[float, ...] = (1.0, 2.0)
    lam: float = 0.0
    """degree 2λ of the tail estimates"""
    sign: OperatorSign = OperatorSign.MINUS
    trace_radii: tuple[float, ...] | None = None
    """radii of the α² extrapolation; a default far-field grid when None"""
    m_primes: tuple[float, ...] = (-2.0, 0.0, 2.0, 4.0)


@dataclass(frozen=True)
class TailEstimateReport:
    label: str
    operator: DriftOperator
    checks: tuple[InequalityCheck, ...]
    tails: tuple[TailEstimate, ...]
    trace: BoundaryTrace | None
    strong_decay: StrongDecayCheck | None = None
    constants: dict[str, float] = field(default_factory=dict)

    @property
    def alpha_sq(self) -> float | None:
        return self.trace.alpha_sq if self.trace is not None else None

    @property
    def thresholds(self) -> dict[str, float | None]:
        return {check.name: check.first_passing_radius for check in self.checks}

    @property
    def passed(self) -> bool:
        decay_ok = self.strong_decay is None or self.strong_decay.passed
        return all(c.passed for c in self.checks) and all(t.passed for t in self.tails) and decay_ok


def poincare_check(u: SeparatedFunction, m: float, radii: Sequence[float], q: QuadratureSpec = DEFAULT_QUADRATURE) -> InequalityCheck:
    """∫_{E_R} u²Φ_m ≤ 32R^{-2}D̂_m(R) + 16R^{-1}B̂_m(R)"""
    op = DriftOperator.minus(m)
    density = RadialDensity(u, op)
    points = []
    for R in radii:
        boundary = boundary_quantities(u, R)
        ref = boundary.log_scale + log_weight_at(op, R)
        check_integrable(u, op, R)
        lhs = density.integrate(density.square, R, q).relative_to(ref)
        d_hat = density.integrate(density.energy, R, q).relative_to(ref)
        rhs = 32.0 / R**2 * d_hat + 16.0 / R * boundary.b
        points.append(InequalityPoint(radius=R, lhs=lhs, rhs=rhs, holds=lhs <= rhs))
    return InequalityCheck(name="poincare", anchor="gaussian-poincare", points=tuple(points))


def harnack_check(u: SeparatedFunction, radii: Sequence[float], taus: Sequence[float] = (1.0, 2.0)) -> InequalityCheck:
    """(1 − 2N₊τ/R)B(R) ≤ B(R + τ) ≤ (1 + 2(n+3)τ/R)B(R) with N₊ = max N on [R, R+2]"""
    n = u.end.n
    points = []
    for R in radii:
        frequencies = [boundary_quantities(u, float(r)).frequency for r in np.linspace(R, R + 2.0, HARNACK_SAMPLES)]
        if min(frequencies) < -1:
            raise PreconditionError("Harnack bracket needs N ≥ −1 on [R, R+2]", R=R, min_frequency=min(frequencies))
        n_plus = max(max(frequencies), 0.0)
        base = boundary_quantities(u, R)
        for tau in taus:
            ratio = boundary_quantities(u, R + tau).B.relative_to(base.log_scale) / base.b
            lower = 1.0 - 2.0 * n_plus * tau / R
            upper = 1.0 + 2.0 * (n + 3) * tau / R
            points.append(InequalityPoint(radius=R, lhs=ratio, rhs=upper, lower=lower, holds=lower <= ratio <= upper))
    return InequalityCheck(name="harnack", anchor="harnack-bracket", points=tuple(points))


def small_drift_check(u: SeparatedFunction, m: float, radii: Sequence[float], q: QuadratureSpec = DEFAULT_QUADRATURE) -> InequalityCheck:
    """Smallest K₂ with |L̂_m(ρ)| ≤ ⅛ρ^{-2}(D̂_m(ρ) + K₂ρ^{-1}B̂_m(ρ))

    The K₂ needed at each ρ must stay within 20% of the smallest one sampled.
    """
    op = DriftOperator.minus(m)
    samples, needed = [], []
    for rho in radii:
        boundary = boundary_quantities(u, rho)
        ref = boundary.log_scale + log_weight_at(op, rho)
        bulk = bulk_quantities(u, m, rho, op.sign, q)
        l_hat = abs(bulk.l_hat.relative_to(ref))
        d_hat = bulk.d_hat.relative_to(ref)
        k2 = max(0.0, (8.0 * rho**2 * l_hat - d_hat) * rho / boundary.b) if boundary.b > 0 else 0.0
        needed.append(k2)
        samples.append((rho, l_hat, (d_hat + k2 * boundary.b / rho) / (8.0 * rho**2)))
    points = [InequalityPoint(radius=rho, lhs=l_hat, rhs=rhs, holds=ok) for (rho, l_hat, rhs), ok in zip(samples, stable_constant(needed))]
    return InequalityCheck(name="small_drift", anchor="small-drift-term", points=tuple(points), constant=max(needed))


def verify_inequalities(u: SeparatedFunction, m: float, parameters: InequalityParameters | None = None, q: QuadratureSpec = DEFAULT_QUADRATURE) -> TailEstimateReport:
    """Evaluate the inequalities of the chosen weight family on the sampled R

    For L_m: Poincaré, Harnack, the L̂ comparison and the degree-2λ tail
    displays. For L⁺_m: the Ψ-weighted Poincaré on annuli [R, 2R], flux
    monotonicity, the strong decay theorem and the tail displays of Ψ_{n−2λ}u.
    """
    parameters = parameters or InequalityParameters()
    radii = parameters.radii
    sign = OperatorSign(parameters.sign)
    op = DriftOperator(sign, m)
    constants: dict[str, float] = {}
    decay = None

    if sign is OperatorSign.MINUS:
        trace = boundary_trace(u, parameters.lam, parameters.trace_radii)
        checks = [poincare_check(u, m, radii, q), harnack_check(u, radii, parameters.taus), small_drift_check(u, m, radii, q)]
        tails = [tail_estimate(u, parameters.lam, radii, q, trace=trace)]
        constants["K2"] = checks[2].constant
    else:
        checks = [
            psi_poincare(u, m, [(R, 2.0 * R) for R in radii], q),
            flux_monotonicity(u, m, [(R, R + tau) for R in radii for tau in parameters.taus]),
        ]
        decay = strong_decay(u, parameters.lam, radii, parameters.m_primes)
        tails = [twisted_tail_estimate(u, parameters.lam, radii, q)]
        trace = tails[0].trace
        constants["K10"] = checks[1].constant
    for tail in tails:
        constants[tail.constant_name] = tail.constant

    report = TailEstimateReport(label=u.label, operator=op, checks=tuple(checks), tails=tuple(tails), trace=trace, strong_decay=decay, constants=constants)
    status = "✅" if report.passed else "❌"
    logger.info(f"{status} Inequalities for {u.label} under {op.label}: constants {constants}")
    return report

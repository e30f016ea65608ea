"""Inequality records, boundary traces α² and the homogeneous tail estimates"""

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from frequency.functionals import sphere_l2
from geometry.ends import area_element_log
from operators.context import SeparatedFunction
from quadrature.integrate import DEFAULT_QUADRATURE, QuadratureSpec, integrate_radial
from quadrature.weights import WeightSpec, safe_exp
from solvers.fitting import richardson_limit

logger = logging.getLogger(__name__)

TRACE_RADII = (40.0, 320.0)
TRACE_SAMPLES = 16
CONSTANT_STABILITY = 0.2
"""a measured constant may exceed its smallest sampled value by this fraction"""


@dataclass(frozen=True)
class InequalityPoint:
    radius: float
    lhs: float
    rhs: float
    holds: bool
    lower: float | None = None
    """lower bound for two-sided brackets"""


def stable_constant(needed: Sequence[float]) -> list[bool]:
    """Per radius: the constant needed there stays within CONSTANT_STABILITY of the smallest one

    Radii where the needed constant has grown past that bound fail.
    """
    finite = [k for k in needed if math.isfinite(k)]
    floor = min(finite) if finite else math.inf
    return [math.isfinite(k) and k <= (1.0 + CONSTANT_STABILITY) * floor for k in needed]


@dataclass(frozen=True)
class InequalityCheck:
    name: str
    anchor: str
    points: tuple[InequalityPoint, ...]
    constant: float | None = None
    """measured constant (K₂, K₁₀, …) when the inequality has one"""

    @property
    def first_passing_radius(self) -> float | None:
        """Smallest sampled radius from which every later sample holds"""
        radius = None
        for point in sorted(self.points, key=lambda p: p.radius, reverse=True):
            if not point.holds:
                break
            radius = point.radius
        return radius

    @property
    def passed(self) -> bool:
        return self.first_passing_radius is not None


@dataclass(frozen=True)
class BoundaryTrace:
    alpha_sq: float
    """lim ρ^{1−n−4λ}∫_{S_ρ}u²"""
    leading_coefficient: float
    """lim f(ρ)ρ^{−2λ}"""
    residual: float


@dataclass(frozen=True)
class TailEstimate:
    anchor: str
    constant_name: str
    lam: float
    radii: tuple[float, ...]
    first_display: tuple[float, ...]
    """K needed at each R by the display normalised by ∫_{S_R}u²"""
    second_display: tuple[float, ...]
    """K needed at each R by the display normalised by α²"""
    trace: BoundaryTrace
    constant: float
    passed: bool


def boundary_trace(u: SeparatedFunction, lam: float, radii: Sequence[float] | None = None) -> BoundaryTrace:
    """Richardson limits of ρ^{1−n−4λ}∫_{S_ρ}u² and f·ρ^{−2λ}"""
    radii = np.geomspace(*TRACE_RADII, TRACE_SAMPLES) if radii is None else np.asarray(radii, dtype=float)
    n = u.end.n
    values, leading = [], []
    for rho in radii:
        rho = float(rho)
        values.append(safe_exp((1 - n - 4 * lam) * math.log(rho) + sphere_l2(u, rho).log_abs()))
        f0 = u.profile.scaled_derivatives(rho)[0]
        leading.append(f0 * safe_exp(u.log_reference(rho) - 2 * lam * math.log(rho)))
    alpha_sq, _, residual = richardson_limit(radii, values)
    coefficient, _, _ = richardson_limit(radii, leading)
    return BoundaryTrace(alpha_sq=max(alpha_sq, 0.0), leading_coefficient=coefficient, residual=residual)


def tail_estimate(
    u: SeparatedFunction,
    lam: float,
    radii: Sequence[float],
    q: QuadratureSpec = DEFAULT_QUADRATURE,
    trace: BoundaryTrace | None = None,
    constant_name: str | None = None,
) -> TailEstimate:
    """Measured constants of the two tail displays for a degree-2λ function

    ∫_{r≥R} (u² + r²|∇u|² + r⁴(∂_r u − 2λu/r)²) r^{−1−n−4λ} ≤ K R^{−n−4λ}∫_{S_R}u²
    ∫_{r≥R} (u² + r²(|u − A|² + |∇u|²) + r⁴(∂_r u − 2λu/r)²) r^{−2−n−4λ} ≤ K α²/R²

    with A = c·r^{2λ}·a the leading term. The constant is K₈ for λ = 0 and
    K₀ otherwise unless a name is given.
    """
    n, end = u.end.n, u.end
    trace = trace or boundary_trace(u, lam)
    c = trace.leading_coefficient
    log_norm = math.log(u.norm_sq)

    def log_factor(t: float) -> float:
        return 2.0 * u.log_reference(t) + area_element_log(end, t) + log_norm

    def parts(t: float) -> tuple[float, float, float]:
        f0, f1, _ = u.profile.scaled_derivatives(t)
        psi = end.psi(t)
        energy = psi * psi * f1 * f1 + u.mu_link * f0 * f0 / end.h(t)
        radial = psi * psi * f1 - 2 * lam * f0 / t
        return f0, energy, radial

    def first(t: float) -> float:
        f0, energy, radial = parts(t)
        return f0 * f0 + t * t * energy + t**4 * radial * radial

    def second(t: float) -> float:
        f0, energy, radial = parts(t)
        gap = f0 - c * safe_exp(2 * lam * math.log(t) - u.log_reference(t))
        return f0 * f0 + t * t * (gap * gap + energy) + t**4 * radial * radial

    first_k, second_k = [], []
    for R in radii:
        R = float(R)
        lhs1 = integrate_radial(first, WeightSpec.power(-1 - n - 4 * lam), R, math.inf, q, log_factor=log_factor)
        lhs2 = integrate_radial(second, WeightSpec.power(-2 - n - 4 * lam), R, math.inf, q, log_factor=log_factor)
        sphere = sphere_l2(u, R)
        if sphere.scaled == 0.0:
            first_k.append(0.0 if lhs1.scaled == 0.0 else math.inf)
        else:
            first_k.append(safe_exp(lhs1.log_abs() + (n + 4 * lam) * math.log(R) - sphere.log_abs()))
        if trace.alpha_sq == 0.0:
            second_k.append(0.0 if lhs2.scaled == 0.0 else math.inf)
        else:
            second_k.append(safe_exp(lhs2.log_abs() + 2 * math.log(R)) / trace.alpha_sq)

    constant = max(first_k + second_k)
    name = constant_name or ("K8" if lam == 0 else "K0")
    anchor = "tail-estimate-degree-0" if lam == 0 else "tail-estimate-degree-2lambda"
    estimate = TailEstimate(
        anchor=anchor,
        constant_name=name,
        lam=lam,
        radii=tuple(float(r) for r in radii),
        first_display=tuple(first_k),
        second_display=tuple(second_k),
        trace=trace,
        constant=constant,
        passed=math.isfinite(constant),
    )
    logger.debug(f"{u.label}: {name} = {constant:.4g} over R ∈ {estimate.radii}, α² = {trace.alpha_sq:.6g}")
    return estimate

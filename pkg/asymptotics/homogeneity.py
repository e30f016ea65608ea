"""Asymptotic homogeneity: the trace at infinity and the homogeneity bound"""

import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from asymptotics.cone import CONVERGENCE_CSV_HEADER
from errors import PreconditionError, TraceError
from frequency.tails import TRACE_RADII, TRACE_SAMPLES
from geometry.ends import area_element_log
from operators.context import SeparatedFunction
from quadrature.integrate import DEFAULT_QUADRATURE, QuadratureSpec, integrate_radial
from quadrature.weights import WeightSpec
from solvers.fitting import richardson_limit
from solvers.profiles import TransformedProfile, power_factor

logger = logging.getLogger(__name__)

DEGREE_TOLERANCE = 0.05
HYPOTHESIS_GROWTH = 0.25
"""R²·∫_{E_R}(…) may grow no faster than R^{0.25} on the grid"""
GAP_FLOOR = 1e-12
"""annulus gaps below this fraction of |c|·‖a‖ count as exact"""
MIN_RATE = 0.1
ANNULUS = (1.0, 2.0)
"""reference annulus in flowed coordinates"""
HOMOGENEITY_CONSTANT = 16.0
HOMOGENEITY_RADII = (10.0, 20.0, 40.0)


@dataclass(frozen=True)
class TraceAtInfinity:
    label: str
    degree: float
    measured_degree: float
    """log-log slope of |u| on the far grid"""
    coefficient: float
    """lim f(r)/r^d; the trace is coefficient·a"""
    mode_degree: int
    alpha_sq: float
    """‖coefficient·a‖²"""
    rate: float | None
    """log-log slope of the annulus gaps; None when every gap is at rounding level"""
    radii: tuple[float, ...]
    gaps: tuple[float, ...]
    """‖Π_R^*(r^{-d}u) − F‖ on the reference annulus"""
    hypothesis_constant: float
    """α̃² = sup_R R²∫_{E_R}(r^{-n}|∇v|² + r^{2−n}(∂_r v)²), v = r^{-d}u"""

    @property
    def vanishes(self) -> bool:
        return self.coefficient == 0.0


@dataclass(frozen=True)
class HomogeneityPoint:
    radius: float
    lhs: float
    """∫_{E_R} r^{-n}|F − v|²"""
    bound: float
    """16α̃²R^{-2}"""
    measured_constant: float
    """lhs·R²/α̃²"""
    holds: bool


@dataclass(frozen=True)
class HomogeneityBound:
    label: str
    degree: float
    alpha_tilde_sq: float
    points: tuple[HomogeneityPoint, ...]

    @property
    def measured_constant(self) -> float:
        return max((p.measured_constant for p in self.points), default=0.0)

    @property
    def passed(self) -> bool:
        return all(p.holds for p in self.points)

    def export_csv(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f)
            writer.writerow(CONVERGENCE_CSV_HEADER)
            for point in self.points:
                writer.writerow([repr(point.radius), repr(point.lhs), repr(point.bound)])
        return path


def _rescaled(u: SeparatedFunction, d: float) -> SeparatedFunction:
    """v = r^{-d}u"""
    if d == 0:
        return u
    return u.with_profile(TransformedProfile(u.profile, power_factor(-d), label=f"r^{-d:g}·{u.label}"), None)


def measured_degree(u: SeparatedFunction, radii: Sequence[float]) -> float:
    radii = np.asarray(radii, dtype=float)
    logs = np.array([u.profile.log_abs(float(r)) for r in radii])
    if not np.all(np.isfinite(logs)):
        return -math.inf
    return float(np.polyfit(np.log(radii), logs, 1)[0])


def hypothesis_integral(v: SeparatedFunction, R: float, q: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """R²·∫_{E_R} r^{-n}|∇v|² + r^{2−n}(∂_r v)²"""
    end, n = v.end, v.end.n
    mu = v.mu_link

    def integrand(t: float) -> float:
        f0, f1, _ = v.profile.derivatives(t)
        psi = end.psi(t)
        gradient = psi * psi * f1 * f1 + mu * f0 * f0 / end.h(t)
        radial = psi * psi * f1
        return gradient + t * t * radial * radial

    result = integrate_radial(integrand, WeightSpec.power(-n), R, math.inf, q, log_factor=lambda t: area_element_log(end, t))
    return R * R * result.value * v.norm_sq


def _annulus_gap(v: SeparatedFunction, R: float, c: float, q: QuadratureSpec) -> float:
    lo, hi = ANNULUS

    def integrand(s: float) -> float:
        gap = v.profile.value(R * s) - c
        return gap * gap

    result = integrate_radial(integrand, WeightSpec.power(v.end.n - 1), lo, hi, q)
    return math.sqrt(max(result.value, 0.0) * v.norm_sq)


def trace_at_infinity(u: SeparatedFunction, d: float, radii: Sequence[float] | None = None, q: QuadratureSpec = DEFAULT_QUADRATURE) -> TraceAtInfinity:
    """Leading degree-d term of u as the limit of the pullbacks Π_R^*(r^{-d}u)

    d below the measured homogeneity degree raises TraceError (the pullbacks
    grow); d above it gives the zero trace.
    """
    radii = np.geomspace(*TRACE_RADII, TRACE_SAMPLES) if radii is None else np.asarray(radii, dtype=float)
    for r in (radii[0], radii[-1] * ANNULUS[1]):
        u.end.check_radius(float(r))
    degree = measured_degree(u, radii)
    if d < degree - DEGREE_TOLERANCE:
        raise TraceError(f"Pullbacks of r^-{d:g}·u diverge", degree=d, measured_degree=degree)

    v = _rescaled(u, d)
    hypothesis = np.array([hypothesis_integral(v, float(R), q) for R in radii])
    if not np.all(np.isfinite(hypothesis)):
        raise PreconditionError("Homogeneity hypothesis integral is not finite", degree=d)
    positive = hypothesis > 0
    if np.count_nonzero(positive) >= 2:
        growth = float(np.polyfit(np.log(radii[positive]), np.log(hypothesis[positive]), 1)[0])
        if growth > HYPOTHESIS_GROWTH:
            raise PreconditionError("R²∫(r^{-n}|∇u|² + r^{2−n}(∂_r u)²) is not bounded", degree=d, growth=growth)
    alpha_tilde_sq = float(np.max(hypothesis))

    if d > degree + DEGREE_TOLERANCE:
        c = 0.0
    else:
        values = [v.profile.value(float(R)) for R in radii]
        c = values[0] if all(x == values[0] for x in values) else richardson_limit(radii, values)[0]
    gaps = np.array([_annulus_gap(v, float(R), c, q) for R in radii])

    floor = GAP_FLOOR * max(abs(c), 1e-300) * math.sqrt(u.norm_sq)
    keep = gaps > floor
    rate = None
    if np.count_nonzero(keep) >= 2:
        rate = float(np.polyfit(np.log(radii[keep]), np.log(gaps[keep]), 1)[0])
        if rate > -MIN_RATE:
            raise TraceError("Pullbacks do not converge on the reference annulus", degree=d, rate=rate, best_estimate=c)

    trace = TraceAtInfinity(
        label=u.label,
        degree=d,
        measured_degree=degree,
        coefficient=c,
        mode_degree=u.mode.degree,
        alpha_sq=c * c * u.norm_sq,
        rate=rate,
        radii=tuple(float(r) for r in radii),
        gaps=tuple(float(g) for g in gaps),
        hypothesis_constant=alpha_tilde_sq,
    )
    logger.debug(f"tr∞^{d:g}({u.label}) = {c:.10g}·a_{u.mode.degree}, α² = {trace.alpha_sq:.8g}, rate {rate}")
    return trace


def verify_homogeneity_bound(
    u: SeparatedFunction,
    radii: Sequence[float] = HOMOGENEITY_RADII,
    d: float = 0.0,
    trace_radii: Sequence[float] | None = None,
    q: QuadratureSpec = DEFAULT_QUADRATURE,
) -> HomogeneityBound:
    """∫_{E_R} r^{-n}|F − G|² ≤ 16α̃²R^{-2} with G = r^{-d}u and F its leading term"""
    trace = trace_at_infinity(u, d, trace_radii, q)
    v = _rescaled(u, d)
    end, n, c = u.end, u.end.n, trace.coefficient
    alpha_tilde_sq = max([trace.hypothesis_constant] + [hypothesis_integral(v, float(R), q) for R in radii])

    def integrand(t: float) -> float:
        gap = v.profile.value(t) - c
        return gap * gap

    points = []
    for R in radii:
        R = float(R)
        lhs = integrate_radial(integrand, WeightSpec.power(-n), R, math.inf, q, log_factor=lambda t: area_element_log(end, t)).value * u.norm_sq
        bound = HOMOGENEITY_CONSTANT * alpha_tilde_sq / (R * R)
        if alpha_tilde_sq > 0:
            constant = lhs * R * R / alpha_tilde_sq
        else:
            constant = 0.0 if lhs == 0.0 else math.inf
        points.append(HomogeneityPoint(radius=R, lhs=lhs, bound=bound, measured_constant=constant, holds=lhs <= bound))

    result = HomogeneityBound(label=u.label, degree=d, alpha_tilde_sq=alpha_tilde_sq, points=tuple(points))
    status = "✅" if result.passed else "❌"
    logger.info(f"{status} Homogeneity bound for {u.label}: measured constant {result.measured_constant:.4g} vs {HOMOGENEITY_CONSTANT:g}")
    return result

"""Weighted radial integration

Integrals are returned as a scaled value together with the log of the scale,
so Gaussian weights at large radii never overflow or underflow.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from errors import DomainError, NumericalFailure
from quadrature.weights import WeightKind, WeightSpec, log_phi, safe_exp

logger = logging.getLogger(__name__)

Integrand = Callable[[float], float]

_REFERENCE_SAMPLES = 65
_MAX_TRUNCATION_STEPS = 200_000


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    """relative to the sampled peak of the scaled integrand, or of `scale` when given"""
    max_subdivisions: int = 200
    tail_cutoff_ratio: float = 1e-16

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise DomainError("Quadrature tolerances must be positive", rel_tol=self.rel_tol, abs_tol=self.abs_tol)
        if not 0 < self.tail_cutoff_ratio < 1:
            raise DomainError("tail_cutoff_ratio must lie in (0, 1)", tail_cutoff_ratio=self.tail_cutoff_ratio)


DEFAULT_QUADRATURE = QuadratureSpec()


@dataclass(frozen=True)
class LogScaled:
    """A number stored as scaled·e^{log_scale}"""

    scaled: float
    log_scale: float

    @property
    def value(self) -> float:
        if self.scaled == 0.0:
            return 0.0
        return math.copysign(safe_exp(math.log(abs(self.scaled)) + self.log_scale), self.scaled)

    def relative_to(self, log_ref: float) -> float:
        """Value divided by e^{log_ref}"""
        if self.scaled == 0.0:
            return 0.0
        return math.copysign(safe_exp(math.log(abs(self.scaled)) + self.log_scale - log_ref), self.scaled)

    def log_abs(self) -> float:
        if self.scaled == 0.0:
            return -math.inf
        return math.log(abs(self.scaled)) + self.log_scale

    def __mul__(self, factor: float) -> "LogScaled":
        return LogScaled(self.scaled * factor, self.log_scale)

    __rmul__ = __mul__

    def __add__(self, other: "LogScaled") -> "LogScaled":
        ref = max(self.log_scale, other.log_scale)
        return LogScaled(self.relative_to(ref) + other.relative_to(ref), ref)

    def __neg__(self) -> "LogScaled":
        return LogScaled(-self.scaled, self.log_scale)

    def __sub__(self, other: "LogScaled") -> "LogScaled":
        return self + (-other)

    @classmethod
    def from_log(cls, sign: float, log_abs: float) -> "LogScaled":
        if sign == 0 or log_abs == -math.inf:
            return cls(0.0, 0.0)
        return cls(math.copysign(1.0, sign), log_abs)


@dataclass(frozen=True)
class WeightedIntegral(LogScaled):
    abserr: float = 0.0
    """absolute error estimate in units of e^{log_scale}"""
    truncated_at: float | None = None
    tail_bound: float = 0.0
    """weight mass beyond the truncation radius, same units"""
    evaluations: int = 0


def integrate_radial(
    f: Integrand,
    spec: WeightSpec,
    a: float,
    b: float = math.inf,
    q: QuadratureSpec = DEFAULT_QUADRATURE,
    log_factor: Integrand | None = None,
    points: Sequence[float] | None = None,
    scale: Integrand | None = None,
) -> WeightedIntegral:
    """∫_a^b f(t)·w(t)·e^{log_factor(t)} dt

    Infinite Gaussian-weighted integrals are truncated where the full log
    weight has dropped below tail_cutoff_ratio relative to its running
    maximum; the neglected weight mass is bounded by 4 r_max^{-1} w(r_max).

    `scale(t)` bounds the size of the terms that cancel inside f(t). When f
    is a residual such as u·Lu for an almost-eigenfunction, the absolute
    tolerance is set from it instead of from f itself.
    """
    if a < 0 or math.isnan(a) or (a == 0 and spec.m <= -1):
        raise DomainError("Lower integration limit must be positive", a=a, m=spec.m)
    if b < a:
        raise DomainError("Upper limit below lower limit", a=a, b=b)
    if b == a:
        return WeightedIntegral(0.0, 0.0)

    infinite = math.isinf(b)
    if infinite and spec.kind is WeightKind.INVERSE_GAUSSIAN:
        raise DomainError("Inverse Gaussian weight is not integrable on an infinite range", m=spec.m, a=a)

    def log_weight(t: float) -> float:
        lw = spec.log_value(t)
        if log_factor is not None and lw != -math.inf:
            lw += log_factor(t)
        return lw

    upper = b
    truncated_at = None
    tail_bound = 0.0
    if infinite and spec.kind is WeightKind.GAUSSIAN:
        upper, log_tail, log_peak = _truncation_radius(log_weight, a, q.tail_cutoff_ratio)
        truncated_at = upper
    samples = _reference_samples(a, upper, infinite and truncated_at is None)
    logs = np.array([log_weight(t) for t in samples])
    finite = logs[np.isfinite(logs)]
    if finite.size == 0:
        return WeightedIntegral(0.0, 0.0, truncated_at=truncated_at)
    ref = float(np.max(finite))
    if truncated_at is not None:
        tail_bound = 4.0 / upper * safe_exp(log_tail - ref)

    def integrand(t: float) -> float:
        lw = log_weight(t)
        if lw == -math.inf:
            return 0.0
        return f(t) * safe_exp(lw - ref)

    peak = max(abs(integrand(t)) for t in samples)
    epsabs = max(q.abs_tol * peak, 1e-300)
    if scale is not None:
        cancelled = max(abs(scale(t)) * safe_exp(lw - ref) for t, lw in zip(samples, logs) if lw != -math.inf)
        epsabs = max(epsabs, q.rel_tol * cancelled)

    kwargs = dict(epsabs=epsabs, epsrel=q.rel_tol, limit=q.max_subdivisions, full_output=1)
    if points is not None and not math.isinf(upper):
        inside = sorted(p for p in points if a < p < upper)
        if inside:
            kwargs["points"] = inside
    result = integrate.quad(integrand, a, upper, **kwargs)
    value, abserr, info = result[0], result[1], result[2]
    if len(result) > 3 and abserr > 10.0 * max(epsabs, q.rel_tol * abs(value)):
        raise NumericalFailure(
            f"Quadrature did not converge within {q.max_subdivisions} subdivisions: {result[3]}",
            interval=(a, upper),
            best_estimate=value,
            log_scale=ref,
            abserr=abserr,
        )

    logger.debug(
        f"∫[{a:.4g}, {upper:.4g}] {spec.kind.value}(m={spec.m:g}): scaled={value:.6e}, "
        f"log_scale={ref:.4f}, err={abserr:.2e}, neval={info['neval']}"
    )
    return WeightedIntegral(
        value,
        ref,
        abserr=abserr,
        truncated_at=truncated_at,
        tail_bound=tail_bound,
        evaluations=int(info["neval"]),
    )


def _truncation_radius(log_weight: Integrand, a: float, ratio: float) -> tuple[float, float, float]:
    cutoff = math.log(ratio)
    t = a if a > 0 else 1e-8
    peak = log_weight(t)
    for _ in range(_MAX_TRUNCATION_STEPS):
        t += min(1.0, max(0.02, 2.0 / max(t, 1.0)))
        lw = log_weight(t)
        peak = max(peak, lw)
        if lw - peak < cutoff:
            logger.debug(f"Gaussian tail truncated at r_max={t:.4f} (start {a:.4g})")
            return t, lw, peak
    raise NumericalFailure("Gaussian tail truncation radius not found", start=a, last_radius=t)


def _reference_samples(a: float, upper: float, infinite: bool) -> np.ndarray:
    lo = a if a > 0 else min(1e-6, upper * 1e-6)
    if infinite:
        return np.geomspace(lo, lo * 64.0, _REFERENCE_SAMPLES)
    return np.linspace(lo, upper, _REFERENCE_SAMPLES)


@dataclass(frozen=True)
class PartsIdentityCheck:
    """∫_ρ^{ρ+1}Φ_m against its integration-by-parts form"""

    m: float
    rho: float
    residual: float
    relative_residual: float
    o_constant: float
    """(∫_ρ^{ρ+1}Φ_m − 2ρ^{-1}Φ_m(ρ))·ρ²/Φ_m(ρ)"""


def _one(_: float) -> float:
    return 1.0


def check_parts_identity(m: float, rho: float, q: QuadratureSpec = DEFAULT_QUADRATURE) -> PartsIdentityCheck:
    if rho < 1:
        raise DomainError("Parts identity is checked for ρ ≥ 1", rho=rho)

    ref = log_phi(m - 1, rho)
    lhs_integral = integrate_radial(_one, WeightSpec.gaussian(m), rho, rho + 1.0, q)
    lhs = lhs_integral.relative_to(ref)

    inner = 2.0 * math.exp(log_phi(m - 1, rho) - ref)
    outer = 2.0 * math.exp(log_phi(m - 1, rho + 1.0) - ref)
    bulk = 0.0
    if m != 1:
        bulk = 2.0 * (m - 1) * integrate_radial(_one, WeightSpec.gaussian(m - 2), rho, rho + 1.0, q).relative_to(ref)

    difference = abs(lhs - (inner - outer + bulk))
    scale = abs(lhs) + inner + outer + abs(bulk)
    o_constant = (lhs_integral.relative_to(log_phi(m, rho)) - 2.0 / rho) * rho**2
    return PartsIdentityCheck(
        m=m,
        rho=rho,
        residual=difference * math.exp(ref),
        relative_residual=difference / scale,
        o_constant=o_constant,
    )


def tail_ratio(m: float, rho: float, q: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """∫_ρ^∞Φ_m / (2ρ^{-1}Φ_m(ρ))"""
    tail = integrate_radial(_one, WeightSpec.gaussian(m), rho, math.inf, q)
    return tail.relative_to(log_phi(m, rho)) * rho / 2.0

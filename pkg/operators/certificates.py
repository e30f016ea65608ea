"""Almost-eigenfunction certificates |(L + λ)u| ≤ M·weight(r)"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from errors import CertificationError, DomainError
from geometry.ends import WeaklyConicalEnd
from operators.context import DriftOperator, ResidualConvention, SeparatedFunction
from operators.drift import radial_action

logger = logging.getLogger(__name__)

GROWTH_LIMIT = 0.25
NOISE_FLOOR = 1e-8
"""residual ratios below this are rounding and are not tested for growth"""


@dataclass(frozen=True)
class AlmostEigenCertificate:
    M: float
    lam: float
    operator: DriftOperator
    convention: ResidualConvention
    region: tuple[float, float]
    radii: tuple[float, ...]
    residuals: tuple[float, ...]
    """|(L+λ)u| / weight at each radius"""
    growth_exponent: float
    passed: bool


def residual_ratio(end: WeaklyConicalEnd, u: SeparatedFunction, op: DriftOperator, lam: float, r: float, convention: ResidualConvention) -> float:
    """Scale-free: both sides carry the profile's log scale, which cancels"""
    f0, f1, f2 = u.profile.scaled_derivatives(r)
    residual = abs(radial_action(op, end, u.mu_link, r, f0, f1, f2) + lam * f0)
    weight = convention.weight(r, abs(f0), u.reduced_gradient(r, f0, f1))
    if weight == 0.0:
        return 0.0 if residual == 0.0 else math.inf
    return residual / weight


def growth_exponent(radii: np.ndarray, values: np.ndarray) -> float:
    """log-log slope of the positive values on the upper half of the radii"""
    half = radii.size // 2
    x, y = radii[half:], values[half:]
    keep = (y > 0) & np.isfinite(y)
    if np.count_nonzero(keep) < 2:
        return 0.0
    slope, _ = np.polyfit(np.log(x[keep]), np.log(y[keep]), 1)
    return float(slope)


def certify_almost_eigen(
    end: WeaklyConicalEnd,
    u: SeparatedFunction,
    op: DriftOperator,
    lam: float,
    region: tuple[float, float],
    convention: ResidualConvention | str = ResidualConvention.QUADRATIC,
    samples: int = 200,
    raise_on_failure: bool = True,
) -> AlmostEigenCertificate:
    """Minimal M on a geometric grid of the region; bounded iff growth ≤ ¼"""
    convention = ResidualConvention(convention)
    lo, hi = region
    if not end.r_inner * (1 - 1e-12) <= lo < hi:
        raise DomainError("Certification region must satisfy R_inner ≤ R < R_max", region=region, r_inner=end.r_inner)
    u.profile.check_domain(lo)
    u.profile.check_domain(hi)

    radii = np.geomspace(lo, hi, samples)
    ratios = np.array([residual_ratio(end, u, op, lam, float(r), convention) for r in radii])
    m_value = float(np.max(ratios))
    growth = growth_exponent(radii, ratios) if m_value > NOISE_FLOOR else 0.0
    passed = math.isfinite(m_value) and growth <= GROWTH_LIMIT

    certificate = AlmostEigenCertificate(
        M=m_value,
        lam=lam,
        operator=op,
        convention=convention,
        region=(lo, hi),
        radii=tuple(float(r) for r in radii),
        residuals=tuple(float(x) for x in ratios),
        growth_exponent=growth,
        passed=passed,
    )
    logger.debug(f"{u.label}: ({op.label} + {lam:g}) residual M={m_value:.4g}, growth {growth:.3f} on [{lo:g}, {hi:g}]")
    if not passed and raise_on_failure:
        raise CertificationError(
            f"Residual profile of {u.label} diverges under {op.label} + {lam:g}",
            growth_exponent=growth,
            M=m_value,
            convention=convention.value,
        )
    return certificate

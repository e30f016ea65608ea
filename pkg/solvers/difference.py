"""Normal-graph height of one self-similar profile over another"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from errors import DomainError
from geometry.ends import WeaklyConicalEnd
from operators.certificates import AlmostEigenCertificate, certify_almost_eigen, growth_exponent
from operators.context import DriftOperator, EigenContext, ResidualConvention, SeparatedFunction, separated
from solvers.profiles import RadialProfile, SeriesProfile
from solvers.selfsimilar import SelfSimilarKind, SelfSimilarPair

logger = logging.getLogger(__name__)

GRAPHICAL_SLOPE = 1.0
GRAPHICAL_HEIGHT = 0.5
KAPPA_GROWTH_LIMIT = 0.25


class _SubtractedHeights(RadialProfile):
    """w = u₂ − u₁ in the coordinate ρ"""

    def __init__(self, first: RadialProfile, second: RadialProfile):
        self.first, self.second = first, second
        self.r_lo = max(first.r_lo, second.r_lo)
        self.r_hi = min(first.r_hi, second.r_hi)
        self.label = "subtracted-heights"

    def reduced(self, rho):
        a = self.first.derivatives(rho)
        b = self.second.derivatives(rho)
        return b[0] - a[0], b[1] - a[1], b[2] - a[2]


class NormalHeightProfile(RadialProfile):
    """t(r) = w/W₁ at ρ(r), differentiated in r

    With J = dρ/dr = r/P, P = ρ + u₁u₁′:
    t_r = T′J, t_rr = T″J² + T′J_r, J_r = 1/P − r²(1 + u₁′² + u₁u₁″)/P³.
    """

    def __init__(self, end: WeaklyConicalEnd, base: RadialProfile, heights: RadialProfile):
        self.end = end
        self.base = base
        self.heights = heights
        self.r_lo = end.model.r_of_rho(heights.r_lo)
        self.r_hi = end.model.r_of_rho(heights.r_hi) if math.isfinite(heights.r_hi) else math.inf
        self.label = "normal-height"

    def reduced(self, r):
        rho = self.end.model.rho_of(r)
        u, du, d2u = self.base.derivatives(rho)
        d3u = self.base.third_derivative(rho)
        w, dw, d2w = self.heights.derivatives(rho)

        big_w = math.sqrt(1.0 + du * du)
        dbig_w = du * d2u / big_w
        d2big_w = (d2u * d2u + du * d3u) / big_w - du * du * d2u * d2u / big_w**3

        t = w / big_w
        dt = dw / big_w - w * dbig_w / big_w**2
        d2t = d2w / big_w - 2.0 * dw * dbig_w / big_w**2 - w * d2big_w / big_w**2 + 2.0 * w * dbig_w**2 / big_w**3

        p = rho + u * du
        jac = r / p
        djac = 1.0 / p - r * r * (1.0 + du * du + u * d2u) / p**3
        return t, dt * jac, d2t * jac * jac + dt * djac


@dataclass(frozen=True)
class GraphDifferenceCertificate:
    kappa: float
    """sup r|u| + r²|∇u| over the region"""
    kappa_growth: float
    kappa_bounded: bool
    almost_eigen: AlmostEigenCertificate
    passed: bool


def graph_difference(
    profile1: RadialProfile,
    other: RadialProfile | SelfSimilarPair,
    end1: WeaklyConicalEnd,
    region: tuple[float, float] = (10.0, 40.0),
    samples: int = 200,
) -> tuple[SeparatedFunction, GraphDifferenceCertificate]:
    """u = normal height of Σ₂ over Σ₁ as a radial function on end₁

    The matching equation is (L_0 + ½)u ≈ 0 for shrinkers with the r^{-2}
    residual and (L⁺_0 − ½)u ≈ 0 for expanders with r^{-2}(|u| + r^{-1}|∇u|).
    """
    kind = SelfSimilarKind(profile1.kind)
    if isinstance(other, SelfSimilarPair):
        if other.base is not profile1:
            raise DomainError("The pair's base must be profile₁")
        if other.kind is not kind:
            raise DomainError("Profiles are of different kinds", first=kind.value, second=other.kind.value)
        heights = other.difference
    else:
        if SelfSimilarKind(other.kind) is not kind:
            raise DomainError("Profiles are of different kinds", first=kind.value, second=other.kind)
        heights = _SubtractedHeights(profile1, other)
        if not heights.r_hi > heights.r_lo:
            raise DomainError("Profile domains do not overlap")
    if getattr(end1.model, "profile", None) is not profile1:
        raise DomainError("end₁ must be the graph end built on profile₁")

    height = NormalHeightProfile(end1, profile1, heights)
    lo, hi = region
    if lo < height.r_lo or hi > height.r_hi:
        raise DomainError("Region outside the common domain", region=region, r_lo=height.r_lo, r_hi=height.r_hi)

    if kind is SelfSimilarKind.EXPANDER:
        context = EigenContext(DriftOperator.plus(0.0), -0.5, ResidualConvention.EXPANDER)
    else:
        context = EigenContext(DriftOperator.minus(0.0), 0.5, ResidualConvention.QUADRATIC)
    u = separated(end1, height, 0, context, label="graph-difference")

    radii = np.geomspace(lo, hi, samples)
    kappa_values = np.empty_like(radii)
    for i, r in enumerate(radii):
        rho = end1.model.rho_of(float(r))
        _, dw, _ = heights.derivatives(rho)
        t, dt, _ = height.derivatives(float(r))
        if abs(dw) > GRAPHICAL_SLOPE or abs(t) > GRAPHICAL_HEIGHT * r:
            raise DomainError("Difference too large for a normal graph", radius=float(r), height=t, slope=dw)
        kappa_values[i] = r * abs(t) + r * r * end1.psi(float(r)) * abs(dt)
    kappa = float(np.max(kappa_values))
    kappa_growth = growth_exponent(radii, kappa_values) if kappa > 0 else 0.0
    kappa_bounded = kappa_growth <= KAPPA_GROWTH_LIMIT

    almost_eigen = certify_almost_eigen(end1, u, context.operator, context.lam, region, context.convention, samples, raise_on_failure=False)
    certificate = GraphDifferenceCertificate(
        kappa=kappa,
        kappa_growth=kappa_growth,
        kappa_bounded=kappa_bounded,
        almost_eigen=almost_eigen,
        passed=kappa_bounded and almost_eigen.passed,
    )
    mark = "✅" if certificate.passed else "❌"
    logger.info(f"{mark} Graph difference ({kind.value}): κ={kappa:.4g} (growth {kappa_growth:.3f}), M={almost_eigen.M:.4g}")
    return u, certificate


@dataclass(frozen=True)
class ScaledDistance:
    radii: tuple[float, ...]
    raw: tuple[float, ...]
    """r^{n+1}e^{r²/4}·dist_H"""
    normalized: tuple[float, ...]
    """raw divided by the decaying-mode series Σc_k r^{-2k}"""
    raw_variation: float
    variation: float
    """max/min − 1 of the normalized values"""
    identically_zero: bool


def _truncated_at(series: SeriesProfile, r: float) -> SeriesProfile:
    """Keep the terms up to the smallest one at radius r"""
    terms = [abs(c) * r ** (-2 * k) for k, c in enumerate(series.coefficients)]
    keep = 1
    while keep < len(terms) and terms[keep] < terms[keep - 1]:
        keep += 1
    return SeriesProfile(series.coefficients[:keep], series.exponent, series.gauss, series.amplitude)


def scaled_distance(u: SeparatedFunction, radii, correction: SeriesProfile | None = None) -> ScaledDistance:
    """dist_H on S_r is |t|/|∇r| to first order in the normal height t"""
    n = u.end.n
    if correction is not None:
        correction = _truncated_at(correction, min(float(r) for r in radii))
    raw, normalized = [], []
    for r in radii:
        r = float(r)
        log_t = u.profile.log_abs(r)
        if log_t == -math.inf:
            raw.append(0.0)
            normalized.append(0.0)
            continue
        log_scaled = log_t - math.log(u.end.psi(r)) + (n + 1) * math.log(r) + r * r / 4.0
        raw.append(math.exp(log_scaled))
        series = correction.reduced(r)[0] if correction is not None else 1.0
        normalized.append(math.exp(log_scaled) / abs(series))

    zero = all(v == 0.0 for v in raw)

    def variation(values):
        if zero:
            return 0.0
        return max(values) / min(values) - 1.0 if min(values) > 0 else math.inf

    return ScaledDistance(
        radii=tuple(float(r) for r in radii),
        raw=tuple(raw),
        normalized=tuple(normalized),
        raw_variation=variation(raw),
        variation=variation(normalized),
        identically_zero=zero,
    )

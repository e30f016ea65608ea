"""Rotationally symmetric self-shrinker and self-expander graphs

x_{n+1} = u(ρ) solves u″/(1+u′²) + (n−1)u′/ρ + σ(ρu′ − u)/2 = 0 with
σ = −1 for shrinkers and σ = +1 for expanders.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum

from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from errors import DomainError, NumericalFailure
from geometry.ends import exact_cone
from operators.context import OperatorSign
from solvers.profiles import DenseProfile, RadialProfile, SeriesProfile, SolveStats
from solvers.radial import SeedBranch, asymptotic_seed, radial_coefficients

logger = logging.getLogger(__name__)

GRADIENT_CAP = 1e6
AXIS_START = 1e-2
SLOPE_ITERATIONS = 8
MAX_BRACKET_DOUBLINGS = 40


class SelfSimilarKind(str, Enum):
    SHRINKER = "shrinker"
    EXPANDER = "expander"

    @property
    def sigma(self) -> int:
        return -1 if self is SelfSimilarKind.SHRINKER else 1


def _drift(n: int, sigma: int, rho: float, du: float, u: float) -> float:
    """G(p, u) = (n−1)p/ρ + σ(ρp − u)/2"""
    return (n - 1) * du / rho + sigma * (rho * du - u) / 2.0


def graph_second_derivative(n: int, sigma: int, rho: float, u: float, du: float) -> float:
    return -(1.0 + du * du) * _drift(n, sigma, rho, du, u)


def graph_third_derivative(n: int, sigma: int, rho: float, u: float, du: float, d2u: float) -> float:
    drift = _drift(n, sigma, rho, du, u)
    d_drift = (n - 1) * (d2u / rho - du / (rho * rho)) + sigma * rho * d2u / 2.0
    return -2.0 * du * d2u * drift - (1.0 + du * du) * d_drift


class SlowExpansion(RadialProfile):
    """u = sρ + c₁ρ^{-1} + c₃ρ^{-3}, c₁ = σ(n−1)s, c₃ = σc₁(1/(1+s²) − (n−1)/2)"""

    def __init__(self, kind: SelfSimilarKind, n: int, slope: float):
        self.kind = kind
        self.n = n
        self.slope = slope
        sigma = kind.sigma
        self.c1 = sigma * (n - 1) * slope
        self.c3 = sigma * self.c1 * (1.0 / (1.0 + slope * slope) - (n - 1) / 2.0)
        self.label = f"slow-expansion(s={slope:g})"

    def reduced(self, rho):
        s, c1, c3 = self.slope, self.c1, self.c3
        u = s * rho + c1 / rho + c3 / rho**3
        du = s - c1 / rho**2 - 3.0 * c3 / rho**4
        d2u = 2.0 * c1 / rho**3 + 12.0 * c3 / rho**5
        return u, du, d2u


def slope_from_state(kind: SelfSimilarKind, n: int, rho: float, du: float) -> float:
    """Fixed point of s = u′(ρ) + c₁(s)ρ^{-2} + 3c₃(s)ρ^{-4}"""
    s = du
    for _ in range(SLOPE_ITERATIONS):
        expansion = SlowExpansion(kind, n, s)
        s = du + expansion.c1 / rho**2 + 3.0 * expansion.c3 / rho**4
    return s


class GraphProfile(DenseProfile):
    """Dense-output solution of the graph equation, in the coordinate ρ"""

    def __init__(self, kind: SelfSimilarKind, n: int, slope: float, solution, r_lo: float, r_hi: float, stats: SolveStats, tail: RadialProfile | None = None, label: str = "graph"):
        sigma = kind.sigma
        super().__init__(
            solution,
            lambda rho, u, du: graph_second_derivative(n, sigma, rho, u, du),
            r_lo=r_lo,
            r_hi=r_hi,
            stats=stats,
            tail=tail,
            label=label,
        )
        self.kind = kind
        self.n = n
        self.slope = slope

    @property
    def rho_lo(self) -> float:
        return self.r_lo

    @property
    def rho_hi(self) -> float:
        return self.r_hi

    def third_derivative(self, rho: float) -> float:
        u, du, d2u = self.derivatives(rho)
        return graph_third_derivative(self.n, self.kind.sigma, rho, u, du, d2u)


class PlaneProfile(RadialProfile):
    """u ≡ 0, a plane through the origin; an exact solution for both kinds"""

    slope = 0.0

    def __init__(self, kind: SelfSimilarKind, n: int, rho_lo: float = 0.0):
        self.kind = kind
        self.n = n
        self.r_lo = rho_lo
        self.label = "plane"

    @property
    def rho_lo(self) -> float:
        return self.r_lo

    @property
    def rho_hi(self) -> float:
        return self.r_hi

    def reduced(self, rho):
        return 0.0, 0.0, 0.0

    def third_derivative(self, rho: float) -> float:
        return 0.0


def _blow_up(rho, y):
    return GRADIENT_CAP - abs(y[1])


_blow_up.terminal = True


def _integrate_graph(kind: SelfSimilarKind, n: int, rho0: float, y0, rho_end: float, rtol: float, atol: float):
    sigma = kind.sigma

    def rhs(rho, y):
        return [y[1], graph_second_derivative(n, sigma, rho, y[0], y[1])]

    sol = solve_ivp(rhs, (rho0, rho_end), y0, method="DOP853", rtol=rtol, atol=atol, dense_output=True, events=_blow_up)
    if sol.status == 1:
        raise NumericalFailure(
            f"{kind.value} profile is not graphical: gradient blow-up",
            last_good_radius=float(sol.t[-1]),
            start=rho0,
        )
    if not sol.success:
        raise NumericalFailure(f"{kind.value} profile integration failed: {sol.message}", radius=float(sol.t[-1]))
    stats = SolveStats(rtol=rtol, atol=atol, nfev=int(sol.nfev), steps=len(sol.t) - 1, message=sol.message)
    return sol, stats


def _axis_state(n: int, sigma: int, height: float) -> list[float]:
    """Taylor start u = a + σaρ²/(4n) at ρ = AXIS_START"""
    b = sigma * height / (4.0 * n)
    return [height + b * AXIS_START**2, 2.0 * b * AXIS_START]


@dataclass(frozen=True)
class InnerData:
    rho0: float
    u0: float
    du0: float


def solve_selfsimilar_profile(
    kind: SelfSimilarKind | str,
    n: int,
    inner: InnerData | tuple[float, float, float] | None = None,
    slope: float | None = None,
    rho_max: float = 60.0,
    rho_min: float = 5.0,
    seed_radius: float = 40.0,
    rtol: float = 1e-10,
    atol: float = 1e-12,
):
    """Profile from inner data (integrated outward) or from an asymptotic slope

    Expanders with a target slope are shot from the axis on the height a,
    bisecting (brentq) the measured slope at ρ_max. Shrinkers with a target
    slope are integrated inward from the slow expansion at seed_radius.
    """
    kind = SelfSimilarKind(kind)
    if n < 2:
        raise DomainError("Profile dimension must be at least 2", n=n)
    if (inner is None) == (slope is None):
        raise DomainError("Give exactly one of inner data or asymptotic slope")

    if inner is not None:
        inner = inner if isinstance(inner, InnerData) else InnerData(*inner)
        if not 0 < inner.rho0 < rho_max:
            raise DomainError("Inner radius must lie in (0, ρ_max)", rho0=inner.rho0, rho_max=rho_max)
        sol, stats = _integrate_graph(kind, n, inner.rho0, [inner.u0, inner.du0], rho_max, rtol, atol)
        measured = slope_from_state(kind, n, rho_max, float(sol.y[1, -1]))
        logger.debug(f"{kind.value} from inner data {inner}: slope {measured:.10g}")
        return GraphProfile(kind, n, measured, sol.sol, inner.rho0, rho_max, stats, label=f"{kind.value}(inner)")

    if not math.isfinite(slope):
        raise DomainError("Asymptotic slope must be finite", slope=slope)
    if slope == 0.0:
        return PlaneProfile(kind, n)
    if kind is SelfSimilarKind.EXPANDER:
        return _shoot_expander(n, slope, rho_max, rtol, atol)

    if not 0 < rho_min < seed_radius:
        raise DomainError("Need 0 < ρ_min < seed radius", rho_min=rho_min, seed_radius=seed_radius)
    tail = SlowExpansion(kind, n, slope)
    u, du, _ = tail.reduced(seed_radius)
    sol, stats = _integrate_graph(kind, n, seed_radius, [u, du], rho_min, rtol, atol)
    logger.debug(f"shrinker with slope {slope:g} integrated inward from {seed_radius:g} to {rho_min:g}")
    return GraphProfile(kind, n, slope, sol.sol, rho_min, seed_radius, stats, tail=tail, label=f"shrinker(s={slope:g})")


def _shoot_expander(n: int, slope: float, rho_max: float, rtol: float, atol: float) -> GraphProfile:
    kind = SelfSimilarKind.EXPANDER
    direction = math.copysign(1.0, slope)
    target = abs(slope)

    def measured(height: float) -> float:
        sol, _ = _integrate_graph(kind, n, AXIS_START, _axis_state(n, 1, height), rho_max, rtol, atol)
        return slope_from_state(kind, n, rho_max, float(sol.y[1, -1]))

    lo, hi = 0.0, 1.0
    for _ in range(MAX_BRACKET_DOUBLINGS):
        if measured(hi) >= target:
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise NumericalFailure("Shooting bracket for the expander slope not found", slope=slope, last_height=hi)

    height = brentq(lambda a: measured(a) - target, lo, hi, xtol=1e-14, rtol=1e-13)
    sol, stats = _integrate_graph(kind, n, AXIS_START, _axis_state(n, 1, direction * height), rho_max, rtol, atol)
    logger.info(f"✅ Expander with slope {slope:g} (n={n}) shot from axis height {direction * height:.10g}")
    return GraphProfile(kind, n, slope, sol.sol, AXIS_START, rho_max, stats, label=f"expander(s={slope:g})")


def curvature_residual(profile: RadialProfile, n: int, kind: SelfSimilarKind | str, rho: float) -> float:
    """|H − σ⟨x,n⟩/2| from κ₁ = u″/W³, κ₂ = u′/(ρW), ⟨x,n⟩ = (u − ρu′)/W"""
    sigma = SelfSimilarKind(kind).sigma
    u, du, d2u = profile.derivatives(rho)
    w = math.sqrt(1.0 + du * du)
    mean_curvature = d2u / w**3 + (n - 1) * du / (rho * w)
    support = (u - rho * du) / w
    return abs(mean_curvature - sigma * support / 2.0)


@dataclass(frozen=True)
class SelfSimilarPair:
    """Base expander u₁ and the difference w = u₂ − u₁ of a companion with the same cone"""

    kind: SelfSimilarKind
    n: int
    base: RadialProfile
    difference: RadialProfile
    """w(ρ) with w′, w″, in the coordinate ρ"""
    amplitude: float
    seed_radius: float
    correction: SeriesProfile | None = field(default=None, repr=False)
    """decaying-mode series r^{-n-1}e^{-r²/4}·Σc_k r^{-2k} used for the seed"""

    @property
    def slope(self) -> float:
        return self.base.slope


def solve_selfsimilar_pair(
    kind: SelfSimilarKind | str,
    n: int,
    slope: float = 0.0,
    amplitude: float = 1.0,
    seed_radius: float = 14.0,
    rho_min: float = 4.0,
    rho_max: float = 60.0,
    rtol: float = 1e-10,
    atol: float = 1e-12,
) -> SelfSimilarPair:
    """Two expanders asymptotic to the same cone

    The companion differs from the base by amplitude × the decaying mode of
    (L⁺_0 − ½) at seed_radius; the difference is integrated inward in the
    exact difference form
    w″ = −[(1+(p+q)²)G(q,w) + q(2p+q)G(p,u)], p = u₁′, q = w′.
    """
    kind = SelfSimilarKind(kind)
    if kind is not SelfSimilarKind.EXPANDER:
        raise DomainError("Same-cone pairs are constructed for expanders only", kind=kind.value)
    if not 0 < rho_min < seed_radius < rho_max:
        raise DomainError("Need 0 < ρ_min < seed radius < ρ_max", rho_min=rho_min, seed_radius=seed_radius, rho_max=rho_max)

    base = solve_selfsimilar_profile(kind, n, slope=slope, rho_max=rho_max, rtol=rtol, atol=atol)
    ode = radial_coefficients(exact_cone(n), 0.0, -0.5, 0.0, OperatorSign.PLUS)
    u, du, d2u = base.derivatives(seed_radius)
    r_seed = math.hypot(seed_radius, u)
    seed = asymptotic_seed(ode, SeedBranch.GAUSSIAN, r_seed)
    correction = seed.profile()

    if amplitude == 0.0:
        zero = _ZeroDifference(rho_min, seed_radius)
        return SelfSimilarPair(kind, n, base, zero, 0.0, seed_radius, correction)

    t, dt_dr, _ = correction.derivatives(r_seed)
    w_base = math.sqrt(1.0 + du * du)
    dw_base = du * d2u / w_base
    dr_drho = (seed_radius + u * du) / r_seed
    w0 = amplitude * t * w_base
    dw0 = amplitude * (dt_dr * dr_drho * w_base + t * dw_base)

    sigma = kind.sigma

    def second(rho, w, q):
        bu, bp, _ = base.derivatives(rho)
        return -((1.0 + (bp + q) ** 2) * _drift(n, sigma, rho, q, w) + q * (2.0 * bp + q) * _drift(n, sigma, rho, bp, bu))

    def rhs(rho, y):
        return [y[1], second(rho, y[0], y[1])]

    scale = max(abs(w0), abs(dw0))
    sol = solve_ivp(rhs, (seed_radius, rho_min), [w0, dw0], method="DOP853", rtol=rtol, atol=atol * scale, dense_output=True)
    if not sol.success:
        raise NumericalFailure(f"Difference integration failed: {sol.message}", radius=float(sol.t[-1]))
    stats = SolveStats(rtol=rtol, atol=atol * scale, nfev=int(sol.nfev), steps=len(sol.t) - 1, message=sol.message)
    difference = DenseProfile(sol.sol, second, r_lo=rho_min, r_hi=seed_radius, stats=stats, label="graph-difference")
    logger.debug(f"Expander pair (s={slope:g}, A={amplitude:g}): difference integrated in {stats.steps} steps")
    return SelfSimilarPair(kind, n, base, difference, amplitude, seed_radius, correction)


class _ZeroDifference(RadialProfile):
    def __init__(self, r_lo: float, r_hi: float):
        self.r_lo, self.r_hi = r_lo, r_hi
        self.label = "zero-difference"

    def reduced(self, r):
        return 0.0, 0.0, 0.0

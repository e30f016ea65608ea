"""Radial eigen-ODEs f″ + p f′ + q f = 0, asymptotic seeds and integration"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np
from scipy.integrate import solve_ivp

from errors import DomainError, NumericalFailure, SeedError
from geometry.ends import WeaklyConicalEnd
from operators.context import OperatorSign
from solvers.profiles import DenseProfile, PiecewiseProfile, RadialProfile, SeriesProfile, SolveStats

logger = logging.getLogger(__name__)

MAX_SERIES_ORDER = 60
SERIES_FLOOR = 1e-17


@dataclass(frozen=True)
class RadialODE:
    """(L ± λ) separated over a rotationally reducible end

    p = ψ′/ψ + (n−1)h′/(2h) + m/r ∓ r/2, q = (λ − μ_link/h)/ψ²
    """

    end: WeaklyConicalEnd = field(repr=False)
    m: float
    lam: float
    mu_link: float
    sign: OperatorSign

    @property
    def n(self) -> int:
        return self.end.n

    @property
    def sigma(self) -> int:
        return self.sign.sigma

    @property
    def provenance(self) -> dict:
        return {
            "end": self.end.model.name,
            "n": self.n,
            "m": self.m,
            "lam": self.lam,
            "mu_link": self.mu_link,
            "sign": self.sign.value,
        }

    def p(self, r: float) -> float:
        drift = self.m / r - self.sigma * r / 2.0
        if self.end.is_exact_cone:
            return (self.n - 1) / r + drift
        end = self.end
        return end.dpsi(r) / end.psi(r) + 0.5 * (self.n - 1) * end.dh(r) / end.h(r) + drift

    def q(self, r: float) -> float:
        if self.end.is_exact_cone:
            return self.lam - self.mu_link / (r * r)
        psi = self.end.psi(r)
        return (self.lam - self.mu_link / self.end.h(r)) / (psi * psi)

    def abel_exponent(self, r: float) -> float:
        """∫p = ln ψ + ((n−1)/2) ln h + m ln r ∓ r²/4"""
        end = self.end
        return math.log(end.psi(r)) + 0.5 * (self.n - 1) * math.log(end.h(r)) + self.m * math.log(r) - self.sigma * r * r / 4.0

    def rhs(self, r: float, y):
        return [y[1], -self.p(r) * y[1] - self.q(r) * y[0]]

    def second_derivative(self, r: float, f: float, df: float) -> float:
        return -self.p(r) * df - self.q(r) * f

    def residual(self, r: float, f: float, df: float, d2f: float) -> float:
        return d2f + self.p(r) * df + self.q(r) * f


def radial_coefficients(end: WeaklyConicalEnd, m: float, lam: float, mu_link: float, sign: OperatorSign | str) -> RadialODE:
    return RadialODE(end=end, m=m, lam=lam, mu_link=mu_link, sign=OperatorSign(sign))


class SeedBranch(str, Enum):
    SLOW = "slow"
    GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class AsymptoticSeed:
    """Truncated series f ≈ r^μ e^{γr²/4}·Σ c_k r^{-2k} at the seed radius R"""

    branch: SeedBranch
    R: float
    coefficients: tuple[float, ...]
    exponent: float
    gauss: int
    exact: bool
    """the recurrence terminated: the series is an exact solution"""
    ode: RadialODE = field(repr=False)

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def profile(self, amplitude: float = 1.0, r_lo: float = 0.0) -> SeriesProfile:
        return SeriesProfile(self.coefficients, self.exponent, self.gauss, amplitude=amplitude, r_lo=r_lo)

    def state(self, amplitude: float = 1.0) -> tuple[float, float]:
        f, df, _ = self.profile(amplitude).derivatives(self.R)
        if not (math.isfinite(f) and math.isfinite(df)):
            raise SeedError("Seed state overflows; use a log-scaled start or a smaller R", R=self.R, branch=self.branch.value)
        return f, df

    def relative_residual(self, r: float) -> float:
        """|f″ + pf′ + qf| / (|f″| + |pf′| + |qf|) of the truncated series"""
        f0, f1, f2 = self.profile().scaled_derivatives(r)
        p, q = self.ode.p(r), self.ode.q(r)
        scale = abs(f2) + abs(p * f1) + abs(q * f0)
        return abs(f2 + p * f1 + q * f0) / scale if scale > 0 else 0.0


def asymptotic_seed(ode: RadialODE, branch: SeedBranch | str, R: float, order: int | None = None) -> AsymptoticSeed:
    """Series coefficients from the exact-cone recurrence

    For f″ + (N/r − s r/2)f′ + (λ − μ/r²)f = 0 with N = n−1+m the slow
    solution is r^{2sλ}Σ c_k r^{-2k} with
    c_k = −s[(μ_e−2k+2)(μ_e−2k+1+N) − μ]c_{k−1}/k.
    The Gaussian branch e^{s r²/4}·g reduces to the same form with s → −s
    and λ → λ + s(N+1)/2.
    """
    branch = SeedBranch(branch)
    if R <= 0:
        raise DomainError("Seed radius must be positive", R=R)
    if order is not None and order < 0:
        raise DomainError("Series order must be non-negative", order=order)

    s = ode.sigma
    big_n = ode.n - 1 + ode.m
    if branch is SeedBranch.SLOW:
        s_eff, lam_eff, gauss = s, ode.lam, 0
    else:
        s_eff, lam_eff, gauss = -s, ode.lam + s * (big_n + 1) / 2.0, s
    mu = 2.0 * s_eff * lam_eff

    coefficients = [1.0]
    exact = False
    inv_r2 = 1.0 / (R * R)
    limit = MAX_SERIES_ORDER if order is None else order
    for k in range(1, limit + 1):
        c = -s_eff * ((mu - 2 * k + 2) * (mu - 2 * k + 1 + big_n) - ode.mu_link) * coefficients[-1] / k
        if c == 0.0:
            exact = True
            break
        ratio = abs(c) * inv_r2 / abs(coefficients[-1])
        if ratio >= 0.5 and (order is not None or k == 1):
            raise SeedError(
                "Asymptotic series is not decreasing at the seed radius; choose a larger R",
                R=R,
                branch=branch.value,
                term=k,
                ratio=ratio,
            )
        if ratio >= 1.0:
            # optimal truncation: stop at the smallest term
            break
        coefficients.append(c)
        if order is None and abs(c) * inv_r2**k < SERIES_FLOOR:
            break

    seed = AsymptoticSeed(branch, R, tuple(coefficients), mu, gauss, exact, ode)
    logger.debug(f"{branch.value} seed at R={R:g}: exponent {mu:g}, order {seed.order}, exact={exact}")
    return seed


def integrate_profile(
    ode: RadialODE,
    start: AsymptoticSeed | tuple[float, float, float],
    r_end: float,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    amplitude: float = 1.0,
    keep_tail: bool = True,
) -> DenseProfile:
    """Integrate from a seed (at seed.R) or from (r₀, f₀, f₀′) to r_end

    atol is taken relative to the size of the initial state. Profiles built
    inward from a seed keep the seed series as their tail beyond R.
    """
    if rtol <= 0 or atol <= 0:
        raise DomainError("ODE tolerances must be positive", rtol=rtol, atol=atol)
    if isinstance(start, AsymptoticSeed):
        r0 = start.R
        y0 = list(start.state(amplitude))
        label = f"{start.branch.value}-branch"
    else:
        r0, f0, df0 = start
        y0 = [f0, df0]
        label = "initial-value"
    if r0 <= 0 or r_end <= 0:
        raise DomainError("Integration span must lie in (0, ∞)", r0=r0, r_end=r_end)
    if r0 == r_end:
        raise DomainError("Integration span is empty", r0=r0)

    scale = max(abs(y0[0]), abs(y0[1]))
    atol_eff = atol * scale if scale > 0 else atol
    sol = solve_ivp(ode.rhs, (r0, r_end), y0, method="DOP853", rtol=rtol, atol=atol_eff, dense_output=True)
    if not sol.success:
        raise NumericalFailure(f"Radial integration failed: {sol.message}", radius=float(sol.t[-1]), start=r0, target=r_end)

    stats = SolveStats(rtol=rtol, atol=atol_eff, nfev=int(sol.nfev), steps=len(sol.t) - 1, message=sol.message)
    tail = start.profile(amplitude) if keep_tail and isinstance(start, AsymptoticSeed) and r_end < r0 else None
    logger.debug(f"Integrated {label} from {r0:g} to {r_end:g}: {stats.steps} steps, nfev={stats.nfev}")
    return DenseProfile(
        sol.sol,
        ode.second_derivative,
        r_lo=min(r0, r_end),
        r_hi=max(r0, r_end),
        stats=stats,
        tail=tail,
        label=label,
    )


def integrate_branch(
    ode: RadialODE,
    seed: AsymptoticSeed,
    r_lo: float,
    r_hi: float,
    rtol: float = 1e-10,
    atol: float = 1e-24,
    amplitude: float = 1.0,
) -> PiecewiseProfile:
    """Integrate a seed both ways from R over [r_lo, r_hi], series tail beyond r_hi

    For a branch that dominates at infinity the seed radius sets the
    accuracy: contamination by the recessive branch grows inward from R.
    The default atol is effectively pure relative control, since the branch
    shrinks by e^{-R²/4} toward r_lo.
    """
    if not r_lo < seed.R < r_hi:
        raise DomainError("Seed radius must lie inside the span", R=seed.R, r_lo=r_lo, r_hi=r_hi)
    inner = integrate_profile(ode, seed, r_lo, rtol, atol, amplitude, keep_tail=False)
    outer = integrate_profile(ode, seed, r_hi, rtol, atol, amplitude)
    tail = seed.profile(amplitude, r_lo=r_hi)
    return PiecewiseProfile([inner, outer, tail], label=f"{seed.branch.value}-branch")


def abel_variation(ode: RadialODE, first: RadialProfile, second: RadialProfile, radii: Sequence[float]) -> float:
    """max |W·e^{∫p} / (W·e^{∫p})(r₀) − 1| over the radii"""
    values = []
    for r in radii:
        f0, f1, _ = first.scaled_derivatives(float(r))
        g0, g1, _ = second.scaled_derivatives(float(r))
        log_scale = first.log_scale(float(r))[0] + second.log_scale(float(r))[0]
        wronskian = f0 * g1 - g0 * f1
        if wronskian == 0.0:
            raise NumericalFailure("Solutions are linearly dependent", radius=float(r))
        values.append((math.copysign(1.0, wronskian), math.log(abs(wronskian)) + log_scale + ode.abel_exponent(float(r))))
    sign0, log0 = values[0]
    return max(abs(sign * sign0 * math.exp(log - log0) - 1.0) for sign, log in values)


@dataclass(frozen=True)
class BasisDecomposition:
    slow_coefficient: float
    gaussian_coefficient: float
    """coefficients in the units of each profile's log scale at the window start"""
    residual: float
    window: tuple[float, float]
    samples: int


def _scaled_values(profile: RadialProfile, radii: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    signs = np.array([profile.sign(float(r)) for r in radii])
    logs = np.array([profile.log_abs(float(r)) for r in radii])
    return signs, logs


def decompose_basis(
    solution: RadialProfile,
    slow: RadialProfile,
    gaussian: RadialProfile,
    window: tuple[float, float] = (10.0, 20.0),
    samples: int = 200,
) -> BasisDecomposition:
    """Least-squares fit solution ≈ a·slow + b·gaussian on the window

    Rows are scaled by the larger branch so e^{r²/4} never dominates the
    conditioning; the residual is max |solution − fit| / (|a·slow| + |b·gaussian|).
    """
    lo, hi = window
    if not hi > lo:
        raise DomainError("Decomposition window is empty", window=window)
    radii = np.linspace(lo, hi, samples)
    s_sign, s_log = _scaled_values(slow, radii)
    g_sign, g_log = _scaled_values(gaussian, radii)
    u_sign, u_log = _scaled_values(solution, radii)
    s_ref, g_ref = s_log[0], g_log[0]

    row_log = np.maximum(s_log - s_ref, g_log - g_ref)
    x_slow = s_sign * np.exp(s_log - s_ref - row_log)
    x_gauss = g_sign * np.exp(g_log - g_ref - row_log)
    y = u_sign * np.exp(u_log - row_log)

    design = np.column_stack([x_slow, x_gauss])
    (a, b), *_ = np.linalg.lstsq(design, y, rcond=None)
    fit = a * x_slow + b * x_gauss
    denominator = np.abs(a * x_slow) + np.abs(b * x_gauss)
    residual = float(np.max(np.abs(y - fit) / np.where(denominator > 0, denominator, 1.0)))
    logger.debug(f"Basis decomposition on [{lo:g}, {hi:g}]: a={a:.6g}, b={b:.6g}, residual={residual:.2e}")
    return BasisDecomposition(float(a), float(b), residual, (lo, hi), samples)

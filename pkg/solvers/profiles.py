"""Radial profiles f(r) with first and second derivatives

A profile is stored as f = e^{L(r)}·g(r): `reduced` gives (g, g′, g″) and
`log_scale` gives (L, L′, L″). Closed forms and ODE solutions use L ≡ 0;
Gaussian twists and series tails carry their exponential factor in L so
nothing overflows.
"""

import csv
import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from errors import DomainError
from quadrature.weights import safe_exp

logger = logging.getLogger(__name__)

Triple = tuple[float, float, float]
ZERO_LOG: Triple = (0.0, 0.0, 0.0)
PROFILE_CSV_HEADER = ["r", "f", "df", "d2f"]


class RadialProfile(ABC):
    r_lo: float = 0.0
    r_hi: float = math.inf
    label: str = "profile"

    @abstractmethod
    def reduced(self, r: float) -> Triple:
        """(g, g′, g″)"""
        pass

    def log_scale(self, r: float) -> Triple:
        """(L, L′, L″)"""
        return ZERO_LOG

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return ()

    def check_domain(self, r: float) -> None:
        if not (self.r_lo * (1 - 1e-12) <= r <= self.r_hi * (1 + 1e-12)):
            raise DomainError(f"Radius outside the domain of {self.label}", radius=r, r_lo=self.r_lo, r_hi=self.r_hi)

    def scaled_derivatives(self, r: float) -> Triple:
        """e^{-L}·(f, f′, f″)"""
        self.check_domain(r)
        g, dg, d2g = self.reduced(r)
        _, dl, d2l = self.log_scale(r)
        return g, dg + dl * g, d2g + 2.0 * dl * dg + (d2l + dl * dl) * g

    def derivatives(self, r: float) -> Triple:
        f0, f1, f2 = self.scaled_derivatives(r)
        scale = self.log_scale(r)[0]
        if scale == 0.0:
            return f0, f1, f2
        factor = safe_exp(scale)
        return f0 * factor, f1 * factor, f2 * factor

    def value(self, r: float) -> float:
        return self.derivatives(r)[0]

    def log_abs(self, r: float) -> float:
        """ln|f(r)|"""
        self.check_domain(r)
        g = self.reduced(r)[0]
        if g == 0.0:
            return -math.inf
        return self.log_scale(r)[0] + math.log(abs(g))

    def sign(self, r: float) -> float:
        self.check_domain(r)
        return float(np.sign(self.reduced(r)[0]))

    def log_derivative(self, r: float) -> float:
        """f′/f"""
        f0, f1, _ = self.scaled_derivatives(r)
        return f1 / f0 if f0 != 0.0 else math.inf

    def sample(self, radii: Sequence[float]) -> np.ndarray:
        return np.array([self.derivatives(float(r)) for r in radii])


class ExpressionProfile(RadialProfile):
    """Closed-form f with explicit derivatives"""

    def __init__(
        self,
        f: Callable[[float], float],
        df: Callable[[float], float],
        d2f: Callable[[float], float],
        r_lo: float = 0.0,
        r_hi: float = math.inf,
        label: str = "expression",
    ):
        self._f, self._df, self._d2f = f, df, d2f
        self.r_lo, self.r_hi, self.label = r_lo, r_hi, label

    def reduced(self, r):
        return self._f(r), self._df(r), self._d2f(r)

    @classmethod
    def constant(cls, c: float = 1.0) -> "ExpressionProfile":
        return cls(lambda r: c, lambda r: 0.0, lambda r: 0.0, label=f"constant({c:g})")

    @classmethod
    def exponential_combination(cls, terms: Sequence[tuple[float, float, float]]) -> "ExpressionProfile":
        """Σ c·e^{-σr}·r^p for terms (c, σ, p)"""
        return ExponentialCombination(terms)


class ExponentialCombination(ExpressionProfile):
    """Σ c·e^{-σr}·r^p, all three derivatives from one pass over the terms"""

    def __init__(self, terms: Sequence[tuple[float, float, float]]):
        self.terms = tuple(terms)
        super().__init__(lambda r: self.reduced(r)[0], lambda r: self.reduced(r)[1], lambda r: self.reduced(r)[2], label="exp-combination")

    def reduced(self, r):
        f = df = d2f = 0.0
        for c, sigma, p in self.terms:
            term = c * math.exp(-sigma * r) * r**p
            slope = p / r - sigma
            f += term
            df += term * slope
            d2f += term * (slope * slope - p / (r * r))
        return f, df, d2f


class PowerProfile(RadialProfile):
    """c·r^ν with the power carried in the log scale"""

    def __init__(self, nu: float, coefficient: float = 1.0):
        self.nu = nu
        self.coefficient = coefficient
        self.label = f"power({nu:g})"

    def reduced(self, r):
        return self.coefficient, 0.0, 0.0

    def log_scale(self, r):
        return self.nu * math.log(r), self.nu / r, -self.nu / (r * r)


class SeriesProfile(RadialProfile):
    """amplitude·r^μ e^{γr²/4}·Σ c_k r^{-2k}"""

    def __init__(self, coefficients: Sequence[float], exponent: float, gauss: int, amplitude: float = 1.0, r_lo: float = 0.0):
        self.coefficients = tuple(coefficients)
        self.exponent = exponent
        self.gauss = gauss
        self.amplitude = amplitude
        self.r_lo = r_lo
        self.label = f"series(order={len(self.coefficients) - 1})"

    def reduced(self, r):
        inv2 = 1.0 / (r * r)
        g = dg = d2g = 0.0
        power = 1.0
        for k, c in enumerate(self.coefficients):
            term = c * power
            g += term
            dg += -2 * k * term / r
            d2g += 2 * k * (2 * k + 1) * term * inv2
            power *= inv2
        a = self.amplitude
        return a * g, a * dg, a * d2g

    def log_scale(self, r):
        mu, gamma = self.exponent, self.gauss
        return mu * math.log(r) + gamma * r * r / 4.0, mu / r + gamma * r / 2.0, -mu / (r * r) + gamma / 2.0


class TransformedProfile(RadialProfile):
    """sign·e^{ℓ(r)}·base, with ℓ added to the base log scale"""

    def __init__(self, base: RadialProfile, extra: Callable[[float], Triple], sign: float = 1.0, label: str | None = None):
        self.base = base
        self.extra = extra
        self.factor_sign = sign
        self.r_lo, self.r_hi = base.r_lo, base.r_hi
        self.label = label or f"transformed({base.label})"

    @property
    def breakpoints(self):
        return self.base.breakpoints

    def check_domain(self, r):
        self.base.check_domain(r)

    def reduced(self, r):
        g, dg, d2g = self.base.reduced(r)
        s = self.factor_sign
        return s * g, s * dg, s * d2g

    def log_scale(self, r):
        l0, l1, l2 = self.base.log_scale(r)
        e0, e1, e2 = self.extra(r)
        return l0 + e0, l1 + e1, l2 + e2


def scale_profile(profile: RadialProfile, c: float) -> TransformedProfile:
    """c·f in log-safe form"""
    if c == 0:
        raise DomainError("Scaling by zero is not a log-safe transform")
    log_c = math.log(abs(c))
    return TransformedProfile(profile, lambda r: (log_c, 0.0, 0.0), sign=math.copysign(1.0, c), label=f"{c:g}·{profile.label}")


def power_factor(nu: float) -> Callable[[float], Triple]:
    """ℓ = ν ln r"""
    return lambda r: (nu * math.log(r), nu / r, -nu / (r * r))


def gaussian_factor(mu: float, sign: int) -> Callable[[float], Triple]:
    """ℓ = μ ln r + sign·r²/4 (ln Ψ_μ for sign = +1, ln Φ_μ for sign = −1)"""
    return lambda r: (mu * math.log(r) + sign * r * r / 4.0, mu / r + sign * r / 2.0, -mu / (r * r) + sign / 2.0)


@dataclass(frozen=True)
class SolveStats:
    rtol: float
    atol: float
    nfev: int
    steps: int
    message: str


class DenseProfile(RadialProfile):
    """Profile backed by an ODE dense output, optionally continued by a tail profile"""

    def __init__(
        self,
        solution,
        second: Callable[[float, float, float], float],
        r_lo: float,
        r_hi: float,
        stats: SolveStats,
        tail: RadialProfile | None = None,
        label: str = "ode",
    ):
        self.solution = solution
        self.second = second
        self.ode_lo, self.ode_hi = r_lo, r_hi
        self.r_lo = r_lo
        self.r_hi = math.inf if tail is not None else r_hi
        self.stats = stats
        self.tail = tail
        self.label = label

    @property
    def breakpoints(self):
        return (self.ode_hi,) if self.tail is not None else ()

    def _in_tail(self, r: float) -> bool:
        return self.tail is not None and r > self.ode_hi

    def reduced(self, r):
        if self._in_tail(r):
            return self.tail.reduced(r)
        f, df = self.solution(r)
        return float(f), float(df), self.second(r, float(f), float(df))

    def log_scale(self, r):
        if self._in_tail(r):
            return self.tail.log_scale(r)
        return ZERO_LOG


def export_profile_csv(profile: RadialProfile, radii: Sequence[float], path: str | Path) -> Path:
    """Write r,f,df,d2f rows"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(PROFILE_CSV_HEADER)
        for r in radii:
            f0, f1, f2 = profile.derivatives(float(r))
            writer.writerow([repr(float(r)), repr(f0), repr(f1), repr(f2)])
    logger.debug(f"Profile {profile.label} exported to {path}")
    return path


class PiecewiseProfile(RadialProfile):
    """Adjacent profiles glued at their common radii"""

    def __init__(self, pieces: Sequence[RadialProfile], label: str = "piecewise"):
        self.pieces = sorted(pieces, key=lambda p: p.r_lo)
        for left, right in zip(self.pieces, self.pieces[1:]):
            if abs(left.r_hi - right.r_lo) > 1e-12 * max(1.0, right.r_lo):
                raise DomainError("Pieces must be adjacent", left_hi=left.r_hi, right_lo=right.r_lo)
        self.r_lo = self.pieces[0].r_lo
        self.r_hi = self.pieces[-1].r_hi
        self.label = label

    @property
    def breakpoints(self):
        return tuple(p.r_hi for p in self.pieces[:-1])

    def _piece(self, r: float) -> RadialProfile:
        for piece in self.pieces[:-1]:
            if r <= piece.r_hi:
                return piece
        return self.pieces[-1]

    def reduced(self, r):
        return self._piece(r).reduced(r)

    def log_scale(self, r):
        return self._piece(r).log_scale(r)

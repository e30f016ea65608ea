"""End models: exact cones, warped cones and rotational graph ends

Every model is a warped product g = dr²/ψ(r)² + h(r)·g_ref over a round
reference link, so |∇r| = ψ and all surface quantities are functions of r.
"""

import logging
import math
from abc import ABC, abstractmethod
from typing import ClassVar, Protocol

import numpy as np
from scipy import optimize

from errors import DomainError, NumericalFailure

logger = logging.getLogger(__name__)


class EndModel(ABC):
    """Radial data of a rotationally reducible end"""

    name: ClassVar[str]

    def __init__(self, n: int):
        if n < 2:
            raise DomainError("End dimension must be at least 2", n=n)
        self.n = n

    @property
    def r_min(self) -> float:
        return 0.0

    @property
    def r_max(self) -> float:
        return math.inf

    @property
    def is_exact_cone(self) -> bool:
        return False

    @abstractmethod
    def psi(self, r: float) -> float:
        """|∇r|"""
        pass

    @abstractmethod
    def dpsi(self, r: float) -> float:
        pass

    @abstractmethod
    def h(self, r: float) -> float:
        """Warp factor of the reference link metric"""
        pass

    @abstractmethod
    def dh(self, r: float) -> float:
        pass

    def check_radius(self, r: float) -> None:
        if not (self.r_min <= r <= self.r_max):
            raise DomainError(f"Radius outside the {self.name} model", radius=r, r_min=self.r_min, r_max=self.r_max)

    def log_area_factor(self, r: float) -> float:
        """ln h^{(n-1)/2}"""
        return 0.5 * (self.n - 1) * math.log(self.h(r))

    def mean_curvature(self, r: float) -> float:
        """Mean curvature of S_r inside the end"""
        return 0.5 * (self.n - 1) * self.psi(r) * self.dh(r) / self.h(r)

    def gradient_gap(self, r: float) -> float:
        return abs(self.psi(r) - 1.0)

    def hessian_gap(self, r: float) -> float:
        """|∇²r² − 2g| from the warped-product Hessian"""
        psi = self.psi(r)
        radial = 2.0 * psi * psi + 2.0 * r * psi * self.dpsi(r) - 2.0
        tangential = r * psi * psi * self.dh(r) / self.h(r) - 2.0
        return math.sqrt(radial * radial + (self.n - 1) * tangential * tangential)

    def certification_gaps(self, r: float) -> tuple[float, float]:
        return self.gradient_gap(r), self.hessian_gap(r)


class ExactCone(EndModel):
    name = "exact_cone"

    @property
    def is_exact_cone(self) -> bool:
        return True

    def psi(self, r):
        return 1.0

    def dpsi(self, r):
        return 0.0

    def h(self, r):
        return r * r

    def dh(self, r):
        return 2.0 * r

    def gradient_gap(self, r):
        return 0.0

    def hessian_gap(self, r):
        return 0.0


class WarpedCone(EndModel):
    """dr² + h(r)g_L with h = r² + δ (additive) or h = r²(1 + δr^{-s}) (relative)"""

    name = "perturbed_cone"

    def __init__(self, n: int, delta: float, warp: str = "additive", power: float = 2.0):
        super().__init__(n)
        if warp not in ("additive", "relative"):
            raise DomainError(f"Unknown warp '{warp}'", warp=warp)
        if warp == "relative" and power < 2.0:
            raise DomainError("Relative warp needs s ≥ 2", power=power)
        self.delta = delta
        self.warp = warp
        self.power = power

    @property
    def r_min(self) -> float:
        # h must stay positive
        if self.delta >= 0:
            return 0.0
        if self.warp == "additive":
            return math.sqrt(-self.delta)
        return (-self.delta) ** (1.0 / self.power)

    def psi(self, r):
        return 1.0

    def dpsi(self, r):
        return 0.0

    def h(self, r):
        if self.warp == "additive":
            return r * r + self.delta
        return r * r + self.delta * r ** (2.0 - self.power)

    def dh(self, r):
        if self.warp == "additive":
            return 2.0 * r
        return 2.0 * r + (2.0 - self.power) * self.delta * r ** (1.0 - self.power)


class GraphProfileLike(Protocol):
    slope: float
    rho_lo: float
    rho_hi: float

    def derivatives(self, rho: float) -> tuple[float, float, float]: ...


class GraphEnd(EndModel):
    """Rotational graph x_{n+1} = u(|x|) over ℝⁿ minus a ball, with induced metric

    In the radius r = √(ρ² + u²) the metric is warped with
    ψ = P/(rW), h = ρ²/c², where P = ρ + uu′, W = √(1 + u′²) and
    c = (1 + s²)^{-1/2} is the link radius for asymptotic slope s.
    """

    name = "selfsimilar_end"

    def __init__(self, n: int, profile: GraphProfileLike, table_size: int = 4000):
        super().__init__(n)
        self.profile = profile
        self.link_radius = 1.0 / math.sqrt(1.0 + profile.slope**2)

        rho_top = profile.rho_hi if math.isfinite(profile.rho_hi) else max(4.0 * profile.rho_lo, 400.0)
        self._rho_table = np.geomspace(max(profile.rho_lo, 1e-6), rho_top, table_size)
        self._r_table = np.array([self.r_of_rho(x) for x in self._rho_table])
        if np.any(np.diff(self._r_table) <= 0):
            raise NumericalFailure("Graph end: r is not monotone in ρ (non-graphical over spheres)")

    @property
    def r_min(self) -> float:
        return float(self._r_table[0])

    @property
    def r_max(self) -> float:
        return math.inf if math.isinf(self.profile.rho_hi) else float(self._r_table[-1])

    def r_of_rho(self, rho: float) -> float:
        u, _, _ = self.profile.derivatives(rho)
        return math.hypot(rho, u)

    def rho_of(self, r: float) -> float:
        """Invert r(ρ)"""
        self.check_radius(r)
        if r <= self._r_table[-1]:
            guess = float(np.interp(r, self._r_table, self._rho_table))
        else:
            guess = r * self.link_radius

        def residual(rho):
            return self.r_of_rho(rho) - r

        def slope(rho):
            u, du, _ = self.profile.derivatives(rho)
            return (rho + u * du) / math.hypot(rho, u)

        try:
            rho = optimize.newton(residual, guess, fprime=slope, tol=1e-14 * max(r, 1.0), maxiter=50)
        except (RuntimeError, DomainError):
            rho = None
        if rho is None or not (self.profile.rho_lo <= rho <= self.profile.rho_hi) or abs(residual(rho)) > 1e-10 * r:
            lo, hi = self._bracket(r)
            rho = optimize.brentq(residual, lo, hi, xtol=1e-15 * max(r, 1.0))
        return float(rho)

    def _bracket(self, r: float) -> tuple[float, float]:
        idx = int(np.searchsorted(self._r_table, r))
        if idx == 0:
            return self.profile.rho_lo, float(self._rho_table[1])
        if idx < len(self._r_table):
            return float(self._rho_table[idx - 1]), float(self._rho_table[idx])
        hi = float(self._rho_table[-1])
        while self.r_of_rho(hi) < r:
            hi *= 2.0
        return float(self._rho_table[-1]), hi

    def _graph(self, r: float):
        rho = self.rho_of(r)
        u, du, d2u = self.profile.derivatives(rho)
        return rho, u, du, d2u

    def psi(self, r):
        rho, u, du, _ = self._graph(r)
        return (rho + u * du) / (r * math.sqrt(1.0 + du * du))

    def dpsi(self, r):
        rho, u, du, d2u = self._graph(r)
        p = rho + u * du
        w2 = 1.0 + du * du
        psi = p / (r * math.sqrt(w2))
        dp = 1.0 + du * du + u * d2u
        dpsi_drho = psi * (dp / p - p / (r * r) - du * d2u / w2)
        return dpsi_drho * r / p

    def h(self, r):
        rho = self.rho_of(r)
        return (rho / self.link_radius) ** 2

    def dh(self, r):
        rho, u, du, _ = self._graph(r)
        return 2.0 * rho / self.link_radius**2 * r / (rho + u * du)

    def mean_curvature(self, r):
        rho, _, du, _ = self._graph(r)
        return (self.n - 1) / (rho * math.sqrt(1.0 + du * du))

    def support(self, r: float) -> float:
        """⟨x, n⟩ for the upward unit normal"""
        rho, u, du, _ = self._graph(r)
        return (u - rho * du) / math.sqrt(1.0 + du * du)

    def second_fundamental_norm(self, r: float) -> float:
        rho, _, du, d2u = self._graph(r)
        w = math.sqrt(1.0 + du * du)
        k1 = d2u / w**3
        k2 = du / (rho * w)
        return math.sqrt(k1 * k1 + (self.n - 1) * k2 * k2)

    def certification_gaps(self, r: float) -> tuple[float, float]:
        """Extrinsic route: |∇r|² = 1 − ⟨x,n⟩²/r² and ∇²r² − 2g = −2⟨x,n⟩A"""
        support = self.support(r)
        ratio = (support / r) ** 2
        gradient = ratio / (1.0 + math.sqrt(1.0 - ratio))
        hessian = 2.0 * abs(support) * self.second_fundamental_norm(r)
        return gradient, hessian

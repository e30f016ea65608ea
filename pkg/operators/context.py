"""Drift operators, eigen-contexts and separated functions u = f(r)·a(θ)"""

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import TYPE_CHECKING

from errors import DomainError
from geometry.ends import WeaklyConicalEnd
from geometry.link import LinkMode
from quadrature.weights import WeightSpec

if TYPE_CHECKING:
    from solvers.profiles import RadialProfile


class OperatorSign(str, Enum):
    MINUS = "minus"
    """L_m = Δ − (r/2)∂_r + (m/r)∂_r, weight Φ_m"""
    PLUS = "plus"
    """L⁺_m = Δ + (r/2)∂_r + (m/r)∂_r, weight Ψ_m"""

    @property
    def sigma(self) -> int:
        """+1 for L_m, −1 for L⁺_m; the drift is −σ(r/2)∂_r"""
        return 1 if self is OperatorSign.MINUS else -1


@dataclass(frozen=True)
class DriftOperator:
    sign: OperatorSign
    m: float

    @classmethod
    def minus(cls, m: float = 0.0) -> "DriftOperator":
        return cls(OperatorSign.MINUS, m)

    @classmethod
    def plus(cls, m: float = 0.0) -> "DriftOperator":
        return cls(OperatorSign.PLUS, m)

    @property
    def weight(self) -> WeightSpec:
        if self.sign is OperatorSign.MINUS:
            return WeightSpec.gaussian(self.m)
        return WeightSpec.inverse_gaussian(self.m)

    @property
    def label(self) -> str:
        return f"L_{self.m:g}" if self.sign is OperatorSign.MINUS else f"L⁺_{self.m:g}"


class ResidualConvention(str, Enum):
    QUADRATIC = "quadratic"
    """r^{-2}(|u| + |∇u|)"""
    LINEAR = "linear"
    """r^{-1}(|u| + |∇u|)"""
    EXPANDER = "expander"
    """r^{-2}(|u| + r^{-1}|∇u|)"""
    TWISTED = "twisted"
    """r^{-1}(|u| + r^{-1}|∇u|)"""

    def weight(self, r: float, value: float, gradient: float) -> float:
        if self is ResidualConvention.QUADRATIC:
            return (value + gradient) / (r * r)
        if self is ResidualConvention.LINEAR:
            return (value + gradient) / r
        if self is ResidualConvention.EXPANDER:
            return (value + gradient / r) / (r * r)
        return (value + gradient / r) / r


@dataclass(frozen=True)
class EigenContext:
    """u is claimed to satisfy |(L + λ)u| ≤ M·(convention weight)"""

    operator: DriftOperator
    lam: float
    convention: ResidualConvention = ResidualConvention.QUADRATIC

    @property
    def sign(self) -> OperatorSign:
        return self.operator.sign

    @property
    def m(self) -> float:
        return self.operator.m


@dataclass(frozen=True)
class SeparatedFunction:
    end: WeaklyConicalEnd
    mode: LinkMode
    profile: "RadialProfile"
    context: EigenContext | None = None
    label: str = "u"

    @property
    def mu_link(self) -> float:
        return self.mode.eigenvalue

    @property
    def norm_sq(self) -> float:
        """‖a‖²"""
        return self.mode.norm_sq

    def with_profile(self, profile: "RadialProfile", context: EigenContext | None, label: str | None = None) -> "SeparatedFunction":
        return replace(self, profile=profile, context=context, label=label or self.label)

    def require_context(self) -> EigenContext:
        if self.context is None:
            raise DomainError(f"{self.label} has no eigen-context")
        return self.context

    def log_reference(self, r: float) -> float:
        """ln of the profile's log scale at r, used as a common reference"""
        return self.profile.log_scale(r)[0]

    def reduced_gradient(self, r: float, f0: float, f1: float) -> float:
        """|∇u| per unit ‖a‖, in the profile's scaled units: √(ψ²f′² + μ f²/h)"""
        psi = self.end.psi(r)
        return math.sqrt(psi * psi * f1 * f1 + self.mu_link * f0 * f0 / self.end.h(r))


def separated(end: WeaklyConicalEnd, profile: "RadialProfile", degree: int = 0, context: EigenContext | None = None, label: str = "u") -> SeparatedFunction:
    """u = f·a with a the link mode of the given degree"""
    return SeparatedFunction(end=end, mode=end.link.mode(degree), profile=profile, context=context, label=label)

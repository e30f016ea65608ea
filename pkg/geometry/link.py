"""Round links and their Laplace eigenmodes"""

import math
from dataclasses import dataclass
from enum import Enum

from scipy.special import gammaln

from errors import DomainError

DEFAULT_DEGREES = (0, 1, 2, 3)


class LinkKind(str, Enum):
    ROUND_SPHERE = "round_sphere"
    ROUND_CIRCLE = "round_circle"


@dataclass(frozen=True)
class LinkMode:
    """一个链接本征函数 a(θ)，归一化使 ‖a‖² = vol(link)"""

    degree: int
    eigenvalue: float
    """μ_link = ‖∇a‖² / ‖a‖²"""
    norm_sq: float
    grad_norm_sq: float

    @property
    def rayleigh_quotient(self) -> float:
        return self.grad_norm_sq / self.norm_sq


@dataclass(frozen=True)
class LinkSpec:
    dimension: int
    """n − 1"""
    kind: LinkKind
    radius: float
    modes: tuple[LinkMode, ...]

    @classmethod
    def round(cls, n: int, radius: float = 1.0, degrees: tuple[int, ...] = DEFAULT_DEGREES) -> "LinkSpec":
        """Round S^{n-1} of the given radius; a circle when n = 2"""
        if n < 2:
            raise DomainError("Link needs n ≥ 2", n=n)
        if radius <= 0:
            raise DomainError("Link radius must be positive", radius=radius)
        kind = LinkKind.ROUND_CIRCLE if n == 2 else LinkKind.ROUND_SPHERE
        volume = round_sphere_volume(n - 1, radius)
        modes = []
        for degree in sorted(set(degrees) | {0}):
            if degree < 0:
                raise DomainError("Mode degree must be non-negative", degree=degree)
            mu = degree * (degree + n - 2) / radius**2
            modes.append(LinkMode(degree=degree, eigenvalue=mu, norm_sq=volume, grad_norm_sq=mu * volume))
        return cls(dimension=n - 1, kind=kind, radius=radius, modes=tuple(modes))

    @property
    def volume(self) -> float:
        return round_sphere_volume(self.dimension, self.radius)

    def mode(self, degree: int) -> LinkMode:
        for mode in self.modes:
            if mode.degree == degree:
                return mode
        raise DomainError(f"Mode of degree {degree} is not tabled for this link", degree=degree)

    @property
    def constant_mode(self) -> LinkMode:
        return self.mode(0)


def round_sphere_volume(dimension: int, radius: float) -> float:
    """Volume of the round S^d of radius c: c^d·2π^{(d+1)/2}/Γ((d+1)/2)"""
    half = (dimension + 1) / 2.0
    log_volume = dimension * math.log(radius) + math.log(2.0) + half * math.log(math.pi) - float(gammaln(half))
    return math.exp(log_volume)

import logging
import math
from dataclasses import dataclass
from typing import Any

from errors import CertificationError, DomainError
from geometry.certify import CertificationReport, certification_grid, certify_weakly_conical
from geometry.link import DEFAULT_DEGREES, LinkSpec
from geometry.models import EndModel, ExactCone, GraphEnd, WarpedCone

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EndDescription:
    """Model parameters accepted by build_end"""

    model: str
    n: int
    r_inner: float
    r_max: float = 80.0
    link_radius: float = 1.0
    delta: float = 0.0
    warp: str = "additive"
    warp_power: float = 2.0
    profile: Any = None
    """GraphProfile for selfsimilar_end"""
    degrees: tuple[int, ...] = DEFAULT_DEGREES
    samples: int = 200


@dataclass(frozen=True)
class WeaklyConicalEnd:
    n: int
    r_inner: float
    link: LinkSpec
    model: EndModel
    certification: CertificationReport

    @property
    def lam(self) -> float:
        return self.certification.lam

    @property
    def is_exact_cone(self) -> bool:
        return self.model.is_exact_cone

    @property
    def r_max(self) -> float:
        return self.model.r_max

    def psi(self, r: float) -> float:
        return self.model.psi(r)

    def dpsi(self, r: float) -> float:
        return self.model.dpsi(r)

    def h(self, r: float) -> float:
        return self.model.h(r)

    def dh(self, r: float) -> float:
        return self.model.dh(r)

    def log_area_factor(self, r: float) -> float:
        return self.model.log_area_factor(r)

    def check_radius(self, r: float) -> None:
        if r < self.r_inner * (1 - 1e-12):
            raise DomainError("Radius below the inner radius of the end", radius=r, r_inner=self.r_inner)
        self.model.check_radius(r)


def build_end(description: EndDescription) -> WeaklyConicalEnd:
    """Construct the model and attach its certified Λ"""
    n = description.n
    link_radius = description.link_radius

    if description.model == "exact_cone":
        model: EndModel = ExactCone(n)
    elif description.model == "perturbed_cone":
        model = WarpedCone(n, description.delta, description.warp, description.warp_power)
    elif description.model == "selfsimilar_end":
        if description.profile is None:
            raise DomainError("selfsimilar_end needs a graph profile")
        model = GraphEnd(n, description.profile)
        link_radius = model.link_radius
    else:
        raise DomainError(f"Unknown end model '{description.model}'", model=description.model)

    if description.r_inner <= max(1.0, model.r_min):
        raise DomainError("Inner radius must exceed 1 and the model's own lower limit", r_inner=description.r_inner)

    r_max = min(description.r_max, model.r_max)
    if not r_max > description.r_inner:
        raise DomainError("Certification range is empty", r_inner=description.r_inner, r_max=r_max)

    grid = certification_grid(description.r_inner, r_max, description.samples)
    report = certify_weakly_conical(model, grid)
    if not report.passed:
        raise CertificationError(
            f"{model.name} is not weakly conical on [{description.r_inner:g}, {r_max:g}]",
            **(report.violation or {}),
            lam=report.lam,
        )

    link = LinkSpec.round(n, link_radius, description.degrees)
    logger.info(f"✅ Built {model.name} (n={n}, R_inner={description.r_inner:g}, Λ={report.lam:.4g})")
    return WeaklyConicalEnd(n=n, r_inner=description.r_inner, link=link, model=model, certification=report)


def exact_cone(n: int, r_inner: float = 2.0, link_radius: float = 1.0) -> WeaklyConicalEnd:
    return build_end(EndDescription(model="exact_cone", n=n, r_inner=r_inner, r_max=max(80.0, 8 * r_inner), link_radius=link_radius))


def area_element_log(end: WeaklyConicalEnd, r: float) -> float:
    """ln of the radial density h^{(n-1)/2}/ψ of dμ_g"""
    return end.log_area_factor(r) - math.log(end.psi(r))

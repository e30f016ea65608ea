import math
from dataclasses import dataclass

from errors import DomainError
from geometry.ends import WeaklyConicalEnd


@dataclass(frozen=True)
class SphereData:
    rho: float
    area: float
    mean_curvature: float
    grad_r: float
    gap_dr_n: float
    """|∂_r − N|"""
    gap_n_x: float
    """|N − r^{-1}X|"""
    gap_dr_x: float
    """|∂_r − r^{-1}X|"""
    link_volume: float


def sphere_data(end: WeaklyConicalEnd, rho: float) -> SphereData:
    """Level set S_ρ = {r = ρ}; ∂_r = ∇r, N = ∇r/|∇r|, X = r∇r/|∇r|²"""
    if rho < end.r_inner:
        raise DomainError("Sphere data requested below R_inner", rho=rho, r_inner=end.r_inner)
    end.check_radius(rho)

    psi = end.psi(rho)
    volume = end.link.volume
    area = math.exp(end.log_area_factor(rho)) * volume
    return SphereData(
        rho=rho,
        area=area,
        mean_curvature=end.model.mean_curvature(rho),
        grad_r=psi,
        gap_dr_n=abs(psi - 1.0),
        gap_n_x=abs(1.0 - 1.0 / psi),
        gap_dr_x=abs(psi - 1.0 / psi),
        link_volume=volume,
    )

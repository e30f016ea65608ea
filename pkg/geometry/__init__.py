"""Weakly conical ends: models, certification and sphere data"""

from geometry.certify import CertificationReport, certification_grid, certify_weakly_conical
from geometry.ends import EndDescription, WeaklyConicalEnd, area_element_log, build_end, exact_cone
from geometry.link import LinkKind, LinkMode, LinkSpec, round_sphere_volume
from geometry.models import EndModel, ExactCone, GraphEnd, WarpedCone
from geometry.spheres import SphereData, sphere_data

__all__ = [
    "CertificationReport",
    "EndDescription",
    "EndModel",
    "ExactCone",
    "GraphEnd",
    "LinkKind",
    "LinkMode",
    "LinkSpec",
    "SphereData",
    "WarpedCone",
    "WeaklyConicalEnd",
    "area_element_log",
    "build_end",
    "certification_grid",
    "certify_weakly_conical",
    "exact_cone",
    "round_sphere_volume",
    "sphere_data",
]

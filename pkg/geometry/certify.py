"""Weakly conical certification on a radial grid"""

import logging
from dataclasses import dataclass

import numpy as np

from errors import DomainError, NumericalFailure
from geometry.models import EndModel

logger = logging.getLogger(__name__)

MIN_SAMPLES = 100
SAFETY_FACTOR = 1.05
CAP = 0.5


@dataclass(frozen=True)
class CertificationReport:
    """certify_weakly_conical 的结果"""

    radial_sup: float
    """sup r⁴·||∇r| − 1|"""
    hessian_sup: float
    """sup r²·|∇²r² − 2g|"""
    raw_sup: float
    lam: float
    """certified Λ = 1.05 × refined sup"""
    r_inner: float
    r_max: float
    samples: int
    passed: bool
    violation: dict | None = None


def certification_grid(r_inner: float, r_max: float, samples: int = 200) -> np.ndarray:
    return np.geomspace(r_inner, r_max, samples)


def certify_weakly_conical(end, grid) -> CertificationReport:
    """Sample both weakly conical conditions, refine 2×, apply the ½ caps at R_inner"""
    model: EndModel = getattr(end, "model", end)
    grid = np.sort(np.asarray(grid, dtype=float))
    if grid.size < MIN_SAMPLES:
        raise DomainError(f"Certification needs at least {MIN_SAMPLES} samples", samples=int(grid.size))
    if grid[0] <= 0:
        raise DomainError("Certification grid must be positive", r=float(grid[0]))

    if model.is_exact_cone:
        return CertificationReport(0.0, 0.0, 0.0, 0.0, float(grid[0]), float(grid[-1]), int(grid.size), True)

    midpoints = 0.5 * (grid[1:] + grid[:-1])
    refined = np.sort(np.concatenate([grid, midpoints]))
    radial, hessian = _scaled_gaps(model, refined)
    coarse_sup = max(float(np.max(radial[::2])), float(np.max(hessian[::2])))

    radial_sup = float(np.max(radial))
    hessian_sup = float(np.max(hessian))
    raw_sup = max(radial_sup, hessian_sup)
    lam = SAFETY_FACTOR * raw_sup
    if raw_sup > 0 and coarse_sup < raw_sup * (1 - 1e-3):
        logger.debug(f"Refinement raised the sampled sup from {coarse_sup:.6g} to {raw_sup:.6g}")

    r_inner = float(grid[0])
    violation = None
    if lam / r_inner**4 > CAP:
        violation = {"radius": r_inner, "quantity": "gradient", "value": lam / r_inner**4}
    elif lam / r_inner**2 > CAP:
        violation = {"radius": r_inner, "quantity": "hessian", "value": lam / r_inner**2}

    report = CertificationReport(
        radial_sup=radial_sup,
        hessian_sup=hessian_sup,
        raw_sup=raw_sup,
        lam=lam,
        r_inner=r_inner,
        r_max=float(grid[-1]),
        samples=int(grid.size),
        passed=violation is None,
        violation=violation,
    )
    logger.debug(f"{model.name}: Λ={lam:.6g} (radial {radial_sup:.3g}, hessian {hessian_sup:.3g}) passed={report.passed}")
    return report


def _scaled_gaps(model: EndModel, radii: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    radial = np.empty_like(radii)
    hessian = np.empty_like(radii)
    for i, r in enumerate(radii):
        gradient_gap, hessian_gap = model.certification_gaps(float(r))
        radial[i] = r**4 * gradient_gap
        hessian[i] = r**2 * hessian_gap
    if not (np.all(np.isfinite(radial)) and np.all(np.isfinite(hessian))):
        bad = float(radii[~(np.isfinite(radial) & np.isfinite(hessian))][0])
        raise NumericalFailure("Certification quantity is not finite (missing second derivatives?)", radius=bad)
    return radial, hessian

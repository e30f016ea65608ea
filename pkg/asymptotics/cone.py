"""Rescaled link metrics g_L(τ) and the asymptotic cone"""

import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from errors import DomainError
from geometry.ends import WeaklyConicalEnd
from solvers.fitting import richardson_limit

logger = logging.getLogger(__name__)

CONVERGENCE_CSV_HEADER = ["tau_or_R", "scale_or_L2gap", "bound"]
TAU_SAMPLES = 16
SHAPE_TOLERANCE = 0.1
"""measured ln-distortion may fall no slower than τ^{-2+0.1}"""
MIN_FIT_QUALITY = 0.99
SCOPE_NOTE = "rotationally symmetric model: g_L(τ) is a scalar multiple of the reference link metric"


@dataclass(frozen=True)
class LinkMetricRow:
    tau: float
    scale: float
    """h(τR_L)/(τR_L)²"""
    distortion: float
    """|ln scale|"""
    bound: float
    """λ_cert/(2τ²)"""


@dataclass(frozen=True)
class AsymptoticCone:
    """g_L(τ) = scale(τ)·g_ref with e^{∓λ_dist/(2τ²)} brackets"""

    n: int
    link_radius: float
    link_scale: float
    """scale of the limit metric g_L against the reference link"""
    fitted_limit: float
    """Richardson extrapolation of the sampled scales"""
    reference_radius: float
    """R_L, the radius of the reference link sphere"""
    lam_dist: float
    """smallest λ with |ln scale(τ)| ≤ λ/(2τ²) on the grid"""
    lam_cert: float
    """Λ(1 + 6R_L^{-2})/(ψ_min²R_L²)"""
    decay_exponent: float | None
    """log-log slope of the distortion in τ; None when the distortion vanishes"""
    fit_quality: float | None
    """R² of that log-log fit"""
    rows: tuple[LinkMetricRow, ...]
    scope_note: str = SCOPE_NOTE

    @property
    def shape_ok(self) -> bool:
        if self.decay_exponent is None:
            return True
        return self.decay_exponent <= -2.0 + SHAPE_TOLERANCE and self.fit_quality >= MIN_FIT_QUALITY

    @property
    def certified(self) -> bool:
        return self.lam_dist <= self.lam_cert * (1 + 1e-9) + 1e-15

    @property
    def passed(self) -> bool:
        return self.shape_ok and self.certified

    def export_csv(self, path: str | Path) -> Path:
        """Columns tau_or_R, scale_or_L2gap, bound with bound = e^{λ_cert/(2τ²)}"""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f)
            writer.writerow(CONVERGENCE_CSV_HEADER)
            for row in self.rows:
                writer.writerow([repr(row.tau), repr(row.scale), repr(math.exp(row.bound))])
        return path


def link_scale(end: WeaklyConicalEnd, r: float) -> float:
    """h(r)/r², the pulled back and rescaled metric of S_r against g_ref"""
    return end.h(r) / (r * r)


def _psi_min(end: WeaklyConicalEnd, r_lo: float, r_hi: float) -> float:
    return min(end.psi(float(r)) for r in np.geomspace(r_lo, r_hi, end.certification.samples))


def _loglog_fit(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """slope and R² of ln y against ln x"""
    lx, ly = np.log(x), np.log(y)
    slope, intercept = np.polyfit(lx, ly, 1)
    spread = float(np.sum((ly - ly.mean()) ** 2))
    if spread == 0.0:
        return float(slope), 1.0
    residual = float(np.sum((ly - (slope * lx + intercept)) ** 2))
    return float(slope), 1.0 - residual / spread


def link_metric(end: WeaklyConicalEnd, taus: Sequence[float] | None = None, reference_radius: float | None = None) -> AsymptoticCone:
    """Sample g_L(τ) on a τ grid and fit the distortion constant

    The reference link is S_{R_L} with R_L = R_inner + 1 unless given. The
    default grid runs from τ = 1 to the end of the certified range.
    """
    r_ref = end.r_inner + 1.0 if reference_radius is None else reference_radius
    end.check_radius(r_ref)
    r_top = end.certification.r_max
    if not r_top > r_ref:
        raise DomainError("Certified range ends below the reference link", reference_radius=r_ref, r_max=r_top)
    taus = np.geomspace(1.0, r_top / r_ref, TAU_SAMPLES) if taus is None else np.asarray(taus, dtype=float)
    if np.any(taus < 1.0):
        raise DomainError("Link metrics need τ ≥ 1", tau=float(np.min(taus)))

    psi_min = _psi_min(end, r_ref, r_top)
    lam_cert = end.lam * (1 + 6.0 / r_ref**2) / (psi_min**2 * r_ref**2)

    scales = np.array([link_scale(end, float(t) * r_ref) for t in taus])
    distortion = np.abs(np.log(scales))
    lam_dist = float(np.max(2.0 * taus**2 * distortion))
    rows = tuple(
        LinkMetricRow(tau=float(t), scale=float(s), distortion=float(d), bound=lam_cert / (2.0 * t * t))
        for t, s, d in zip(taus, scales, distortion)
    )

    keep = distortion > 1e-15
    exponent = quality = None
    if np.count_nonzero(keep) >= 2:
        exponent, quality = _loglog_fit(taus[keep], distortion[keep])
    fitted = richardson_limit(taus * r_ref, scales)[0] if taus.size >= 3 else float(scales[-1])

    cone = AsymptoticCone(
        n=end.n,
        link_radius=end.link.radius,
        link_scale=1.0,
        fitted_limit=fitted,
        reference_radius=r_ref,
        lam_dist=lam_dist,
        lam_cert=lam_cert,
        decay_exponent=exponent,
        fit_quality=quality,
        rows=rows,
    )
    status = "✅" if cone.passed else "❌"
    logger.info(f"{status} Asymptotic cone of {end.model.name}: λ_dist={lam_dist:.4g}, λ_cert={lam_cert:.4g}, slope {exponent}")
    return cone

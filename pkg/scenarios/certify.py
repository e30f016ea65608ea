"""certify: weakly conical hypotheses, sphere data and the Gaussian parts identity"""

import logging
import math

import numpy as np

from config.experiment import ExperimentConfig
from geometry import sphere_data
from quadrature import check_parts_identity, tail_ratio

from .base import BaseScenario
from .common import config_end, quadrature_spec
from .models import Check, Finding

logger = logging.getLogger(__name__)

CLOSED_FORM_TOLERANCE = 0.05
PARTS_TOLERANCE = 1e-8
PARTS_M = tuple(range(-3, 6))
PARTS_RHO = (1.0, 2.0, 5.0, 10.0, 20.0)
SPHERE_SAMPLES = 9
GAP_FACTORS = {"gap_dr_n": 2.0, "gap_dr_x": 6.0, "gap_n_x": 4.0}
"""|∂_r − N| ≤ 2Λr⁻⁴, |∂_r − r⁻¹X| ≤ 6Λr⁻⁴, |N − r⁻¹X| ≤ 4Λr⁻⁴"""


def closed_form_lambda(config: ExperimentConfig) -> float | None:
    """2√(n−1)δ for h = r² + δ; None for the other models"""
    end = config.end
    if end.model != "perturbed_cone" or end.warp != "additive" or end.delta == 0:
        return None
    return 2.0 * math.sqrt(end.n - 1) * abs(end.delta)


class CertifyScenario(BaseScenario):
    @property
    def scenario_id(self) -> str:
        return "certify"

    @property
    def anchors(self) -> tuple[str, ...]:
        return ("weakly-conical-end", "self-similar-ends-weakly-conical", "sphere-mean-curvature", "gaussian-parts-identity")

    def checks(self, config: ExperimentConfig) -> list[Check]:
        anchor = "self-similar-ends-weakly-conical" if config.end.model == "selfsimilar_end" else "weakly-conical-end"
        return [
            Check("weakly-conical", anchor, lambda: self._certification(config)),
            Check("sphere-data", "sphere-mean-curvature", lambda: self._spheres(config)),
            Check("parts-identity", "gaussian-parts-identity", lambda: self._parts(config)),
        ]

    def _certification(self, config: ExperimentConfig) -> Finding:
        end = config_end(config)
        report = end.certification
        constants = {"Lambda": report.lam, "radial_sup": report.radial_sup, "hessian_sup": report.hessian_sup}
        passed = report.passed
        if end.is_exact_cone:
            passed = passed and report.lam == 0.0
        closed = closed_form_lambda(config)
        if closed is not None:
            ratio = report.lam / closed
            constants["Lambda_closed_form"] = closed
            passed = passed and abs(ratio - 1.0) <= CLOSED_FORM_TOLERANCE + 1e-12
            logger.info(f"Λ = {report.lam:.6g} vs closed form {closed:.6g} (ratio {ratio:.4f})")
        details = {"model": end.model.name, "n": end.n, "r_inner": end.r_inner, "r_max": report.r_max, "samples": report.samples}
        return Finding(passed=passed, constants=constants, details=details)

    def _spheres(self, config: ExperimentConfig) -> Finding:
        end = config_end(config)
        lam = end.lam
        radii = np.geomspace(end.r_inner, end.certification.r_max, SPHERE_SAMPLES)
        n = end.n
        worst_h, passed = 0.0, True
        for rho in radii:
            data = sphere_data(end, float(rho))
            worst_h = max(worst_h, rho**3 * abs(data.mean_curvature - (n - 1) / rho))
            for name, factor in GAP_FACTORS.items():
                if getattr(data, name) > factor * lam / rho**4 + 1e-15:
                    logger.warning(f"{name} = {getattr(data, name):.3g} exceeds {factor:g}Λρ⁻⁴ at ρ = {rho:.4g}")
                    passed = False
        if end.is_exact_cone and worst_h > 1e-12:
            passed = False
        passed = passed and math.isfinite(worst_h)
        return Finding(
            passed=passed,
            constants={"mean_curvature_constant": worst_h},
            details={"radii": [float(r) for r in radii], "link_volume": end.link.volume},
        )

    def _parts(self, config: ExperimentConfig) -> Finding:
        q = quadrature_spec(config)
        ms = sorted(set(PARTS_M) | set(config.parameters.m_values))
        worst, o_constant = 0.0, 0.0
        for m in ms:
            for rho in PARTS_RHO:
                check = check_parts_identity(m, rho, q)
                worst = max(worst, check.relative_residual)
                if rho >= 10:
                    o_constant = max(o_constant, abs(check.o_constant))
        tails = [abs(tail_ratio(m, rho, q) - 1.0) * rho**2 for m in ms for rho in PARTS_RHO if rho >= 10]
        return Finding(
            passed=worst < PARTS_TOLERANCE,
            constants={"parts_residual": worst, "parts_o_constant": o_constant, "tail_ratio_constant": max(tails)},
        )

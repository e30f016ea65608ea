"""frequency-decay: ρ²N̂_m → 2μ_link, the vanishing of N and N̂_m, and triviality"""

import logging
import math

from config.experiment import ExperimentConfig
from frequency import extract_xi, frequency_grid, frequency_trace, nhat_bound_radius, vanishing_radius
from operators import separated
from solvers import ExpressionProfile

from .base import BaseScenario
from .common import case_label, config_end, quadrature_spec, slow_mode
from .models import Check, Finding

logger = logging.getLogger(__name__)

XI_TOLERANCE = 0.01
XI_TOLERANCE_WARPED = 0.02
ZERO_XI_TOLERANCE = 1e-3
RHO_MINUS_ONE_LIMIT = 20.0
TRIVIAL_GRID_POINTS = 4


class FrequencyDecayScenario(BaseScenario):
    @property
    def scenario_id(self) -> str:
        return "frequency-decay"

    @property
    def anchors(self) -> tuple[str, ...]:
        return ("frequency-limit", "frequency-vanishing", "triviality")

    def checks(self, config: ExperimentConfig) -> list[Check]:
        checks = []
        for n in config.case_dimensions():
            for degree in config.parameters.degrees:
                for m in config.parameters.m_values:
                    name = f"frequency[{case_label(n=n, l=degree, m=m)}]"
                    checks.append(Check(name, "frequency-limit", lambda n=n, degree=degree, m=m: self._decay(config, n, degree, m)))
            checks.append(Check(f"triviality[{case_label(n=n)}]", "triviality", lambda n=n: self._triviality(config, n)))
        return checks

    def _grid(self, config: ExperimentConfig):
        params = config.parameters
        return frequency_grid(params.rho_min, params.rho_max, params.rho_ratio)

    def _decay(self, config: ExperimentConfig, n: int, degree: int, m: float) -> list[Finding]:
        params = config.parameters
        end = config_end(config, n)
        u = slow_mode(end, degree, m, params.lam, params.rho_min, config)
        trace = frequency_trace(u, m, self._grid(config), q=quadrature_spec(config))
        estimate = extract_xi(trace)
        rho_minus_1 = nhat_bound_radius(trace, estimate.xi_hat)

        constants = {"xi_hat": estimate.xi_hat, "rho_minus_1": rho_minus_1, "correction_exponent": estimate.correction_exponent}
        passed = rho_minus_1 is not None and rho_minus_1 <= RHO_MINUS_ONE_LIMIT
        target = 2.0 * u.mu_link if params.lam == 0 else None
        if target is not None:
            constants["xi_target"] = target
            if target > 0:
                tolerance = XI_TOLERANCE if end.is_exact_cone else XI_TOLERANCE_WARPED
                passed = passed and abs(estimate.xi_hat - target) <= tolerance * target
            else:
                passed = passed and abs(estimate.xi_hat) < ZERO_XI_TOLERANCE
        logger.info(f"ξ̂ = {estimate.xi_hat:.6f} for {u.label} (target {target}), ρ₋₁ = {rho_minus_1}")
        limit = Finding(
            passed=passed,
            constants=constants,
            details={"window": list(estimate.window), "fit_residual": estimate.residual, "lam": params.lam},
            tables={"trace": trace},
            suffix="limit",
        )
        if params.lam != 0:
            return [limit]

        tol = params.vanishing_tol
        radius_limit = params.vanishing_radius
        if target / radius_limit**2 >= tol:
            radius_limit = math.sqrt(2.0 * target / tol)
        vanishing = vanishing_radius(trace, tol)
        return [
            limit,
            Finding(
                passed=vanishing is not None and vanishing <= radius_limit,
                constants={"vanishing_radius": vanishing},
                details={"tolerance": tol, "radius_limit": radius_limit},
                anchor="frequency-vanishing",
                suffix="vanishing",
            ),
        ]

    def _triviality(self, config: ExperimentConfig, n: int) -> Finding:
        """u ≡ 0 给出平凡结论且 ξ̂ = 0；本征模式的 B 处处为正"""
        params = config.parameters
        end = config_end(config, n)
        grid = self._grid(config)[:TRIVIAL_GRID_POINTS]
        q = quadrature_spec(config)

        zero = separated(end, ExpressionProfile.constant(0.0), label="zero")
        zero_trace = frequency_trace(zero, 0.0, grid, q=q)
        zero_xi = extract_xi(zero_trace).xi_hat
        mode = slow_mode(end, params.degrees[0], 0.0, params.lam, params.rho_min, config)
        mode_trace = frequency_trace(mode, 0.0, grid, q=q)
        min_b = min(row.b for row in mode_trace.rows)
        return Finding(
            passed=zero_trace.trivial and zero_xi == 0.0 and not mode_trace.trivial and min_b > 0,
            constants={"zero_xi_hat": zero_xi},
            details={"zero_trivial_from": zero_trace.trivial_from, "mode": mode.label, "mode_trivial": mode_trace.trivial},
        )

"""shrinker-rigidity: the radial basis of (L_0 + ½) and the graph difference of two shrinker ends

The basis checks run on the exact cone, the linearisation of a shrinker
end at infinity.
"""

import logging

import numpy as np

from config.experiment import ExperimentConfig
from errors import DomainError
from frequency import check_integrable
from geometry import EndDescription, build_end, exact_cone
from operators import DriftOperator, separated
from solvers import (
    SeedBranch,
    abel_variation,
    asymptotic_seed,
    decaying_mode_rate,
    decompose_basis,
    graph_difference,
    integrate_branch,
    integrate_profile,
    radial_coefficients,
    solve_selfsimilar_profile,
)

from .base import BaseScenario
from .common import case_label
from .models import Check, Finding

logger = logging.getLogger(__name__)

SHRINKER_LAM = 0.5
SLOW_SEED = 30.0
GAUSSIAN_SEED = 11.0
BASIS_SPAN = (5.0, 20.0)
GENERAL_STATE = (5.0, 1.3, -0.7)
"""(r₀, f, f′) of a solution mixing both branches"""
DECOMPOSITION_WINDOW = (10.0, 20.0)
ABEL_TOLERANCE = 1e-9
DECOMPOSITION_TOLERANCE = 1e-6
SOLVER_RTOL = 1e-12
SLOPE_OFFSET = 1.1
"""the second shrinker of the graph-difference check has slope × 1.1"""


class ShrinkerRigidityScenario(BaseScenario):
    @property
    def scenario_id(self) -> str:
        return "shrinker-rigidity"

    @property
    def anchors(self) -> tuple[str, ...]:
        return ("shrinker-uniqueness", "graph-difference")

    def checks(self, config: ExperimentConfig) -> list[Check]:
        checks = []
        for n in config.case_dimensions():
            label = case_label(n=n)
            checks.append(Check(f"shrinker-basis[{label}]", "shrinker-uniqueness", lambda n=n: self._basis(config, n)))
            checks.append(Check(f"shrinker-graph-difference[{label}]", "graph-difference", lambda n=n: self._graph_difference(config, n)))
        return checks

    def _basis(self, config: ExperimentConfig, n: int) -> list[Finding]:
        window = tuple(config.parameters.fit_window)
        cone = exact_cone(n)
        ode = radial_coefficients(cone, 0.0, SHRINKER_LAM, 0.0, "minus")
        lo, hi = BASIS_SPAN
        slow = integrate_profile(ode, asymptotic_seed(ode, SeedBranch.SLOW, SLOW_SEED), lo, rtol=SOLVER_RTOL)
        gaussian = integrate_branch(ode, asymptotic_seed(ode, SeedBranch.GAUSSIAN, GAUSSIAN_SEED), lo, hi, rtol=SOLVER_RTOL)

        abel = abel_variation(ode, slow, gaussian, np.linspace(*window, 50))
        general = integrate_profile(ode, GENERAL_STATE, hi, rtol=SOLVER_RTOL)
        decomposition = decompose_basis(general, slow, gaussian, window=DECOMPOSITION_WINDOW)

        gaussian_fit = decaying_mode_rate(gaussian, (-(n + 1.0), 0.25), window)
        slow_fit = decaying_mode_rate(slow, (1.0, 0.0), window)

        op = DriftOperator.minus(0.0)
        rho = window[0]
        integrable = {}
        for name, profile in (("slow", slow), ("gaussian", gaussian)):
            try:
                check_integrable(separated(cone, profile, label=f"{name}-branch"), op, rho)
                integrable[name] = True
            except DomainError:
                integrable[name] = False
        logger.info(f"n={n}: Abel {abel:.2e}, decomposition {decomposition.residual:.2e}, integrable {integrable}")

        return [
            Finding(
                passed=abel < ABEL_TOLERANCE and decomposition.residual <= DECOMPOSITION_TOLERANCE,
                constants={"abel_variation": abel, "decomposition_residual": decomposition.residual},
                details={"slow_coefficient": decomposition.slow_coefficient, "gaussian_coefficient": decomposition.gaussian_coefficient},
                suffix="basis",
            ),
            Finding(
                passed=bool(gaussian_fit.passed and slow_fit.passed),
                constants={
                    "alpha_hat": gaussian_fit.alpha_hat,
                    "beta_hat": gaussian_fit.beta_hat,
                    "slow_alpha_hat": slow_fit.alpha_hat,
                    "slow_beta_hat": slow_fit.beta_hat,
                },
                details={"window": list(window), "expected": [-(n + 1.0), 0.25]},
                suffix="rates",
            ),
            Finding(
                passed=integrable == {"slow": True, "gaussian": False},
                constants={},
                details={"integrable": integrable, "radius": rho},
                suffix="integrability",
            ),
        ]

    def _graph_difference(self, config: ExperimentConfig, n: int) -> list[Finding]:
        """同一自缩子 κ = 0；斜率不同则 κ 无界"""
        slope = config.end.slope
        region = tuple(config.parameters.certify_region)
        first = solve_selfsimilar_profile("shrinker", n, slope=slope)
        end = build_end(EndDescription(model="selfsimilar_end", n=n, r_inner=config.end.r_inner, profile=first))
        _, same = graph_difference(first, first, end, region, config.parameters.certify_samples)
        second = solve_selfsimilar_profile("shrinker", n, slope=slope * SLOPE_OFFSET)
        _, different = graph_difference(first, second, end, region, config.parameters.certify_samples)
        return [
            Finding(
                passed=same.passed and same.kappa == 0.0,
                constants={"kappa": same.kappa, "M": same.almost_eigen.M},
                suffix="same-shrinker",
            ),
            Finding(
                passed=not different.kappa_bounded,
                constants={"kappa": different.kappa, "kappa_growth": different.kappa_growth},
                details={"slopes": [slope, slope * SLOPE_OFFSET]},
                suffix="different-slopes",
            ),
        ]

"""expander-uniqueness: decay rate of the linearised mode and the scaled distance of same-cone expanders"""

import logging

import numpy as np

from config.experiment import ExperimentConfig
from geometry import EndDescription, build_end, exact_cone
from solvers import (
    SeedBranch,
    SelfSimilarPair,
    asymptotic_seed,
    decaying_mode_rate,
    graph_difference,
    integrate_profile,
    radial_coefficients,
    scaled_distance,
    solve_selfsimilar_pair,
)

from .base import BaseScenario
from .common import case_label
from .models import Check, Finding

logger = logging.getLogger(__name__)

EXPANDER_LAM = -0.5
MODE_INNER = 6.0
MODE_RTOL = 1e-12
DISTANCE_SAMPLES = 25
DISTANCE_VARIATION = 0.05
AMPLITUDE_TOLERANCE = 1e-3
END_MARGIN = 2.0
"""graph end starts this far inside the fit window"""


class ExpanderUniquenessScenario(BaseScenario):
    @property
    def scenario_id(self) -> str:
        return "expander-uniqueness"

    @property
    def anchors(self) -> tuple[str, ...]:
        return ("expander-uniqueness", "graph-difference")

    def checks(self, config: ExperimentConfig) -> list[Check]:
        checks = []
        for n in config.case_dimensions():
            label = case_label(n=n)
            checks.append(Check(f"expander-mode-rate[{label}]", "expander-uniqueness", lambda n=n: self._mode_rate(config, n)))
            checks.append(Check(f"expander-distance[{label}]", "expander-uniqueness", lambda n=n: self._distance(config, n, config.parameters.amplitude)))
            checks.append(Check(f"expander-threshold[{label}]", "expander-uniqueness", lambda n=n: self._distance(config, n, 0.0)))
        return checks

    def _mode_rate(self, config: ExperimentConfig, n: int) -> Finding:
        params = config.parameters
        ode = radial_coefficients(exact_cone(n), 0.0, EXPANDER_LAM, 0.0, "plus")
        mode = integrate_profile(ode, asymptotic_seed(ode, SeedBranch.GAUSSIAN, params.seed_radius), MODE_INNER, rtol=MODE_RTOL)
        fit = decaying_mode_rate(mode, (-(n + 1.0), -0.25), tuple(params.fit_window))
        return Finding(
            passed=bool(fit.passed),
            constants={"alpha_hat": fit.alpha_hat, "beta_hat": fit.beta_hat},
            details={"expected": [-(n + 1.0), -0.25], "window": list(fit.window), "fit_residual": fit.residual},
        )

    def _pair(self, config: ExperimentConfig, n: int, amplitude: float) -> SelfSimilarPair:
        params = config.parameters
        return solve_selfsimilar_pair("expander", n, slope=params.pair_slope, amplitude=amplitude, seed_radius=params.seed_radius)

    def _distance(self, config: ExperimentConfig, n: int, amplitude: float) -> list[Finding]:
        """A ≠ 0 时标度距离趋于非零常数 A；A = 0 时恒为零"""
        params = config.parameters
        pair = self._pair(config, n, amplitude)
        window = tuple(params.fit_window)
        end = build_end(EndDescription(model="selfsimilar_end", n=n, r_inner=window[0] - END_MARGIN, profile=pair.base))
        u, certificate = graph_difference(pair.base, pair, end, region=window, samples=params.certify_samples)
        distance = scaled_distance(u, np.linspace(*params.distance_window, DISTANCE_SAMPLES), pair.correction)

        if amplitude == 0.0:
            passed = distance.identically_zero and certificate.kappa == 0.0
            limit = 0.0
        else:
            limit = float(np.mean(distance.normalized))
            close = abs(distance.normalized[0] - abs(amplitude)) <= AMPLITUDE_TOLERANCE * abs(amplitude)
            passed = distance.variation < DISTANCE_VARIATION and close
        logger.info(f"n={n}, A={amplitude:g}: scaled distance → {limit:.6g} (variation {distance.variation:.2e})")
        return [
            Finding(
                passed=passed,
                constants={"scaled_distance": limit, "variation": distance.variation, "raw_variation": distance.raw_variation},
                details={"amplitude": amplitude, "radii": [distance.radii[0], distance.radii[-1]], "identically_zero": distance.identically_zero},
                suffix="distance",
            ),
            Finding(
                passed=certificate.passed,
                constants={"kappa": certificate.kappa, "M": certificate.almost_eigen.M},
                details={"kappa_growth": certificate.kappa_growth, "region": list(window)},
                anchor="graph-difference",
                suffix="certificate",
            ),
        ]

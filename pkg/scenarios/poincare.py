"""poincare: the Gaussian Poincaré inequality on seeded random functions, the Harnack bracket and K₂"""

import logging

import numpy as np

from config.experiment import ExperimentConfig
from frequency import harnack_check, poincare_check, small_drift_check
from geometry import WeaklyConicalEnd
from operators import SeparatedFunction, separated
from solvers import ExpressionProfile

from .base import BaseScenario
from .common import case_label, config_end, quadrature_spec, slow_mode
from .models import Check, Finding

logger = logging.getLogger(__name__)

MAX_TERMS = 3
COEFFICIENT_RANGE = (-1.0, 1.0)
DECAY_RANGE = (0.1, 1.0)
POWER_RANGE = (-2.0, 2.0)


def random_test_function(end: WeaklyConicalEnd, degrees: list[int], rng: np.random.Generator, label: str) -> SeparatedFunction:
    """Σ c·e^{−σr}r^p·a with 1-3 terms, c ∈ [−1, 1], σ ∈ [0.1, 1], p ∈ [−2, 2]"""
    count = int(rng.integers(1, MAX_TERMS + 1))
    terms = []
    for _ in range(count):
        c = float(rng.uniform(*COEFFICIENT_RANGE))
        sigma = float(rng.uniform(*DECAY_RANGE))
        p = float(rng.uniform(*POWER_RANGE))
        terms.append((c, sigma, p))
    degree = int(rng.choice(degrees))
    return separated(end, ExpressionProfile.exponential_combination(terms), degree, label=label)


class PoincareScenario(BaseScenario):
    @property
    def scenario_id(self) -> str:
        return "poincare"

    @property
    def anchors(self) -> tuple[str, ...]:
        return ("gaussian-poincare", "harnack-bracket", "small-drift-term")

    def checks(self, config: ExperimentConfig) -> list[Check]:
        checks = []
        index = 0
        for n in config.case_dimensions():
            for m in config.parameters.m_values:
                label = case_label(n=n, m=m)
                checks.append(Check(f"poincare[{label}]", "gaussian-poincare", lambda n=n, m=m, index=index: self._poincare(config, n, m, index)))
                index += 1
            for degree in config.parameters.degrees:
                label = case_label(n=n, l=degree)
                checks.append(Check(f"harnack[{label}]", "harnack-bracket", lambda n=n, degree=degree: self._harnack(config, n, degree)))
                for m in config.parameters.m_values:
                    label = case_label(n=n, l=degree, m=m)
                    checks.append(
                        Check(f"small-drift[{label}]", "small-drift-term", lambda n=n, degree=degree, m=m: self._small_drift(config, n, degree, m))
                    )
        return checks

    def _poincare(self, config: ExperimentConfig, n: int, m: float, index: int) -> Finding:
        params = config.parameters
        end = config_end(config, n)
        q = quadrature_spec(config)
        rng = np.random.default_rng([config.seed, index])

        violations, thresholds, worst_ratio = [], [], 0.0
        for k in range(params.random_functions):
            u = random_test_function(end, params.degrees, rng, label=f"random[{k}]")
            check = poincare_check(u, m, params.poincare_radii, q)
            for point in check.points:
                if point.rhs > 0:
                    worst_ratio = max(worst_ratio, point.lhs / point.rhs)
                if not point.holds:
                    violations.append({"function": k, "radius": point.radius, "lhs": point.lhs, "rhs": point.rhs})
            thresholds.append(check.first_passing_radius)

        if violations:
            logger.warning(f"Poincaré fails {len(violations)} time(s) for n={n}, m={m:g}")
        passing = [r for r in thresholds if r is not None]
        r0 = max(passing) if len(passing) == len(thresholds) else None
        return Finding(
            passed=not violations,
            constants={"R0": r0, "worst_ratio": worst_ratio, "violations": len(violations)},
            details={"functions": params.random_functions, "radii": list(params.poincare_radii), "violations": violations or None},
        )

    def _harnack(self, config: ExperimentConfig, n: int, degree: int) -> Finding:
        params = config.parameters
        u = slow_mode(config_end(config, n), degree, 0.0, params.lam, params.rho_min, config)
        check = harnack_check(u, [params.harnack_radius], params.harnack_taus)
        brackets = [{"radius": p.radius, "lower": p.lower, "ratio": p.lhs, "upper": p.rhs} for p in check.points]
        return Finding(
            passed=all(p.holds for p in check.points),
            constants={"min_lower_margin": min(p.lhs - p.lower for p in check.points)},
            details={"taus": list(params.harnack_taus), "brackets": brackets},
        )

    def _small_drift(self, config: ExperimentConfig, n: int, degree: int, m: float) -> Finding:
        params = config.parameters
        u = slow_mode(config_end(config, n), degree, m, params.lam, params.rho_min, config)
        check = small_drift_check(u, m, params.poincare_radii, quadrature_spec(config))
        return Finding(
            passed=check.passed,
            constants={"K2": check.constant, "R0": check.first_passing_radius},
            details={"radii": list(params.poincare_radii)},
        )

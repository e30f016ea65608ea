"""transform-check: recertification of power and Gaussian twists, and Ψ_μ∘Φ_μ = power(μ)"""

import math

import numpy as np

from config.experiment import ExperimentConfig
from geometry import WeaklyConicalEnd
from operators import (
    DriftOperator,
    EigenContext,
    SeparatedFunction,
    TransformKind,
    certify_almost_eigen,
    compose_check,
    separated,
    transform,
)
from solvers import PowerProfile

from .base import BaseScenario
from .common import config_end
from .models import Check, Finding

COMPOSE_TOLERANCE = 1e-12
COMPOSE_SAMPLES = 30
RADIUS_CONTEXT = EigenContext(DriftOperator.minus(0.0), 0.5)
"""u = r solves (L_0 + ½)u = O(r^{-1}) on a cone"""


def radius_function(end: WeaklyConicalEnd) -> SeparatedFunction:
    return separated(end, PowerProfile(1.0), 0, RADIUS_CONTEXT, label="r")


def transform_base(end: WeaklyConicalEnd, kind: TransformKind) -> SeparatedFunction:
    """inverse_gauss_twist 需要 L⁺ 上下文：先对 r 做 gauss_twist(0)"""
    base = radius_function(end)
    if kind is TransformKind.INVERSE_GAUSS_TWIST:
        return transform(base, TransformKind.GAUSS_TWIST, 0.0)
    return base


class TransformCheckScenario(BaseScenario):
    @property
    def scenario_id(self) -> str:
        return "transform-check"

    @property
    def anchors(self) -> tuple[str, ...]:
        return ("spectral-shift",)

    def checks(self, config: ExperimentConfig) -> list[Check]:
        checks = [Check("base-certificate", "spectral-shift", lambda: self._base(config))]
        for kind in TransformKind:
            for mu in config.parameters.transform_mu:
                checks.append(Check(f"{kind.value}[mu={mu:g}]", "spectral-shift", lambda kind=kind, mu=mu: self._recertify(config, kind, mu)))
        checks.append(Check("composition", "spectral-shift", lambda: self._composition(config)))
        return checks

    def _certify(self, config: ExperimentConfig, u: SeparatedFunction):
        params = config.parameters
        context = u.require_context()
        return certify_almost_eigen(
            u.end,
            u,
            context.operator,
            context.lam,
            tuple(params.certify_region),
            context.convention,
            params.certify_samples,
            raise_on_failure=False,
        )

    def _base(self, config: ExperimentConfig) -> Finding:
        certificate = self._certify(config, radius_function(config_end(config)))
        return Finding(
            passed=certificate.passed,
            constants={"M": certificate.M, "growth_exponent": certificate.growth_exponent},
            details={"operator": certificate.operator.label, "lam": certificate.lam},
        )

    def _recertify(self, config: ExperimentConfig, kind: TransformKind, mu: float) -> Finding:
        u = transform(transform_base(config_end(config), kind), kind, mu)
        certificate = self._certify(config, u)
        return Finding(
            passed=certificate.passed and math.isfinite(certificate.M),
            constants={"M_prime": certificate.M, "growth_exponent": certificate.growth_exponent},
            details={
                "operator": certificate.operator.label,
                "lam": certificate.lam,
                "convention": certificate.convention.value,
            },
        )

    def _composition(self, config: ExperimentConfig) -> Finding:
        lo, hi = config.parameters.certify_region
        radii = np.linspace(lo, hi, COMPOSE_SAMPLES)
        base = radius_function(config_end(config))
        worst, passed, mismatched = 0.0, True, []
        for mu in config.parameters.transform_mu:
            check = compose_check(base, mu, radii)
            worst = max(worst, check.max_relative_difference)
            if not (check.operator_match and check.eigenvalue_difference < 1e-15):
                mismatched.append(mu)
            passed = passed and check.max_relative_difference < COMPOSE_TOLERANCE
        return Finding(
            passed=passed and not mismatched,
            constants={"max_relative_difference": worst},
            details={"context_mismatch": mismatched or None, "mu": list(config.parameters.transform_mu)},
        )

"""trace: asymptotic cone, traces at infinity, the homogeneity bound and the tail estimates

All checks use the slow-branch mode of degree 2λ. The far-field grids run
to several hundred, so the end must extend to infinity (cone models).
"""

import logging
import math

from asymptotics import flow_X, link_metric, trace_at_infinity, verify_homogeneity_bound
from config.experiment import ExperimentConfig
from frequency import boundary_trace, tail_estimate
from operators import SeparatedFunction, separated
from solvers import ExpressionProfile, PowerProfile

from .base import BaseScenario
from .common import case_label, config_end, quadrature_spec, slow_mode
from .models import Check, Finding

logger = logging.getLogger(__name__)

ALPHA_AGREEMENT = 0.01
TAIL_STABILITY = 0.2
MIN_TAUS = 3


def _variation(values) -> float:
    finite = [v for v in values if math.isfinite(v)]
    if len(finite) < len(values):
        return math.inf
    if max(finite) == 0.0:
        return 0.0
    return max(finite) / min(finite) - 1.0 if min(finite) > 0 else math.inf


class TraceScenario(BaseScenario):
    @property
    def scenario_id(self) -> str:
        return "trace"

    @property
    def anchors(self) -> tuple[str, ...]:
        return ("asymptotic-cone", "trace-at-infinity", "homogeneity-bound", "tail-estimate-degree-0", "tail-estimate-degree-2lambda")

    def checks(self, config: ExperimentConfig) -> list[Check]:
        tail_anchor = "tail-estimate-degree-0" if config.parameters.lam == 0 else "tail-estimate-degree-2lambda"
        checks = []
        for n in config.case_dimensions():
            checks.append(Check(f"asymptotic-cone[{case_label(n=n)}]", "asymptotic-cone", lambda n=n: self._cone(config, n)))
            for degree in config.parameters.degrees:
                label = case_label(n=n, l=degree)
                checks.append(Check(f"trace-at-infinity[{label}]", "trace-at-infinity", lambda n=n, degree=degree: self._trace(config, n, degree)))
                checks.append(Check(f"homogeneity[{label}]", "homogeneity-bound", lambda n=n, degree=degree: self._homogeneity(config, n, degree)))
                checks.append(Check(f"tail-estimate[{label}]", tail_anchor, lambda n=n, degree=degree: self._tail(config, n, degree)))
        return checks

    def _mode(self, config: ExperimentConfig, n: int, degree: int) -> SeparatedFunction:
        params = config.parameters
        return slow_mode(config_end(config, n), degree, 0.0, params.lam, params.rho_min, config)

    def _cone(self, config: ExperimentConfig, n: int) -> Finding:
        end = config_end(config, n)
        r_ref = end.r_inner + 1.0
        r_top = end.certification.r_max
        taus = [t for t in config.parameters.tau_grid if t * r_ref <= r_top]
        cone = link_metric(end, taus if len(taus) >= MIN_TAUS else None, r_ref)

        flows = [flow_X(end, r_ref, t) for t in taus]
        flow_error = max((f.relative_error for f in flows), default=0.0)
        return Finding(
            passed=cone.passed,
            constants={
                "lam_dist": cone.lam_dist,
                "lam_cert": cone.lam_cert,
                "decay_exponent": cone.decay_exponent,
                "fit_quality": cone.fit_quality,
                "fitted_limit": cone.fitted_limit,
                "flow_error": flow_error,
            },
            details={"reference_radius": r_ref, "taus": [row.tau for row in cone.rows], "scope": cone.scope_note},
            tables={"link_metric": cone},
        )

    def _trace(self, config: ExperimentConfig, n: int, degree: int) -> Finding:
        lam = config.parameters.lam
        u = self._mode(config, n, degree)
        trace = trace_at_infinity(u, 2.0 * lam, q=quadrature_spec(config))
        surface = boundary_trace(u, lam)
        agreement = abs(trace.alpha_sq / surface.alpha_sq - 1.0) if surface.alpha_sq > 0 else math.inf
        return Finding(
            passed=agreement < ALPHA_AGREEMENT,
            constants={
                "alpha_sq": trace.alpha_sq,
                "alpha_sq_surface": surface.alpha_sq,
                "coefficient": trace.coefficient,
                "rate": trace.rate,
            },
            details={"degree": trace.degree, "measured_degree": trace.measured_degree, "agreement": agreement},
        )

    def _homogeneity(self, config: ExperimentConfig, n: int, degree: int) -> list[Finding]:
        params = config.parameters
        d = 2.0 * params.lam
        q = quadrature_spec(config)
        end = config_end(config, n)
        bound = verify_homogeneity_bound(self._mode(config, n, degree), params.tail_radii, d, q=q)

        leading = PowerProfile(d) if d != 0 else ExpressionProfile.constant(1.0)
        exact = verify_homogeneity_bound(separated(end, leading, degree, label="homogeneous"), params.tail_radii, d, q=q)
        trivial_lhs = max(p.lhs for p in exact.points)
        return [
            Finding(
                passed=bound.passed,
                constants={"measured_constant": bound.measured_constant, "alpha_tilde_sq": bound.alpha_tilde_sq},
                details={"radii": list(params.tail_radii)},
                tables={"homogeneity": bound},
                suffix="mode",
            ),
            Finding(passed=trivial_lhs == 0.0, constants={"lhs": trivial_lhs}, suffix="homogeneous"),
        ]

    def _tail(self, config: ExperimentConfig, n: int, degree: int) -> Finding:
        params = config.parameters
        u = self._mode(config, n, degree)
        estimate = tail_estimate(u, params.lam, params.tail_radii, quadrature_spec(config))
        first, second = _variation(estimate.first_display), _variation(estimate.second_display)
        if max(first, second) >= TAIL_STABILITY:
            logger.warning(f"{estimate.constant_name} varies across R: {first:.3f} / {second:.3f}")
        return Finding(
            passed=estimate.passed and first < TAIL_STABILITY and second < TAIL_STABILITY,
            constants={estimate.constant_name: estimate.constant, "alpha_sq": estimate.trace.alpha_sq},
            details={
                "radii": list(estimate.radii),
                "first_display": list(estimate.first_display),
                "second_display": list(estimate.second_display),
                "variation": [first, second],
            },
        )

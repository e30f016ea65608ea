"""identities: B′, B̂′, F̂ = D̂ + L̂, D̂′ and N̂′ on slow-branch modes"""

from config.experiment import ExperimentConfig
from frequency import check_identities

from .base import BaseScenario
from .common import case_label, config_end, quadrature_spec, slow_mode
from .models import Check, Finding

IDENTITY_TOLERANCE = 1e-6
FLUX_TOLERANCE = 1e-8
ERROR_TERM_ALLOWANCE = 10.0
"""off exact cones the identities carry O(ρ⁻³) terms: allow 10Λρ⁻² relative"""


class IdentitiesScenario(BaseScenario):
    @property
    def scenario_id(self) -> str:
        return "identities"

    @property
    def anchors(self) -> tuple[str, ...]:
        return ("boundary-norm-derivative", "flux-energy-identity", "energy-derivative", "frequency-derivative")

    def checks(self, config: ExperimentConfig) -> list[Check]:
        checks = []
        for n in config.case_dimensions():
            for degree in config.parameters.degrees:
                for m in config.parameters.m_values:
                    name = f"identities[{case_label(n=n, l=degree, m=m)}]"
                    checks.append(Check(name, "flux-energy-identity", lambda n=n, degree=degree, m=m: self._case(config, n, degree, m)))
        return checks

    def _case(self, config: ExperimentConfig, n: int, degree: int, m: float) -> list[Finding]:
        params = config.parameters
        end = config_end(config, n)
        u = slow_mode(end, degree, m, params.lam, params.rho_min, config)
        q = quadrature_spec(config)

        worst: dict[str, tuple[float, float, str]] = {}
        for rho in params.identity_radii:
            report = check_identities(u, m, rho, h=params.fd_step, q=q)
            allowance = 0.0 if end.is_exact_cone else ERROR_TERM_ALLOWANCE * end.lam / rho**2
            for residual in report.residuals:
                previous = worst.get(residual.name)
                if previous is None or residual.relative_residual > previous[0]:
                    worst[residual.name] = (residual.relative_residual, allowance, residual.anchor)

        findings = []
        for name, (value, allowance, anchor) in worst.items():
            tolerance = (FLUX_TOLERANCE if name == "flux_energy" else IDENTITY_TOLERANCE) + allowance
            findings.append(
                Finding(
                    passed=value < tolerance,
                    constants={"relative_residual": value},
                    details={"tolerance": tolerance, "radii": list(params.identity_radii), "step": params.fd_step},
                    anchor=anchor,
                    suffix=name,
                )
            )
        return findings

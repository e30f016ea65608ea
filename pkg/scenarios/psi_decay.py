"""psi-decay: the Ψ-weighted family on the decaying mode of (L⁺_0 − ½)"""

from config.experiment import ExperimentConfig
from frequency import flux_monotonicity, psi_poincare, strong_decay, twisted_tail_estimate
from geometry import exact_cone
from operators import SeparatedFunction, separated
from solvers import SeedBranch, asymptotic_seed, integrate_profile, radial_coefficients

from .base import BaseScenario
from .common import case_label, quadrature_spec
from .models import Check, Finding

EXPANDER_LAM = -0.5
MODE_INNER = 6.0
MODE_RTOL = 1e-11


def decaying_mode(n: int, seed_radius: float) -> SeparatedFunction:
    cone = exact_cone(n)
    ode = radial_coefficients(cone, 0.0, EXPANDER_LAM, 0.0, "plus")
    profile = integrate_profile(ode, asymptotic_seed(ode, SeedBranch.GAUSSIAN, seed_radius), MODE_INNER, rtol=MODE_RTOL)
    return separated(cone, profile, label=f"decaying(n={n})")


class PsiDecayScenario(BaseScenario):
    @property
    def scenario_id(self) -> str:
        return "psi-decay"

    @property
    def anchors(self) -> tuple[str, ...]:
        return ("inverse-gaussian-poincare", "flux-monotonicity", "strong-decay", "twisted-tail-estimate")

    def checks(self, config: ExperimentConfig) -> list[Check]:
        checks = []
        for n in config.case_dimensions():
            label = case_label(n=n)
            checks.append(Check(f"psi-poincare[{label}]", "inverse-gaussian-poincare", lambda n=n: self._poincare(config, n)))
            checks.append(Check(f"flux-monotonicity[{label}]", "flux-monotonicity", lambda n=n: self._flux(config, n)))
            checks.append(Check(f"strong-decay[{label}]", "strong-decay", lambda n=n: self._strong_decay(config, n)))
            checks.append(Check(f"twisted-tail[{label}]", "twisted-tail-estimate", lambda n=n: self._twisted_tail(config, n)))
        return checks

    def _mode(self, config: ExperimentConfig, n: int) -> SeparatedFunction:
        return decaying_mode(n, config.parameters.seed_radius)

    def _poincare(self, config: ExperimentConfig, n: int) -> Finding:
        radii = config.parameters.psi_radii
        check = psi_poincare(self._mode(config, n), 0.0, [(R, 2.0 * R) for R in radii], quadrature_spec(config))
        return Finding(
            passed=all(p.holds for p in check.points),
            constants={"R0": check.first_passing_radius},
            details={"annuli": [[R, 2.0 * R] for R in radii]},
        )

    def _flux(self, config: ExperimentConfig, n: int) -> Finding:
        params = config.parameters
        pairs = [(R, R + tau) for R in params.psi_radii for tau in params.harnack_taus]
        check = flux_monotonicity(self._mode(config, n), 0.0, pairs)
        return Finding(passed=check.passed, constants={"K10": check.constant}, details={"pairs": [list(p) for p in pairs]})

    def _strong_decay(self, config: ExperimentConfig, n: int) -> Finding:
        decay = strong_decay(self._mode(config, n), EXPANDER_LAM, config.parameters.psi_radii)
        return Finding(
            passed=decay.hypothesis and decay.passed,
            constants={"decay_exponent": decay.decay_exponent},
            details={"hypothesis": decay.hypothesis, "integrable": {f"{m:g}": ok for m, ok in decay.integrable.items()}},
        )

    def _twisted_tail(self, config: ExperimentConfig, n: int) -> Finding:
        estimate = twisted_tail_estimate(self._mode(config, n), EXPANDER_LAM, config.parameters.psi_radii, quadrature_spec(config))
        return Finding(
            passed=estimate.passed,
            constants={estimate.constant_name: estimate.constant, "alpha_sq": estimate.trace.alpha_sq},
            details={"radii": list(estimate.radii)},
        )

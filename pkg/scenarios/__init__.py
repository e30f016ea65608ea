from .base import BaseScenario
from .certify import CertifyScenario
from .coverage import load_coverage, uncovered_anchors
from .expander_uniqueness import ExpanderUniquenessScenario
from .frequency_decay import FrequencyDecayScenario
from .identities import IdentitiesScenario
from .models import Check, Finding, Report, Verdict
from .poincare import PoincareScenario
from .psi_decay import PsiDecayScenario
from .registry import ScenarioRegistry
from .shrinker_rigidity import ShrinkerRigidityScenario
from .trace import TraceScenario
from .transform_check import TransformCheckScenario

ScenarioRegistry.register(CertifyScenario())
ScenarioRegistry.register(IdentitiesScenario())
ScenarioRegistry.register(PoincareScenario())
ScenarioRegistry.register(FrequencyDecayScenario())
ScenarioRegistry.register(TransformCheckScenario())
ScenarioRegistry.register(TraceScenario())
ScenarioRegistry.register(ShrinkerRigidityScenario())
ScenarioRegistry.register(ExpanderUniquenessScenario())
ScenarioRegistry.register(PsiDecayScenario())

__all__ = [
    "BaseScenario",
    "Check",
    "Finding",
    "Report",
    "ScenarioRegistry",
    "Verdict",
    "load_coverage",
    "uncovered_anchors",
]

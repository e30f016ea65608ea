from abc import ABC, abstractmethod
from typing import List

from config.experiment import ExperimentConfig

from .models import Check


class BaseScenario(ABC):
    @property
    @abstractmethod
    def scenario_id(self) -> str:
        pass

    @property
    @abstractmethod
    def anchors(self) -> tuple[str, ...]:
        """Anchors of the named results this scenario can produce verdicts for"""
        pass

    @abstractmethod
    def checks(self, config: ExperimentConfig) -> List[Check]:
        """
        Build the independent checks of one run
        Returns: List[Check] - evaluated lazily by the runner
        """
        pass

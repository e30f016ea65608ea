from typing import Dict, List

from errors import ConfigError

from .base import BaseScenario


class ScenarioRegistry:
    _scenarios: Dict[str, BaseScenario] = {}

    @classmethod
    def register(cls, scenario: BaseScenario):
        cls._scenarios[scenario.scenario_id] = scenario

    @classmethod
    def get(cls, scenario_id: str) -> BaseScenario:
        if scenario_id not in cls._scenarios:
            raise ConfigError(f"Scenario '{scenario_id}' not registered", key="scenario")
        return cls._scenarios[scenario_id]

    @classmethod
    def all(cls) -> Dict[str, BaseScenario]:
        return cls._scenarios.copy()

    @classmethod
    def list_scenario_ids(cls) -> List[str]:
        return list(cls._scenarios.keys())

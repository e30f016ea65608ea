"""Coverage manifest: every named result and the scenarios that exercise it"""

import logging
from pathlib import Path

import yaml

from errors import ConfigError

logger = logging.getLogger(__name__)

COVERAGE_PATH = Path(__file__).resolve().parent.parent / "config" / "coverage.yaml"


def load_coverage(path: str | Path = COVERAGE_PATH) -> dict[str, list[str]]:
    """anchor -> scenario ids"""
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except FileNotFoundError as e:
        raise ConfigError(f"Coverage manifest not found: {path}") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"Invalid coverage manifest {path}: {e}") from e

    if not data or not isinstance(data.get("anchors"), dict):
        raise ConfigError(f"Coverage manifest needs an 'anchors' mapping: {path}")
    coverage = {str(anchor): list(scenarios or []) for anchor, scenarios in data["anchors"].items()}
    logger.debug(f"Loaded coverage manifest with {len(coverage)} anchors")
    return coverage


def uncovered_anchors(coverage: dict[str, list[str]], anchors_by_scenario: dict[str, tuple[str, ...]]) -> list[str]:
    """Anchors with no registered scenario that declares them"""
    missing = []
    for anchor, scenarios in coverage.items():
        if not any(anchor in anchors_by_scenario.get(s, ()) for s in scenarios):
            missing.append(anchor)
    return missing

import argparse
import logging
import sys
from dataclasses import replace

from config.experiment import SCENARIOS, ExperimentConfig, load_experiment
from errors import ConelabError, exit_code_for
from logger.logging import setup_logger

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="conelab", description="Numerical checks of frequency functionals on weakly conical ends")
    parser.add_argument("scenario", choices=["list", *SCENARIOS], help="scenario to run, or 'list' to show the registered scenarios")
    parser.add_argument("--config", help="experiment config (JSON); defaults apply when omitted")
    parser.add_argument("--out", help="output directory, overrides the config file")
    parser.add_argument("--verbose", action="store_true", help="log at DEBUG level")
    return parser


def list_scenarios() -> None:
    from scenarios import ScenarioRegistry

    for scenario_id, scenario in ScenarioRegistry.all().items():
        print(f"{scenario_id}: {', '.join(scenario.anchors)}")


def load_config(scenario: str, path: str | None) -> ExperimentConfig:
    if path is None:
        config = ExperimentConfig(scenario=scenario)
        config.validate()
        return config
    config = load_experiment(path)
    if config.scenario != scenario:
        logger.warning(f"Config names scenario '{config.scenario}', running '{scenario}' as requested")
        config = replace(config, scenario=scenario)
    return config


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.verbose:
        setup_logger(level="DEBUG", force=True)
    else:
        setup_logger()

    if args.scenario == "list":
        list_scenarios()
        return 0

    try:
        config = load_config(args.scenario, args.config)
    except ConelabError as e:
        logger.error(f"❌ {e}")
        return exit_code_for(e)

    from runner import run

    try:
        report = run(config, args.out)
    except ConelabError as e:
        logger.error(f"❌ {config.scenario}: {e}")
        return exit_code_for(e)
    return report.exit_code


def cli() -> None:
    sys.exit(main())


if __name__ == "__main__":
    cli()

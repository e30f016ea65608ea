import asyncio
import logging
import time
from datetime import datetime
from pathlib import Path

import scenarios  # noqa: F401 - Register all scenarios
from config import cfg
from config.experiment import ExperimentConfig
from errors import CertificationError
from scenarios.base import BaseScenario
from scenarios.models import Check, Finding, Report, Verdict
from scenarios.registry import ScenarioRegistry
from storage.report import emit_report

logger = logging.getLogger(__name__)


def resolve_output_dir(config: ExperimentConfig, out: str | Path | None = None) -> Path:
    """--out 优先，其次配置文件中的 output_dir，最后是 cfg.output_dir/<scenario>"""
    if out is not None:
        return Path(out)
    if config.output_dir:
        return Path(config.output_dir)
    return cfg.output_dir / config.scenario


def _verdicts(scenario: BaseScenario, check: Check, outcome: Finding | list[Finding]) -> list[Verdict]:
    findings = outcome if isinstance(outcome, list) else [outcome]
    verdicts = []
    for finding in findings:
        name = check.name if finding.suffix is None else f"{check.name}/{finding.suffix}"
        anchor = finding.anchor or check.anchor
        if anchor not in scenario.anchors:
            logger.error(f"❌ {name}: anchor '{anchor}' is not declared by {scenario.scenario_id}")
            verdicts.append(Verdict(name, anchor, "error", error=f"undeclared anchor '{anchor}'"))
            continue
        verdicts.append(
            Verdict(
                name=name,
                anchor=anchor,
                status="pass" if finding.passed else "fail",
                constants=finding.constants,
                details=finding.details,
                tables=finding.tables,
            )
        )
    return verdicts


async def run_check(scenario: BaseScenario, check: Check, timings: dict[str, float]) -> list[Verdict]:
    """Run one check in a worker thread; exceptions become verdicts"""
    started = time.perf_counter()
    try:
        outcome = await asyncio.wait_for(asyncio.to_thread(check.run), timeout=cfg.check_timeout_seconds)
        verdicts = _verdicts(scenario, check, outcome)
    except asyncio.TimeoutError:
        logger.error(f"❌ {check.name}: Timeout ({cfg.check_timeout_seconds}s)")
        verdicts = [Verdict(check.name, check.anchor, "error", error=f"timeout after {cfg.check_timeout_seconds}s")]
    except CertificationError as e:
        logger.error(f"❌ {check.name}: {e}")
        verdicts = [Verdict(check.name, check.anchor, "fail", error=str(e))]
    except Exception as e:
        logger.error(f"❌ {check.name}: {type(e).__name__}: {e}")
        verdicts = [Verdict(check.name, check.anchor, "error", error=f"{type(e).__name__}: {e}")]
    timings[check.name] = round(time.perf_counter() - started, 3)

    for verdict in verdicts:
        if verdict.status == "pass":
            logger.info(f"✅ {verdict.name} [{verdict.anchor}]")
        elif verdict.status == "fail" and verdict.error is None:
            logger.warning(f"❌ {verdict.name} [{verdict.anchor}]: {verdict.constants}")
    return verdicts


async def run_scenario(scenario: BaseScenario, config: ExperimentConfig, timings: dict[str, float]) -> list[Verdict]:
    checks = scenario.checks(config)
    logger.info(f"Running {scenario.scenario_id}: {len(checks)} check(s)")
    results = await asyncio.gather(*(run_check(scenario, check, timings) for check in checks))
    return [verdict for verdicts in results for verdict in verdicts]


def run(config: ExperimentConfig, out_dir: str | Path | None = None, emit: bool = True) -> Report:
    """Execute the configured scenario and write its report"""
    scenario = ScenarioRegistry.get(config.scenario)
    timings: dict[str, float] = {}
    started_at = datetime.now()
    started = time.perf_counter()

    verdicts = asyncio.run(run_scenario(scenario, config, timings))

    report = Report(
        scenario=config.scenario,
        config=config.to_dict(),
        verdicts=verdicts,
        runtime={
            "started_at": started_at.strftime("%Y-%m-%d %H:%M:%S"),
            "wall_seconds": round(time.perf_counter() - started, 3),
            "check_seconds": timings,
        },
    )
    passed = sum(v.passed for v in verdicts)
    logger.info(f"{scenario.scenario_id} completed: {passed}/{len(verdicts)} verdicts passed, exit code {report.exit_code}")
    if emit:
        emit_report(report, resolve_output_dir(config, out_dir), config.format)
    return report

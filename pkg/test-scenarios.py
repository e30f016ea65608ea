"""测试场景注册、覆盖清单、runner 的结论映射与命令行"""

import asyncio
import csv
import json
import tempfile
from dataclasses import replace
from pathlib import Path

from config.experiment import SCENARIOS, ExperimentConfig
from errors import CertificationError, ConfigError, DomainError
from frequency import TRACE_CSV_HEADER
from logger.logging import setup_logger
from main import main
from runner import resolve_output_dir, run, run_check
from scenarios import Check, Finding, Report, ScenarioRegistry, Verdict, load_coverage, uncovered_anchors
from storage.report import REPORT_FILENAME

setup_logger()


def read_report(out: Path) -> dict:
    with open(out / REPORT_FILENAME, encoding="utf-8") as f:
        return json.load(f)


def test_registry_and_coverage():
    """测试场景注册与覆盖清单"""
    print("测试1: 注册顺序与配置中的场景列表一致")
    assert tuple(ScenarioRegistry.list_scenario_ids()) == SCENARIOS, f"注册顺序错误: {ScenarioRegistry.list_scenario_ids()}"
    try:
        ScenarioRegistry.get("nope")
    except ConfigError as e:
        assert e.exit_code == 2, "未注册场景应为配置错误"
    else:
        raise AssertionError("应该抛出 ConfigError")
    print("  ✅ 通过\n")

    print("测试2: 覆盖清单中每个锚点都有场景")
    coverage = load_coverage()
    anchors_by_scenario = {sid: s.anchors for sid, s in ScenarioRegistry.all().items()}
    assert len(coverage) == 27, f"锚点数量错误: {len(coverage)}"
    assert uncovered_anchors(coverage, anchors_by_scenario) == [], f"未覆盖: {uncovered_anchors(coverage, anchors_by_scenario)}"
    for anchors in anchors_by_scenario.values():
        for anchor in anchors:
            assert anchor in coverage, f"{anchor} 不在覆盖清单中"
    for scenario_ids in coverage.values():
        for sid in scenario_ids:
            assert sid in anchors_by_scenario, f"清单引用了未注册的场景 {sid}"
    print("  ✅ 通过\n")

    print("测试3: 每个检查的锚点都由所属场景声明")
    for sid, scenario in ScenarioRegistry.all().items():
        checks = scenario.checks(ExperimentConfig(scenario=sid))
        assert checks, f"{sid} 没有检查"
        for check in checks:
            assert check.anchor in scenario.anchors, f"{sid}/{check.name} 的锚点 {check.anchor} 未声明"
    print("  ✅ 通过\n")

    print("测试4: 覆盖清单缺失或格式错误")
    with tempfile.TemporaryDirectory() as tmp:
        bad = Path(tmp) / "coverage.yaml"
        bad.write_text("- just\n- a list\n", encoding="utf-8")
        for path in (bad, Path(tmp) / "missing.yaml"):
            try:
                load_coverage(path)
            except ConfigError:
                pass
            else:
                raise AssertionError(f"{path.name} 应该抛出 ConfigError")
    print("  ✅ 通过\n")

    print("所有测试通过！✅")


def test_verdict_mapping():
    """测试异常到结论状态的映射与退出码"""
    scenario = ScenarioRegistry.get("certify")

    def raises(exc):
        def run():
            raise exc

        return run

    print("测试1: 域错误为 error，证书失败为 fail")
    timings = {}
    error = asyncio.run(run_check(scenario, Check("domain", "weakly-conical-end", raises(DomainError("bad radius"))), timings))
    failed = asyncio.run(run_check(scenario, Check("cert", "weakly-conical-end", raises(CertificationError("cap violated"))), timings))
    assert [v.status for v in error] == ["error"] and "DomainError" in error[0].error, f"结论错误: {error}"
    assert [v.status for v in failed] == ["fail"] and failed[0].error == "cap violated", f"结论错误: {failed}"
    assert set(timings) == {"domain", "cert"}, f"耗时记录错误: {timings}"
    print("  ✅ 通过\n")

    print("测试2: 多个结论、后缀与未声明的锚点")
    findings = [
        Finding(passed=True, constants={"x": 1.0}, suffix="a"),
        Finding(passed=False, anchor="sphere-mean-curvature", suffix="b"),
        Finding(passed=True, anchor="not-an-anchor", suffix="c"),
    ]
    verdicts = asyncio.run(run_check(scenario, Check("multi", "weakly-conical-end", lambda: findings), {}))
    assert [v.name for v in verdicts] == ["multi/a", "multi/b", "multi/c"], f"名称错误: {[v.name for v in verdicts]}"
    assert [v.status for v in verdicts] == ["pass", "fail", "error"], f"状态错误: {[v.status for v in verdicts]}"
    assert verdicts[0].anchor == "weakly-conical-end" and verdicts[1].anchor == "sphere-mean-curvature", "锚点继承错误"
    print("  ✅ 通过\n")

    print("测试3: 退出码 0 / 1 / 3")

    def report(*statuses):
        return Report("certify", {}, [Verdict(f"v{i}", "weakly-conical-end", s) for i, s in enumerate(statuses)])

    assert report("pass", "pass").exit_code == 0
    assert report("pass", "fail", "error").exit_code == 1
    assert report("pass", "error").exit_code == 3
    assert report().exit_code == 0 and report().passed
    print("  ✅ 通过\n")

    print("测试4: 输出目录优先级")
    config = ExperimentConfig(scenario="trace", output_dir="from-config")
    assert resolve_output_dir(config, "cli") == Path("cli")
    assert resolve_output_dir(config) == Path("from-config")
    assert resolve_output_dir(replace(config, output_dir=None)).name == "trace"
    print("  ✅ 通过\n")

    print("所有测试通过！✅")


def test_scenario_runs():
    """测试场景端到端运行"""
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)

        print("测试1: certify 在精确锥上 Λ = 0")
        report = run(ExperimentConfig(scenario="certify"), tmp / "certify")
        assert report.exit_code == 0, f"certify 应全部通过: {[(v.name, v.status, v.error) for v in report.verdicts]}"
        assert report.constants["weakly-conical"]["Lambda"] == 0.0, f"Λ 应为 0: {report.constants}"
        print("  ✅ 通过\n")

        print("测试2: frequency-decay 的 ξ̂ → 2μ = 4 并写出轨迹 CSV")
        config = ExperimentConfig.from_dict({"scenario": "frequency-decay"})
        out = tmp / "frequency"
        report = run(config, out)
        limit = next(v for v in report.verdicts if v.name == "frequency[n=3,l=1,m=0]/limit")
        assert limit.status == "pass", f"极限检查应通过: {limit}"
        assert abs(limit.constants["xi_hat"] - 4.0) <= 0.04, f"ξ̂ 偏离 4: {limit.constants['xi_hat']}"
        data = read_report(out)
        assert "xi_hat" in data["constants"]["frequency[n=3,l=1,m=0]/limit"], "常数台账缺少 xi_hat"
        trace_csv = out / "csv" / "frequency_n=3_l=1_m=0_limit-trace.csv"
        with open(trace_csv, encoding="utf-8") as f:
            assert next(csv.reader(f)) == TRACE_CSV_HEADER, "CSV 表头错误"
        print("  ✅ 通过\n")

        print("测试3: 同一配置两次运行结果一致（runtime 除外）")
        again = tmp / "frequency-again"
        run(config, again)
        first, second = read_report(out), read_report(again)
        first.pop("runtime"), second.pop("runtime")
        assert first == second, "两次运行的报告不一致"
        print("  ✅ 通过\n")

        print("测试4: transform-check 全部通过")
        report = run(ExperimentConfig(scenario="transform-check"), tmp / "transform")
        assert report.exit_code == 0, f"变换检查失败: {[(v.name, v.status, v.error) for v in report.verdicts if not v.passed]}"
        print("  ✅ 通过\n")

        print("测试5: 少量随机函数的 poincare 运行不产生 error")
        config = ExperimentConfig.from_dict({"scenario": "poincare", "parameters": {"random_functions": 5}})
        report = run(config, emit=False)
        assert report.verdicts and all(v.status != "error" for v in report.verdicts), f"出现错误: {[(v.name, v.error) for v in report.verdicts]}"
        assert "R0" in report.constants["poincare[n=3,m=0]"], f"缺少 R0: {report.constants}"
        print("  ✅ 通过\n")

        print("测试6: shrinker-rigidity 不同斜率的 κ 无界")
        report = run(ExperimentConfig(scenario="shrinker-rigidity"), emit=False)
        assert all(v.status != "error" for v in report.verdicts), f"出现错误: {[(v.name, v.error) for v in report.verdicts if v.status == 'error']}"
        different = next(v for v in report.verdicts if v.name == "shrinker-graph-difference[n=3]/different-slopes")
        assert different.status == "pass", f"不同斜率检查应通过: {different}"
        assert different.constants["kappa_growth"] > 0.25, f"κ 增长指数应超过 0.25: {different.constants}"
        print("  ✅ 通过\n")

        print("测试7: trace、psi-decay、expander-uniqueness 端到端运行不产生 error")
        for sid in ("trace", "psi-decay", "expander-uniqueness"):
            report = run(ExperimentConfig(scenario=sid), tmp / sid)
            assert report.verdicts, f"{sid} 没有结论"
            assert all(v.status != "error" for v in report.verdicts), f"{sid} 出现错误: {[(v.name, v.error) for v in report.verdicts if v.status == 'error']}"
            assert (tmp / sid / REPORT_FILENAME).exists(), f"{sid} 未写出 report.json"
        print("  ✅ 通过\n")

    print("所有测试通过！✅")


def test_off_cone_runs():
    """测试非精确锥末端上的恒等式与频率衰减"""
    perturbed = {"model": "perturbed_cone", "n": 3, "delta": 0.1, "r_inner": 10.0, "r_max": 80.0}

    print("测试1: 扰动锥上的恒等式在误差项容差内通过")
    report = run(ExperimentConfig.from_dict({"scenario": "identities", "end": perturbed}), emit=False)
    assert report.verdicts and all(v.status == "pass" for v in report.verdicts), f"恒等式失败: {[(v.name, v.status, v.error) for v in report.verdicts]}"
    print("  ✅ 通过\n")

    print("测试2: 扰动锥上的 frequency-decay 不产生 error")
    report = run(ExperimentConfig.from_dict({"scenario": "frequency-decay", "end": perturbed}), emit=False)
    assert report.verdicts and all(v.status != "error" for v in report.verdicts), f"出现错误: {[(v.name, v.error) for v in report.verdicts]}"
    print("  ✅ 通过\n")

    print("测试3: 自扩张子与自缩子图末端上的恒等式不产生 error")
    for kind in ("expander", "shrinker"):
        end = {"model": "selfsimilar_end", "n": 3, "selfsimilar_kind": kind, "slope": 1.0, "r_inner": 10.0}
        report = run(ExperimentConfig.from_dict({"scenario": "identities", "end": end}), emit=False)
        assert report.verdicts and all(v.status != "error" for v in report.verdicts), f"{kind}: {[(v.name, v.error) for v in report.verdicts]}"
    print("  ✅ 通过\n")

    print("所有测试通过！✅")


def test_cli():
    """测试命令行入口"""
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)

        print("测试1: list 列出场景")
        assert main(["list"]) == 0
        print("  ✅ 通过\n")

        print("测试2: 配置文件不存在时退出码为 2")
        assert main(["certify", "--config", str(tmp / "missing.json")]) == 2
        print("  ✅ 通过\n")

        print("测试3: 运行 certify 并写出 report.json")
        assert main(["certify", "--out", str(tmp / "cli")]) == 0
        assert (tmp / "cli" / REPORT_FILENAME).exists(), "report.json 未写出"
        print("  ✅ 通过\n")

        print("测试4: 命令行场景覆盖配置文件中的场景")
        path = tmp / "trace.json"
        path.write_text(json.dumps({"scenario": "trace", "format": "json"}), encoding="utf-8")
        assert main(["certify", "--config", str(path), "--out", str(tmp / "override")]) == 0
        data = read_report(tmp / "override")
        assert data["scenario"] == "certify" and data["config"]["scenario"] == "certify", f"场景未被覆盖: {data['scenario']}"
        assert not (tmp / "override" / "csv").exists(), "json 格式不应写 CSV"
        print("  ✅ 通过\n")

    print("所有测试通过！✅")


if __name__ == "__main__":
    test_registry_and_coverage()
    test_verdict_mapping()
    test_scenario_runs()
    test_off_cone_runs()
    test_cli()

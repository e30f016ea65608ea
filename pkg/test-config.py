"""测试实验配置的解析、校验与环境配置"""

import json
import os
import tempfile
from pathlib import Path

from config.config import Config
from config.experiment import SCENARIOS, ExperimentConfig, load_experiment
from errors import ConfigError
from logger.logging import setup_logger

setup_logger()


def expect_config_error(data: dict, key: str | None = None):
    try:
        ExperimentConfig.from_dict(data)
    except ConfigError as e:
        if key is not None:
            assert e.context.get("key") == key, f"错误应指向 {key}，实际 {e.context}"
        assert e.exit_code == 2, "配置错误的退出码应为 2"
        return e
    raise AssertionError(f"应该抛出 ConfigError: {data}")


def test_experiment_config():
    """测试 ExperimentConfig"""
    print("测试1: 默认值通过校验，维度默认取 end.n")
    config = ExperimentConfig(scenario="certify")
    config.validate()
    assert config.case_dimensions() == [3], f"默认维度错误: {config.case_dimensions()}"
    assert config.format == "csv-bundle" and config.seed == 7, "默认输出格式或种子错误"
    print("  ✅ 通过\n")

    print("测试2: to_dict / from_dict 无损往返")
    data = {
        "scenario": "frequency-decay",
        "end": {"model": "perturbed_cone", "n": 2, "delta": 0.1},
        "parameters": {"dimensions": [2, 3], "degrees": [1, 2], "m_values": [-2, 0, 2], "rho_max": 60},
        "tolerances": {"quad_rel_tol": 1e-11},
        "output_dir": "out/frequency",
        "seed": 11,
    }
    config = ExperimentConfig.from_dict(data)
    assert config.parameters.m_values == [-2.0, 0.0, 2.0] and isinstance(config.parameters.rho_max, float), "数值应转为 float"
    again = ExperimentConfig.from_dict(json.loads(json.dumps(config.to_dict())))
    assert again == config, "往返后配置不一致"
    print("  ✅ 通过\n")

    print("测试3: 未知字段在各层都被拒绝")
    expect_config_error({"scenario": "certify", "bogus": 1}, "config")
    expect_config_error({"scenario": "certify", "end": {"radius": 3}}, "config.end")
    expect_config_error({"scenario": "certify", "parameters": {"rho_minimum": 3}}, "config.parameters")
    print("  ✅ 通过\n")

    print("测试4: 枚举、类型与取值范围")
    expect_config_error({"scenario": "nope"}, "scenario")
    expect_config_error({"scenario": "certify", "format": "xml"}, "format")
    expect_config_error({"scenario": "certify", "end": {"model": "sphere"}}, "end.model")
    expect_config_error({"scenario": "certify", "end": {"n": "3"}}, "config.end.n")
    expect_config_error({"scenario": "certify", "end": {"n": True}}, "config.end.n")
    expect_config_error({"scenario": "certify", "parameters": {"rho_min": 20, "rho_max": 10}}, "parameters.rho_max")
    expect_config_error({"scenario": "certify", "parameters": {"fit_window": [14, 8]}}, "parameters.fit_window")
    expect_config_error({"scenario": "certify", "parameters": {"psi_radii": []}}, "parameters.psi_radii")
    expect_config_error({"scenario": "certify", "parameters": {"tau_grid": [0.5, 2]}}, "parameters.tau_grid")
    expect_config_error({"end": {}})
    print("  ✅ 通过\n")

    print("测试5: 所有场景名都可用")
    for scenario in SCENARIOS:
        ExperimentConfig.from_dict({"scenario": scenario})
    print("  ✅ 通过\n")

    print("所有测试通过！✅")


def test_load_experiment():
    """测试配置文件读取"""
    with tempfile.TemporaryDirectory() as tmp:
        print("测试1: 读取 JSON 配置")
        path = Path(tmp) / "run.json"
        path.write_text(json.dumps({"scenario": "trace", "parameters": {"lam": 0.5}}), encoding="utf-8")
        config = load_experiment(path)
        assert config.scenario == "trace" and config.parameters.lam == 0.5, f"读取结果错误: {config}"
        print("  ✅ 通过\n")

        print("测试2: 文件不存在、JSON 语法错误、根不是对象")
        broken = Path(tmp) / "broken.json"
        broken.write_text('{"scenario": "trace",\n  oops}', encoding="utf-8")
        listed = Path(tmp) / "list.json"
        listed.write_text("[1, 2]", encoding="utf-8")
        for target in (Path(tmp) / "missing.json", broken, listed):
            try:
                load_experiment(target)
            except ConfigError:
                pass
            else:
                raise AssertionError(f"{target.name} 应该抛出 ConfigError")
        try:
            load_experiment(broken)
        except ConfigError as e:
            assert e.context.get("line") == 2, f"应报告出错行号，实际 {e.context}"
        print("  ✅ 通过\n")

    print("所有测试通过！✅")


def test_ambient_config():
    """测试环境变量配置"""
    print("测试1: 从环境变量读取")
    keys = ("CONELAB_LOG_LEVEL", "CONELAB_OUTPUT_DIR", "CONELAB_CHECK_TIMEOUT")
    saved = {k: os.environ.get(k) for k in keys}
    try:
        os.environ.update({"CONELAB_LOG_LEVEL": "debug", "CONELAB_OUTPUT_DIR": "/tmp/conelab", "CONELAB_CHECK_TIMEOUT": "30"})
        config = Config.from_env()
        assert config.log_level == "DEBUG", f"日志级别应转为大写: {config.log_level}"
        assert config.output_dir == Path("/tmp/conelab") and config.check_timeout_seconds == 30, f"配置错误: {config}"
    finally:
        for k, v in saved.items():
            if v is None:
                os.environ.pop(k, None)
            else:
                os.environ[k] = v
    print("  ✅ 通过\n")

    print("所有测试通过！✅")


if __name__ == "__main__":
    test_experiment_config()
    test_load_experiment()
    test_ambient_config()

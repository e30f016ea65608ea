"""测试报告写出：omit_empty、JSON 结构、CSV 表头与原子写入"""

import csv
import json
import math
import tempfile
from pathlib import Path

import numpy as np

from errors import OutputError
from frequency import TRACE_CSV_HEADER, frequency_grid, frequency_trace
from geometry import exact_cone
from logger.logging import setup_logger
from operators import separated
from scenarios.models import Report, Verdict
from solvers import ExpressionProfile
from storage.report import REPORT_FILENAME, emit_report, omit_empty, sanitize, slug

setup_logger()


def sample_report() -> Report:
    trace = frequency_trace(separated(exact_cone(3), ExpressionProfile.constant(1.0)), 0.0, frequency_grid(10.0, 80.0)[:3])
    verdicts = [
        Verdict(
            name="frequency[n=3,l=1,m=0]/limit",
            anchor="frequency-limit",
            status="pass",
            constants={"xi_hat": np.float64(4.0001), "rho_minus_1": None},
            details={"window": (10.0, 80.0)},
            tables={"trace": trace},
        ),
        Verdict(name="frequency[n=3,l=1,m=0]/vanishing", anchor="frequency-vanishing", status="fail", constants={"vanishing_radius": math.inf}),
    ]
    return Report(scenario="frequency-decay", config={"scenario": "frequency-decay"}, verdicts=verdicts, runtime={"wall_seconds": 0.5})


def test_helpers():
    """测试 omit_empty / sanitize / slug"""
    print("测试1: omit_empty 递归移除 None")
    data = {"a": None, "b": {"c": None, "d": 1}, "e": [{"f": None, "g": 2}]}
    assert omit_empty(data) == {"b": {"d": 1}, "e": [{"g": 2}]}, f"结果错误: {omit_empty(data)}"
    print("  ✅ 通过\n")

    print("测试2: sanitize 转换 numpy 标量、元组与非有限值")
    clean = sanitize({"x": np.float64(1.5), "n": np.int64(3), "ok": np.bool_(True), "t": (1, 2), "inf": math.inf, "nan": float("nan")})
    assert clean == {"x": 1.5, "n": 3, "ok": True, "t": [1, 2], "inf": "inf", "nan": "nan"}, f"结果错误: {clean}"
    assert type(clean["x"]) is float and type(clean["n"]) is int and type(clean["ok"]) is bool, "应为 Python 原生类型"
    print("  ✅ 通过\n")

    print("测试3: 检查名转文件名")
    assert slug("frequency[n=3,l=1,m=0]/limit") == "frequency_n=3_l=1_m=0_limit", f"slug 错误: {slug('frequency[n=3,l=1,m=0]/limit')}"
    print("  ✅ 通过\n")

    print("所有测试通过！✅")


def test_emit_report():
    """测试 JSON 与 CSV 输出"""
    with tempfile.TemporaryDirectory() as tmp:
        out = Path(tmp) / "run"

        print("测试1: csv-bundle 写出 report.json 与轨迹 CSV")
        report = sample_report()
        path = emit_report(report, out, "csv-bundle")
        assert path == out / REPORT_FILENAME and path.exists(), "report.json 未写出"
        assert report.artifacts == ["csv/frequency_n=3_l=1_m=0_limit-trace.csv"], f"产物路径错误: {report.artifacts}"
        with open(out / report.artifacts[0], encoding="utf-8") as f:
            rows = list(csv.reader(f))
        assert rows[0] == TRACE_CSV_HEADER and len(rows) == 4, f"CSV 表头或行数错误: {rows[0]}"
        assert not list(out.rglob("*.tmp")), "不应残留临时文件"
        print("  ✅ 通过\n")

        print("测试2: JSON 结构、字段顺序与常数台账")
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
        assert list(data) == ["scenario", "passed", "exit_code", "config", "verdicts", "constants", "artifacts", "runtime"], f"字段顺序错误: {list(data)}"
        assert data["passed"] is False and data["exit_code"] == 1, "有失败结论时退出码应为 1"
        limit = data["constants"]["frequency[n=3,l=1,m=0]/limit"]
        assert limit == {"xi_hat": 4.0001}, f"None 应被省略: {limit}"
        assert data["constants"]["frequency[n=3,l=1,m=0]/vanishing"]["vanishing_radius"] == "inf", "inf 应写成字符串"
        first = data["verdicts"][0]
        assert first["artifacts"] == report.artifacts and "error" not in first, f"verdict 字段错误: {first}"
        assert first["details"]["window"] == [10.0, 80.0], "元组应写成列表"
        print("  ✅ 通过\n")

        print("测试3: json 格式不写 CSV")
        json_only = Path(tmp) / "json-only"
        emit_report(sample_report(), json_only, "json")
        assert not (json_only / "csv").exists(), "json 格式不应写 CSV"
        with open(json_only / REPORT_FILENAME, encoding="utf-8") as f:
            assert "artifacts" not in json.load(f), "没有产物时 artifacts 应被省略"
        print("  ✅ 通过\n")

        print("测试4: 输出目录不可写时抛出 OutputError 并带路径")
        blocker = Path(tmp) / "blocker"
        blocker.write_text("not a directory", encoding="utf-8")
        try:
            emit_report(sample_report(), blocker, "json")
        except OutputError as e:
            assert str(blocker) in e.context["path"], f"上下文应包含路径: {e.context}"
        else:
            raise AssertionError("应该抛出 OutputError")
        print("  ✅ 通过\n")

    print("所有测试通过！✅")


if __name__ == "__main__":
    test_helpers()
    test_emit_report()

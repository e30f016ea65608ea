from dataclasses import dataclass, field
from typing import Any, Callable, Literal, Protocol

Status = Literal["pass", "fail", "error"]


class Exportable(Protocol):
    def export_csv(self, path): ...


@dataclass
class Finding:
    """检查的一个结论"""

    passed: bool
    constants: dict[str, Any] = field(default_factory=dict)
    """进入常数台账的量，例如 Lambda / M / xi_hat"""

    details: dict[str, Any] = field(default_factory=dict)

    tables: dict[str, Exportable] = field(default_factory=dict)
    """csv-bundle 格式下导出的轨迹"""

    anchor: str | None = None
    """默认为所属 Check 的锚点"""

    suffix: str | None = None
    """附加在 Check 名称之后，区分同一次计算的多个结论"""


@dataclass
class Check:
    """一个独立的检查，由 runner 在线程中执行"""

    name: str
    anchor: str
    run: Callable[[], Finding | list[Finding]]


@dataclass
class Verdict:
    name: str
    anchor: str
    status: Status
    constants: dict[str, Any] = field(default_factory=dict)
    details: dict[str, Any] = field(default_factory=dict)
    error: str | None = None
    """异常信息，仅 status = error 或证书失败时存在"""

    artifacts: list[str] = field(default_factory=list)
    """相对于输出目录的 CSV 路径"""

    tables: dict[str, Exportable] = field(default_factory=dict, repr=False)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "anchor": self.anchor,
            "status": self.status,
            "constants": self.constants or None,
            "details": self.details or None,
            "error": self.error,
            "artifacts": self.artifacts or None,
        }


@dataclass
class Report:
    """一次运行的全部结论"""

    scenario: str
    config: dict[str, Any]
    verdicts: list[Verdict]
    artifacts: list[str] = field(default_factory=list)
    runtime: dict[str, Any] = field(default_factory=dict)
    """墙钟时间等运行统计，不参与确定性比较"""

    @property
    def constants(self) -> dict[str, dict[str, Any]]:
        return {v.name: v.constants for v in self.verdicts if v.constants}

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    @property
    def exit_code(self) -> int:
        """0 全部通过，1 有违反，3 仅有数值/域错误"""
        statuses = {v.status for v in self.verdicts}
        if "fail" in statuses:
            return 1
        if "error" in statuses:
            return 3
        return 0

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "passed": self.passed,
            "exit_code": self.exit_code,
            "config": self.config,
            "verdicts": [v.to_dict() for v in self.verdicts],
            "constants": self.constants,
            "artifacts": self.artifacts or None,
            "runtime": self.runtime or None,
        }

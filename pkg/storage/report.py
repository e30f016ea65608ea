import json
import logging
import math
import os
import re
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np

from errors import OutputError
from scenarios.models import Report

logger = logging.getLogger(__name__)

REPORT_FILENAME = "report.json"
CSV_DIR = "csv"


def omit_empty(data: Any) -> Any:
    """递归移除字典中的 None 值，实现类似 Go 的 omitempty 效果"""
    if isinstance(data, dict):
        return {k: omit_empty(v) for k, v in data.items() if v is not None}
    elif isinstance(data, list):
        return [omit_empty(item) for item in data]
    else:
        return data


def sanitize(data: Any) -> Any:
    """转成 JSON 原生类型：numpy 标量转 Python 值，inf/nan 写成字符串"""
    if isinstance(data, dict):
        return {str(k): sanitize(v) for k, v in data.items()}
    if isinstance(data, (list, tuple)):
        return [sanitize(item) for item in data]
    if isinstance(data, np.ndarray):
        return [sanitize(item) for item in data.tolist()]
    if isinstance(data, (bool, np.bool_)):
        return bool(data)
    if isinstance(data, np.integer):
        return int(data)
    if isinstance(data, (float, np.floating)):
        value = float(data)
        return value if math.isfinite(value) else str(value)
    if isinstance(data, Enum):
        return data.value
    if isinstance(data, Path):
        return str(data)
    return data


def slug(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9.=-]+", "_", name).strip("_")


def _atomic(path: Path, write) -> Path:
    """write(tmp) 写入临时文件后 rename，崩溃时不会留下半截文件"""
    tmp = path.with_name(path.name + ".tmp")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        write(tmp)
        os.replace(tmp, path)
    except OSError as e:
        tmp.unlink(missing_ok=True)
        raise OutputError(f"Cannot write {path}: {e.strerror or e}", path=str(path)) from e
    return path


class ReportStorage:
    """报告存储（JSON 摘要 + 可选的 CSV 轨迹）"""

    def __init__(self, base_path: Path | None = None):
        from config import cfg

        self.base_path = Path(base_path) if base_path is not None else cfg.output_dir

    def save_tables(self, report: Report) -> list[str]:
        """每个 verdict 的每张表写成 csv/<verdict>-<table>.csv"""
        written = []
        for verdict in report.verdicts:
            for table_name, table in verdict.tables.items():
                relative = Path(CSV_DIR) / f"{slug(verdict.name)}-{table_name}.csv"
                _atomic(self.base_path / relative, table.export_csv)
                verdict.artifacts.append(relative.as_posix())
                written.append(relative.as_posix())
        return written

    def save_json(self, report: Report) -> Path:
        data = omit_empty(sanitize(report.to_dict()))

        def write(tmp: Path):
            with open(tmp, "w", encoding="utf-8") as f:
                json.dump(data, f, ensure_ascii=False, indent=2, allow_nan=False)
                f.write("\n")

        return _atomic(self.base_path / REPORT_FILENAME, write)


def emit_report(report: Report, out_dir: str | Path | None = None, format: str = "csv-bundle") -> Path:
    """Write the report; returns the path of report.json"""
    storage = ReportStorage(Path(out_dir) if out_dir is not None else None)
    if format == "csv-bundle":
        report.artifacts.extend(storage.save_tables(report))
    path = storage.save_json(report)
    logger.info(f"Report written to {path} ({len(report.artifacts)} CSV artifact(s))")
    return path

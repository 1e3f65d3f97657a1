"""Tabular experiment output and its CSV / JSON serialisation."""
from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field
from typing import Any


@dataclass
class ExperimentReport:
    """Rows of named numeric columns plus free-form metadata."""

    name: str
    columns: list[str]
    rows: list[dict[str, Any]] = field(default_factory=list)
    meta: dict[str, Any] = field(default_factory=dict)
    ok: bool = True
    messages: list[str] = field(default_factory=list)

    def add(self, **row) -> None:
        unknown = set(row) - set(self.columns)
        if unknown:
            raise KeyError(f"unknown columns {sorted(unknown)}")
        self.rows.append(row)

    def column(self, name: str) -> list:
        return [r.get(name) for r in self.rows]

    def fail(self, message: str) -> None:
        self.ok = False
        self.messages.append(message)


def format_cell(value) -> str:
    """17 significant digits for floats, so every cell round-trips."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, ".17g")
    if hasattr(value, "item"):
        return format_cell(value.item())
    return str(value)


def _jsonable(value):
    if hasattr(value, "item"):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def to_csv(report: ExperimentReport) -> str:
    buf = io.StringIO()
    buf.write(f"# experiment: {report.name}\n")
    for key, value in report.meta.items():
        buf.write(f"# {key}: {json.dumps(value, sort_keys=True, default=_jsonable)}\n")
    buf.write(f"# status: {'pass' if report.ok else 'fail'}\n")
    for msg in report.messages:
        buf.write(f"# note: {msg}\n")
    buf.write(",".join(report.columns) + "\n")
    for row in report.rows:
        buf.write(",".join(format_cell(row.get(c)) for c in report.columns) + "\n")
    return buf.getvalue()


def to_json(report: ExperimentReport) -> str:
    doc = {
        "experiment": report.name,
        "meta": report.meta,
        "status": "pass" if report.ok else "fail",
        "notes": report.messages,
        "columns": report.columns,
        "rows": [{c: _jsonable(r.get(c)) for c in report.columns} for r in report.rows],
    }
    return json.dumps(doc, indent=2, sort_keys=False, default=_jsonable) + "\n"

"""Report rendering: full JSON, CSV tables, or one line per task."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Optional

from .runner import task_passed

FORMATS = ("json", "csv", "text")


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def to_csv(report: dict) -> str:
    """Orbit and return-time tables, one block per task with a table.

    Each data row is prefixed by the task index; tasks without a table
    contribute nothing.  When no task has a table a verdict table is written.
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    tabled = [e for e in report["tasks"] if "table" in e]
    if not tabled:
        w.writerow(["task", "op", "verdict"])
        for e in report["tasks"]:
            w.writerow([e["index"], e["op"], e["outcome"]])
        return buf.getvalue()
    for e in tabled:
        t = e["table"]
        w.writerow(["task"] + t["columns"])
        for row in t["rows"]:
            w.writerow([e["index"]] + [repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def to_text(report: dict) -> str:
    lines = []
    for e in report["tasks"]:
        token = "FAIL" if task_passed(e) == "error" else task_passed(e).upper()
        detail = e.get("error") or e.get("report", {}).get("name", "")
        if "expect" in e:
            detail += f" (outcome {e['outcome']}, expected {e['expect']})"
        flag = " [horizon-limited]" if e.get("report", {}).get("horizon_limited") else ""
        lines.append(f"{token} {e['label']}: {detail}{flag}")
    return "\n".join(lines) + "\n"


def emit_report(report: dict, fmt: str = "json", out: Optional[str] = None) -> str:
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}")
    text = {"json": to_json, "csv": to_csv, "text": to_text}[fmt](report)
    if out is not None:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    return text

"""Run the tasks of a config and assemble the report."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional

from .. import __version__
from .config import SCHEMA, Context, ExperimentConfig, config_from_dict
from .ops import OPS, scale_horizons

STATUS_OK, STATUS_ERROR = "ok", "error"


def run_task(config_data: dict, index: int, horizon_scale: float = 1.0) -> dict:
    """Execute one task; errors are captured in the entry, never raised."""
    config = ExperimentConfig(config_data)
    task = config.tasks[index]
    op = task["op"]
    entry = {"index": index, "op": op, "label": task.get("label", op)}
    if "expect" in task:
        entry["expect"] = task["expect"]
    try:
        ctx = Context(config, task)
        params = scale_horizons(task.get("params", {}), horizon_scale)
        report, table = OPS[op][1](ctx, params, config.seed + index)
        entry["status"] = STATUS_OK
        entry["report"] = report.to_dict()
        if table is not None:
            entry["table"] = table
        outcome = report.verdict
    except Exception as exc:  # reported per task so siblings still run
        entry["status"] = STATUS_ERROR
        entry["error"] = f"{type(exc).__name__}: {exc}"
        outcome = "error"
    entry["outcome"] = outcome
    if "expect" in task:
        entry["matches_expectation"] = outcome == task["expect"]
    return entry


def run_experiment(config: ExperimentConfig, workers: int = 1, horizon_scale: float = 1.0,
                   categories: Optional[List[str]] = None) -> dict:
    start = time.perf_counter()
    indices = [i for i, t in enumerate(config.tasks)
               if categories is None or OPS[t["op"]][0] in categories]
    if workers > 1 and len(indices) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(run_task, config.data, i, horizon_scale) for i in indices]
            entries = [f.result() for f in futures]
    else:
        entries = [run_task(config.data, i, horizon_scale) for i in indices]
    return {
        "schema": SCHEMA,
        "version": __version__,
        "config": config.data,
        "horizon_scale": horizon_scale,
        "tasks": entries,
        "horizon_limited": any(e.get("report", {}).get("horizon_limited") for e in entries),
        "wall_time": round(time.perf_counter() - start, 6),
    }


def task_passed(entry: dict) -> str:
    """Effective outcome: tasks with an expectation pass when they meet it."""
    if "expect" in entry:
        return "pass" if entry["matches_expectation"] else "fail"
    return entry["outcome"]


def exit_code(report: dict) -> int:
    outcomes = [task_passed(e) for e in report["tasks"]]
    if any(o in ("fail", "error") for o in outcomes):
        return 1
    if any(o == "inconclusive" for o in outcomes):
        return 2
    return 0


def report_body(report: dict) -> dict:
    """The report without its timing, for reproducibility comparisons."""
    return {k: v for k, v in report.items() if k != "wall_time"}


def load_report(data: dict) -> dict:
    if data.get("schema") != SCHEMA:
        raise ValueError("not an ifsbench report")
    config_from_dict(data["config"])
    return data

"""Verification reports: deterministic JSON with one isolated timestamp field, and a
markdown rendering derived from the JSON."""
from __future__ import annotations

import json
import math
import platform
from datetime import datetime, timezone

import numpy as np
import scipy

from . import __version__
from .models.registry import data_hashes
from .residual import Residual

SCHEMA = 1
TIMESTAMP_FIELD = "generated_at"


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.generic):
        obj = obj.item()
    if isinstance(obj, complex):
        return {"re": _plain(obj.real), "im": _plain(obj.imag)}
    if isinstance(obj, float) and not math.isfinite(obj):
        return None if math.isnan(obj) else str(obj)
    return obj


def sort_key(r: Residual):
    return (r.name, json.dumps(_plain(r.context), sort_keys=True))


def build_report(config: dict, results: list[Residual], warnings: list[str] = (),
                 timestamp: str | None = None) -> dict:
    results = sorted(results, key=sort_key)
    rows = [_plain(r.to_dict()) for r in results]
    warnings = list(warnings) + [f"{r.name}: {r.note}" for r in results if r.skipped]
    summary = {
        "total": len(rows),
        "passed": sum(r.status == "pass" for r in results),
        "failed": sum(r.status == "fail" for r in results),
        "skipped": sum(r.skipped for r in results),
        "warnings": len(warnings),
    }
    return {
        "schema": SCHEMA,
        TIMESTAMP_FIELD: timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "config": _plain(config),
        "results": rows,
        "warnings": warnings,
        "summary": summary,
        "versions": {
            "isogeo": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "python": platform.python_version(),
            "model_data": data_hashes(),
        },
    }


def report_body(report: dict) -> dict:
    """The report without its timestamp; equal configs and seeds give equal bodies."""
    return {k: v for k, v in report.items() if k != TIMESTAMP_FIELD}


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _fmt(value):
    if isinstance(value, float):
        return f"{value:.3e}"
    return "-" if value is None else str(value)


def render_markdown(report: dict) -> str:
    cfg, s = report["config"], report["summary"]
    lines = [
        f"# Verification report: {cfg.get('model', '?')}",
        "",
        f"- generated: {report[TIMESTAMP_FIELD]}",
        f"- suites: {', '.join(cfg.get('suites', []))}",
        f"- points: {cfg.get('points')}, seed: {cfg.get('seed')}",
        f"- passed {s['passed']}, failed {s['failed']}, skipped {s['skipped']}, warnings {s['warnings']}",
        "",
        "| check | status | residual | tol | context |",
        "|---|---|---|---|---|",
    ]
    for row in report["results"]:
        ctx = ", ".join(f"{k}={v}" for k, v in sorted(row["context"].items()))
        lines.append(f"| {row['name']} | {row['status']} | {_fmt(row['value'])} | {_fmt(row['tol'])} | {ctx} |")
    if report["warnings"]:
        lines += ["", "## Warnings", ""] + [f"- {w}" for w in report["warnings"]]
    return "\n".join(lines) + "\n"

"""Deterministic CSV and JSON-sidecar writers.

CSV files use comma separators, "\n" line endings, a single header row and
15-significant-digit decimal formatting, so identical configurations
produce byte-identical data files.  Every data file <out>.csv gets a
<out>.csv.meta.json sidecar echoing the fully resolved configuration.
"""

from __future__ import annotations

import json
import math
import os
import time
from typing import Any, Iterable, Sequence


def format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (int,)):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return format(value, ".15g")
    return str(value)


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    _ensure_parent(path)
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def write_sectioned_csv(path: str, sections: Sequence[tuple[str, Sequence[str], Iterable[Sequence[Any]]]]) -> None:
    """Write named sections, each with its own header row, into one CSV."""
    lines = []
    for name, header, rows in sections:
        lines.append(name)
        lines.append(",".join(header))
        for row in rows:
            lines.append(",".join(format_value(v) for v in row))
    _ensure_parent(path)
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def write_sidecar(csv_path: str, payload: dict) -> None:
    with open(csv_path + ".meta.json", "w", newline="") as fh:
        fh.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def sidecar_payload(command: str, config: dict, version: str, started: float,
                    assumptions: Sequence[str] = ()) -> dict:
    payload = {
        "command": command,
        "config": dict(sorted(config.items())),
        "version": version,
        "runtime_seconds": time.perf_counter() - started,
    }
    if assumptions:
        payload["assumptions"] = list(assumptions)
    return payload


def _ensure_parent(path: str) -> None:
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)

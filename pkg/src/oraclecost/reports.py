"""Deterministic report serialization for the command-line harness.

Reports come in two shapes: a JSON document wrapping the resolved
configuration, the tool version, and a results payload, and a flat CSV
table for per-trial or per-row data.  Both serializations are byte
deterministic for identical inputs: JSON uses sorted keys and a fixed
indent, CSV uses '.' decimals, repr-exact floats, and no quoting.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np

from . import __version__

TOOL_NAME = "oraclecost"


def _json_default(obj: Any) -> Any:
    """Convert numpy scalars and arrays to plain Python values."""
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def canonical_json(payload: Any) -> str:
    """Serialize to JSON with sorted keys and two-space indent."""
    return (
        json.dumps(
            payload, sort_keys=True, indent=2, allow_nan=False, default=_json_default
        )
        + "\n"
    )


def report_payload(
    command: str, config: Mapping[str, Any], results: Any
) -> dict[str, Any]:
    """Wrap results with the command name, resolved config, and tool version."""
    return {
        "tool": {"name": TOOL_NAME, "version": __version__},
        "command": command,
        "config": dict(config),
        "results": results,
    }


def write_json_report(
    path: Path, command: str, config: Mapping[str, Any], results: Any
) -> Path:
    """Write the wrapped JSON report and return its path."""
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(canonical_json(report_payload(command, config, results)))
    return path


def format_cell(value: Any) -> str:
    """Render one CSV cell: repr-exact floats, bare ints, bools as 0/1."""
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (int,)):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    text = str(value)
    assert "," not in text and "\n" not in text, f"unquotable CSV cell {text!r}"
    return text


def write_csv(
    path: Path, header: Sequence[str], rows: Sequence[Sequence[Any]]
) -> Path:
    """Write a comma-separated table with a header row and unix newlines."""
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)]
    for row in rows:
        assert len(row) == len(header), "row width must match header"
        lines.append(",".join(format_cell(cell) for cell in row))
    path.write_text("\n".join(lines) + "\n")
    return path

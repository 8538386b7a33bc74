"""Deterministic JSON report envelope shared by the CLI and the tests."""

from __future__ import annotations

import json
import math
from importlib import resources
from typing import Any

import numpy as np

SCHEMA_VERSION = "1"


def jsonable(obj: Any) -> Any:
    """Plain JSON types only; NaN and infinities become ``None``."""
    if hasattr(obj, "to_dict"):
        return jsonable(obj.to_dict())
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


def envelope(command: str, config: dict, result: Any) -> dict:
    from . import __version__

    return {"schema_version": SCHEMA_VERSION, "tool_version": __version__, "command": command,
            "config": jsonable(config), "result": jsonable(result)}


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, allow_nan=False) + "\n"


def load_schema() -> dict:
    text = resources.files("hmnconvex").joinpath("schema/report.schema.json").read_text("utf-8")
    return json.loads(text)

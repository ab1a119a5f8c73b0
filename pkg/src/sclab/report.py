"""Machine-readable analysis reports.

Reports are JSON objects with a versioned schema.  Determinism is a
contract: two runs with the same inputs, parameters, and seed must
produce byte-identical reports, so keys are sorted, floats go through
repr, and wall-clock timings are excluded unless explicitly requested.
"""

from __future__ import annotations

import hashlib
import json
import sys
from typing import Any, Dict, Optional

REPORT_SCHEMA = 1


def _tool_version() -> str:
    from . import __version__

    return __version__


def fingerprint_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def fingerprint_file(path) -> str:
    with open(path, "rb") as fh:
        return fingerprint_bytes(fh.read())


def fingerprint_text(text: str) -> str:
    return fingerprint_bytes(text.encode("utf-8"))


def build_report(command: str, parameters: Dict[str, Any],
                 analyses: Dict[str, Any],
                 inputs: Optional[Dict[str, str]] = None,
                 warnings: Optional[list] = None,
                 timings: Optional[Dict[str, float]] = None) -> Dict[str, Any]:
    """Assemble the standard report envelope.

    ``inputs`` maps input names to content fingerprints; ``timings``
    is only attached when measured (opt-in), since wall-clock values
    break byte-identity.
    """
    report: Dict[str, Any] = {
        "schema": REPORT_SCHEMA,
        "version": _tool_version(),
        "command": command,
        "parameters": parameters,
        "inputs": inputs or {},
        "analyses": analyses,
    }
    if warnings:
        report["warnings"] = list(warnings)
    if timings is not None:
        report["timings"] = {k: round(v, 6) for k, v in sorted(timings.items())}
    return report


def jsonable(obj: Any) -> Any:
    """Convert analysis results to strict JSON values: dataclasses to
    dicts, numpy scalars to python numbers, tuples to lists, and
    non-finite floats to None (strict JSON has no NaN/Infinity)."""
    import dataclasses
    import math

    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: jsonable(getattr(obj, f.name))
                for f in dataclasses.fields(obj) if not f.name.startswith("_")}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "tolist") and not isinstance(obj, (str, bytes)):
        return jsonable(obj.tolist())
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def render_report(report: Dict[str, Any]) -> str:
    """Canonical serialization: sorted keys, two-space indent, one
    trailing newline.  Non-finite floats must be mapped to null by
    :func:`jsonable` before rendering; strict JSON has no NaN."""
    return json.dumps(jsonable(report), sort_keys=True, indent=2,
                      allow_nan=False) + "\n"


def write_report(report: Dict[str, Any], out: Optional[str] = None) -> None:
    text = render_report(report)
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)

"""Versioned JSON file formats for partitions and scenarios.

All floats are written with 17 significant digits so parsing recovers the
exact binary value.  Parsers are strict: unknown fields are rejected rather
than ignored, so typos fail loudly.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .errors import FormatError
from .labels import LabelSet
from .partitions import Partition1D, Partition2D

PARTITION_FORMAT = "caccioppoli-partition/1"
SCENARIO_FORMAT = "caccioppoli-scenario/1"
REPORT_FORMAT = "caccioppoli-report/1"


def format_float(x: float) -> str:
    if not math.isfinite(x):
        raise FormatError(f"cannot serialize non-finite float {x!r}")
    return format(float(x), ".17g")


def dumps_json(obj, indent: int = 0) -> str:
    """Deterministic JSON text with 17-significant-digit floats."""
    pieces = []
    _write_json(obj, pieces, indent, 0)
    pieces.append("\n")
    return "".join(pieces)


def _write_json(obj, out, indent, level):
    pad = " " * (indent * (level + 1)) if indent else ""
    end_pad = " " * (indent * level) if indent else ""
    nl = "\n" if indent else ""
    if obj is None or isinstance(obj, bool):
        out.append(json.dumps(obj))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format_float(float(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{" + nl)
        for k, (key, val) in enumerate(obj.items()):
            out.append(pad + json.dumps(str(key)) + ": ")
            _write_json(val, out, indent, level + 1)
            out.append(("," if k < len(obj) - 1 else "") + nl)
        out.append(end_pad + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            out.append("[]")
            return
        if all(
            v is None or isinstance(v, (bool, int, float, str, np.integer, np.floating))
            for v in seq
        ):
            # scalar rows stay on one line
            inner = []
            for v in seq:
                _write_json(v, inner, 0, 0)
            out.append("[" + ", ".join(inner) + "]")
            return
        out.append("[" + nl)
        for k, val in enumerate(seq):
            out.append(pad)
            _write_json(val, out, indent, level + 1)
            out.append(("," if k < len(seq) - 1 else "") + nl)
        out.append(end_pad + "]")
    else:
        raise FormatError(f"cannot serialize object of type {type(obj).__name__}")


def _require_keys(d: dict, required, optional=(), where="object"):
    missing = [k for k in required if k not in d]
    if missing:
        raise FormatError(f"{where}: missing fields {missing}")
    unknown = [k for k in d if k not in required and k not in optional]
    if unknown:
        raise FormatError(f"{where}: unknown fields {unknown}")


def partition_to_dict(u) -> dict:
    d = {
        "format": PARTITION_FORMAT,
        "dim": u.dim,
        "labels": [list(row) for row in u.labels.values],
    }
    if u.dim == 1:
        d["interval"] = list(u.interval)
        d["breakpoints"] = list(u.breakpoints)
        d["cell_labels"] = [int(c) for c in u.cell_labels]
    else:
        d["vertices"] = [list(row) for row in u.vertices]
        d["cells"] = [list(c) for c in u.cells]
        d["cell_labels"] = [int(c) for c in u.cell_labels]
    return d


def partition_from_dict(d) -> Partition1D | Partition2D:
    if not isinstance(d, dict):
        raise FormatError("partition file must contain a JSON object")
    if d.get("format") != PARTITION_FORMAT:
        raise FormatError(
            f"unsupported partition format {d.get('format')!r}; "
            f"expected {PARTITION_FORMAT!r}"
        )
    dim = d.get("dim")
    if dim == 1:
        _require_keys(
            d,
            ("format", "dim", "labels", "interval", "breakpoints", "cell_labels"),
            where="partition file",
        )
        try:
            labels = LabelSet(d["labels"])
            return Partition1D(
                d["interval"], d["breakpoints"], d["cell_labels"], labels
            )
        except (ValueError, TypeError, IndexError) as exc:
            raise FormatError(f"malformed partition data: {exc}") from exc
    if dim == 2:
        _require_keys(
            d,
            ("format", "dim", "labels", "vertices", "cells", "cell_labels"),
            where="partition file",
        )
        try:
            labels = LabelSet(d["labels"])
            return Partition2D(d["vertices"], d["cells"], d["cell_labels"], labels)
        except (ValueError, TypeError, IndexError) as exc:
            raise FormatError(f"malformed partition data: {exc}") from exc
    raise FormatError(f"dim must be 1 or 2, got {dim!r}")


def save_partition(u, path):
    with open(path, "w", encoding="utf-8") as fp:
        fp.write(dumps_json(partition_to_dict(u), indent=2))


def load_partition(path) -> Partition1D | Partition2D:
    try:
        with open(path, "r", encoding="utf-8") as fp:
            data = json.load(fp)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from exc
    return partition_from_dict(data)

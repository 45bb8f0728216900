"""Canonical JSON file formats: levels, corpora, raw tensors, reports.

Encoding is deterministic: fixed key order, compact separators, UTF-8, one
trailing newline. Decoding is strict: unknown fields, wrong dimensions and
cell-rule violations are rejected with a `FormatError` naming the culprit.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .board import LAYERS, SIZE, N_LAYERS, CellState, Level, check_raw_tensor, validate

FORMAT_VERSION = 1


class FormatError(ValueError):
    """Raised when a file does not conform to a matchgrid format."""


def _dumps(obj: Any) -> bytes:
    return (json.dumps(obj, separators=(",", ":"), allow_nan=False) + "\n").encode("utf-8")


def _loads(data: bytes | str) -> Any:
    try:
        return json.loads(data)
    except json.JSONDecodeError as e:
        raise FormatError(f"not valid JSON: {e}") from e


def _require_keys(obj: Any, required: set[str], optional: set[str], what: str) -> None:
    if not isinstance(obj, dict):
        raise FormatError(f"{what} must be an object")
    keys = set(obj)
    missing = required - keys
    unknown = keys - required - optional
    if missing:
        raise FormatError(f"{what} missing fields: {sorted(missing)}")
    if unknown:
        raise FormatError(f"{what} has unknown fields: {sorted(unknown)}")


def level_to_obj(level: Level) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "width": SIZE,
        "height": SIZE,
        "cells": [
            [dict(zip(LAYERS, cell.flags())) for cell in row] for row in level.cells
        ],
    }


def level_from_obj(obj: Any, where: str = "level") -> Level:
    _require_keys(obj, {"format_version", "width", "height", "cells"}, set(), where)
    if obj["format_version"] != FORMAT_VERSION:
        raise FormatError(f"{where}: unsupported format_version {obj['format_version']!r}")
    if obj["width"] != SIZE or obj["height"] != SIZE:
        raise FormatError(
            f"{where}: dimensions must be {SIZE}x{SIZE}, got "
            f"{obj['width']}x{obj['height']}"
        )
    cells = obj["cells"]
    if not isinstance(cells, list) or len(cells) != SIZE:
        raise FormatError(f"{where}: cells must be {SIZE} rows")
    rows = []
    for r, row in enumerate(cells):
        if not isinstance(row, list) or len(row) != SIZE:
            raise FormatError(f"{where}: row {r} must have {SIZE} cells")
        out = []
        for c, cell_obj in enumerate(row):
            _require_keys(cell_obj, set(LAYERS), set(), f"{where}: cell ({r},{c})")
            flags = {}
            for name in LAYERS:
                v = cell_obj[name]
                if v not in (0, 1):
                    raise FormatError(f"{where}: cell ({r},{c}) field {name} must be 0 or 1")
                flags[name] = bool(v)
            out.append(CellState(**flags))
        rows.append(tuple(out))
    level = Level(tuple(rows))
    bad = validate(level)
    if bad:
        raise FormatError(f"{where}: invalid cells: " + "; ".join(map(str, bad)))
    return level


def encode_level(level: Level) -> bytes:
    return _dumps(level_to_obj(level))


def decode_level(data: bytes | str) -> Level:
    return level_from_obj(_loads(data))


def encode_corpus(levels: Sequence[Level], meta: dict | None = None) -> bytes:
    obj: dict[str, Any] = {
        "format_version": FORMAT_VERSION,
        "levels": [level_to_obj(lv) for lv in levels],
    }
    if meta is not None:
        obj["meta"] = meta
    return _dumps(obj)


def decode_corpus(data: bytes | str) -> tuple[list[Level], dict]:
    obj = _loads(data)
    _require_keys(obj, {"format_version", "levels"}, {"meta"}, "corpus")
    if obj["format_version"] != FORMAT_VERSION:
        raise FormatError(f"corpus: unsupported format_version {obj['format_version']!r}")
    if not isinstance(obj["levels"], list):
        raise FormatError("corpus: levels must be an array")
    levels = []
    problems = []
    for i, lo in enumerate(obj["levels"]):
        try:
            levels.append(level_from_obj(lo, f"level {i}"))
        except FormatError as e:
            problems.append(str(e))
    if problems:
        raise FormatError("corpus: " + "; ".join(problems))
    meta = obj.get("meta") or {}
    return levels, meta


def encode_tensors(tensors: Sequence) -> bytes:
    checked = [check_raw_tensor(t) for t in tensors]
    return _dumps({
        "format_version": FORMAT_VERSION,
        "tensors": [t.tolist() for t in checked],
    })


def decode_tensors(data: bytes | str) -> list[np.ndarray]:
    obj = _loads(data)
    _require_keys(obj, {"format_version", "tensors"}, set(), "tensor file")
    if obj["format_version"] != FORMAT_VERSION:
        raise FormatError(f"tensor file: unsupported format_version {obj['format_version']!r}")
    if not isinstance(obj["tensors"], list):
        raise FormatError("tensor file: tensors must be an array")
    out = []
    for i, t in enumerate(obj["tensors"]):
        arr = np.asarray(t, dtype=float)
        if arr.shape != (SIZE, SIZE, N_LAYERS):
            raise FormatError(f"tensor {i}: shape must be {(SIZE, SIZE, N_LAYERS)}, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise FormatError(f"tensor {i}: contains non-finite values")
        out.append(arr)
    return out


def save_corpus(levels: Sequence[Level], path: str | Path, meta: dict | None = None) -> None:
    Path(path).write_bytes(encode_corpus(levels, meta))


def load_corpus(path: str | Path) -> list[Level]:
    levels, _ = decode_corpus(Path(path).read_bytes())
    return levels


def save_tensors(tensors: Sequence, path: str | Path) -> None:
    Path(path).write_bytes(encode_tensors(tensors))


def load_tensors(path: str | Path) -> list[np.ndarray]:
    return decode_tensors(Path(path).read_bytes())


def _round_float(x: float) -> float:
    if not math.isfinite(x):
        raise FormatError("report values must be finite")
    return float(x)


def encode_report(sets: Sequence[dict], picks: Sequence[dict] | None = None) -> bytes:
    """Serialize labeled report blocks (see metrics.report_block)."""
    obj: dict[str, Any] = {"format_version": FORMAT_VERSION, "sets": list(sets)}
    if picks:
        obj["picks"] = list(picks)
    return _dumps(obj)


def plot_data_rows(labeled_reports: Sequence[tuple[str, Any]]) -> str:
    """Delimiter-separated per-level metric rows for external boxplot tools."""
    lines = ["label,vertical,horizontal,diagonal,cluster"]
    for label, report in labeled_reports:
        for row in report.per_level:
            lines.append(
                f"{label},{_round_float(row.vertical)!r},{_round_float(row.horizontal)!r},"
                f"{_round_float(row.diagonal)!r},{_round_float(row.cluster)!r}"
            )
    return "\n".join(lines) + "\n"

"""Readers and writers for the level-toolkit file formats.

This package talks to the level toolkit only through its files: corpora of
levels come in as JSON and raw generator output goes back out as JSON
tensors for the toolkit's post-processing command. Levels are encoded as
six binary channels in the documented layer order.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

FORMAT_VERSION = 1
LAYERS = ("shape", "regular", "special", "block", "jelly", "lock")
SIZE = 9


class CorpusFormatError(ValueError):
    pass


def load_corpus_channels(path: str | Path) -> np.ndarray:
    """Corpus file -> float32 array of shape (n_levels, 6, 9, 9)."""
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise CorpusFormatError(f"{path}: not valid JSON: {e}") from e
    if not isinstance(obj, dict) or obj.get("format_version") != FORMAT_VERSION:
        raise CorpusFormatError(f"{path}: missing or unsupported format_version")
    levels = obj.get("levels")
    if not isinstance(levels, list):
        raise CorpusFormatError(f"{path}: levels must be an array")
    out = np.zeros((len(levels), len(LAYERS), SIZE, SIZE), dtype=np.float32)
    for i, level in enumerate(levels):
        cells = level.get("cells") if isinstance(level, dict) else None
        if not isinstance(cells, list) or len(cells) != SIZE:
            raise CorpusFormatError(f"{path}: level {i} must have {SIZE} rows")
        for r, row in enumerate(cells):
            if not isinstance(row, list) or len(row) != SIZE:
                raise CorpusFormatError(f"{path}: level {i} row {r} must have {SIZE} cells")
            for c, cell in enumerate(row):
                for k, name in enumerate(LAYERS):
                    v = cell.get(name)
                    if v not in (0, 1):
                        raise CorpusFormatError(
                            f"{path}: level {i} cell ({r},{c}) field {name} must be 0 or 1"
                        )
                    out[i, k, r, c] = v
    return out


def save_raw_tensors(tensors: np.ndarray, path: str | Path) -> None:
    """Write (n, 9, 9, 6) raw values as a toolkit tensor file."""
    arr = np.asarray(tensors, dtype=float)
    if arr.ndim != 4 or arr.shape[1:] != (SIZE, SIZE, len(LAYERS)):
        raise ValueError(f"expected (n, {SIZE}, {SIZE}, {len(LAYERS)}) tensors, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("raw tensors contain non-finite values")
    obj = {"format_version": FORMAT_VERSION, "tensors": arr.tolist()}
    Path(path).write_text(
        json.dumps(obj, separators=(",", ":")) + "\n", encoding="utf-8"
    )

"""Symmetry and clustering scores for levels, plus aggregate reports.

A symmetry score is the fraction of the 81 positions whose cell state (all
six layers) equals at least one of its reflection counterparts. Cells on a
mirror axis are their own counterparts and always count, so a perfectly
mirrored board scores exactly 1.0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .board import SIZE, Level, check_levels

N_CELLS = SIZE * SIZE

CLUSTER_CATEGORIES = frozenset({"block", "lock"})


def vertical_symmetry(level: Level) -> float:
    """Fraction of positions equal to their left/right mirror (r, 8-c)."""
    tg = level.tile_grid()
    return float((tg == tg[:, ::-1]).sum()) / N_CELLS


def horizontal_symmetry(level: Level) -> float:
    """Fraction of positions equal to their top/bottom mirror (8-r, c)."""
    tg = level.tile_grid()
    return float((tg == tg[::-1, :]).sum()) / N_CELLS


def diagonal_symmetry(level: Level) -> float:
    """Fraction of positions matching at least one diagonal counterpart.

    Both diagonals count at once: (r,c) passes if it equals its main-diagonal
    counterpart (c,r) or its anti-diagonal counterpart (8-c, 8-r).
    """
    tg = level.tile_grid()
    main = tg == tg.T
    anti = tg == tg[::-1, ::-1].T
    return float((main | anti).sum()) / N_CELLS


def cluster_score(level: Level, categories: Iterable[str] = CLUSTER_CATEGORIES) -> float:
    """Among cells flagged with any requested category, the fraction that
    touch (orthogonally) another flagged cell. Vacuously 1.0 with no flagged
    cells: the score penalizes singletons, not absence.
    """
    categories = frozenset(categories)
    unknown = categories - CLUSTER_CATEGORIES
    if unknown:
        raise ValueError(f"unknown cluster categories: {sorted(unknown)}")
    flagged = np.zeros((SIZE, SIZE), dtype=bool)
    for r, row in enumerate(level.cells):
        for c, cell in enumerate(row):
            if ("block" in categories and cell.block) or ("lock" in categories and cell.lock):
                flagged[r, c] = True
    total = int(flagged.sum())
    if total == 0:
        return 1.0
    padded = np.pad(flagged, 1)
    near = padded[:-2, 1:-1] | padded[2:, 1:-1] | padded[1:-1, :-2] | padded[1:-1, 2:]
    return float((flagged & near).sum()) / total


_METRICS = {
    "vertical": vertical_symmetry,
    "horizontal": horizontal_symmetry,
    "diagonal": diagonal_symmetry,
    "cluster": cluster_score,
}

SYMMETRY_METRICS = ("vertical", "horizontal", "diagonal")
PICKS = ("min", "median", "max")


@dataclass(frozen=True, slots=True)
class LevelMetrics:
    vertical: float
    horizontal: float
    diagonal: float
    cluster: float


@dataclass(frozen=True, slots=True)
class Summary:
    min: float
    q1: float
    median: float
    q3: float
    max: float
    mean: float


@dataclass(frozen=True, slots=True)
class SymmetryReport:
    per_level: tuple[LevelMetrics, ...]
    aggregates: dict[str, Summary]


def level_metrics(level: Level) -> LevelMetrics:
    return LevelMetrics(
        vertical=vertical_symmetry(level),
        horizontal=horizontal_symmetry(level),
        diagonal=diagonal_symmetry(level),
        cluster=cluster_score(level),
    )


def summarize(values: Sequence[float]) -> Summary:
    arr = np.asarray(values, dtype=float)
    lo, q1, med, q3, hi = np.percentile(arr, [0, 25, 50, 75, 100])
    return Summary(float(lo), float(q1), float(med), float(q3), float(hi), float(arr.mean()))


def report(levels: Sequence[Level]) -> SymmetryReport:
    """Per-level metrics plus a five-number summary (and mean) per metric."""
    levels = check_levels(levels)
    per_level = tuple(level_metrics(lv) for lv in levels)
    aggregates = {
        name: summarize([getattr(m, name) for m in per_level])
        for name in ("vertical", "horizontal", "diagonal", "cluster")
    }
    return SymmetryReport(per_level=per_level, aggregates=aggregates)


def report_block(label: str, rep: SymmetryReport) -> dict:
    """JSON-ready block for one labeled level set."""
    return {
        "label": label,
        "count": len(rep.per_level),
        "per_level": [
            {
                "vertical": m.vertical,
                "horizontal": m.horizontal,
                "diagonal": m.diagonal,
                "cluster": m.cluster,
            }
            for m in rep.per_level
        ],
        "aggregates": {
            name: {
                "min": s.min, "q1": s.q1, "median": s.median,
                "q3": s.q3, "max": s.max, "mean": s.mean,
            }
            for name, s in rep.aggregates.items()
        },
    }


@dataclass(frozen=True, slots=True)
class QuantilePick:
    pick: str
    index: int
    score: float


def select_by_quantile(
    levels: Sequence[Level], metric: str, picks: Sequence[str] = PICKS
) -> list[QuantilePick]:
    """Pick the minimal / median / maximal level by a symmetry metric.

    Deterministic: ties resolve to the lowest original index; the median is
    the element at index floor((n-1)/2) of the stably sorted order.
    """
    if metric not in SYMMETRY_METRICS:
        raise ValueError(f"metric must be one of {SYMMETRY_METRICS}, got {metric!r}")
    levels = check_levels(levels)
    bad = [p for p in picks if p not in PICKS]
    if bad:
        raise ValueError(f"unknown picks: {bad}")
    scores = [_METRICS[metric](lv) for lv in levels]
    order = sorted(range(len(scores)), key=lambda i: scores[i])  # stable
    chosen = []
    for pick in picks:
        if pick == "min":
            idx = order[0]
        elif pick == "median":
            idx = order[(len(order) - 1) // 2]
        else:
            top = scores[order[-1]]
            idx = next(i for i in order if scores[i] == top)
        chosen.append(QuantilePick(pick=pick, index=idx, score=scores[idx]))
    return chosen

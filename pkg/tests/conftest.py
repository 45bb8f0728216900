"""Shared test helpers: random level generators and naive metric oracles.

The oracles deliberately re-derive every rule with plain double loops over
CellState objects so the production implementations are checked against an
independent route.
"""

from __future__ import annotations

import numpy as np
import pytest

from matchgrid.board import VALID_TILE_IDS, Level


def random_valid_level(rng: np.random.Generator) -> Level:
    tiles = rng.choice(VALID_TILE_IDS, size=(9, 9))
    return Level.from_tiles(tiles.tolist())


def random_valid_levels(n: int, seed: int = 0) -> list[Level]:
    rng = np.random.default_rng(seed)
    return [random_valid_level(rng) for _ in range(n)]


def level_with(cells: dict[tuple[int, int], int]) -> Level:
    """A void board with specific tile ids placed at (row, col) keys."""
    grid = [[0] * 9 for _ in range(9)]
    for (r, c), tile in cells.items():
        grid[r][c] = tile
    return Level.from_tiles(grid)


def reflect(level: Level, axis: str) -> Level:
    if axis == "vertical":
        return Level.from_rows(tuple(tuple(reversed(row)) for row in level.cells))
    return Level.from_rows(tuple(reversed(level.cells)))


def oracle_vertical(level: Level) -> float:
    hits = 0
    for r in range(9):
        for c in range(9):
            if level.cells[r][c] == level.cells[r][8 - c]:
                hits += 1
    return hits / 81


def oracle_horizontal(level: Level) -> float:
    hits = 0
    for r in range(9):
        for c in range(9):
            if level.cells[r][c] == level.cells[8 - r][c]:
                hits += 1
    return hits / 81


def oracle_diagonal(level: Level) -> float:
    hits = 0
    for r in range(9):
        for c in range(9):
            main = level.cells[r][c] == level.cells[c][r]
            anti = level.cells[r][c] == level.cells[8 - c][8 - r]
            if main or anti:
                hits += 1
    return hits / 81


def oracle_single_diagonal(level: Level, which: str) -> float:
    hits = 0
    for r in range(9):
        for c in range(9):
            if which == "main":
                ok = level.cells[r][c] == level.cells[c][r]
            else:
                ok = level.cells[r][c] == level.cells[8 - c][8 - r]
            if ok:
                hits += 1
    return hits / 81


def oracle_cluster(level: Level) -> float:
    def flagged(r: int, c: int) -> bool:
        cell = level.cells[r][c]
        return cell.block or cell.lock

    flagged_cells = [(r, c) for r in range(9) for c in range(9) if flagged(r, c)]
    if not flagged_cells:
        return 1.0
    good = 0
    for r, c in flagged_cells:
        for nr, nc in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)):
            if 0 <= nr < 9 and 0 <= nc < 9 and flagged(nr, nc):
                good += 1
                break
    return good / len(flagged_cells)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)

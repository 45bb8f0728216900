"""Board data model: cell states, tile ids, levels, and the repair rules
that turn raw generator output into valid levels.

A cell is described by six binary layers. The first four (shape, regular,
special, block) are mutually exclusive and define the base content; jelly
and lock are overlays with placement restrictions. A cell with none of the
first four layers set is VOID (outside the playfield silhouette); a cell
with only the shape layer set is an empty playable cell.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

SIZE = 9
N_LAYERS = 6

#: Layer order. Also the bit order of a tile id (shape = least significant)
#: and the tie-break order during post-processing.
LAYERS = ("shape", "regular", "special", "block", "jelly", "lock")

# Conditioning tokens that never appear inside a level.
BORDER = 64  # off-board neighbor
SELF = 65    # neighborhood slot removed because it coincided with the center


@dataclass(frozen=True, slots=True)
class CellState:
    """Six binary occurrence flags for one board cell.

    Instances may represent invalid flag combinations; `violations` reports
    broken rules and `Level` validation aggregates them.
    """

    shape: bool = False
    regular: bool = False
    special: bool = False
    block: bool = False
    jelly: bool = False
    lock: bool = False

    @property
    def is_void(self) -> bool:
        return not (self.shape or self.regular or self.special or self.block)

    def violations(self) -> list[str]:
        """Rule codes broken by this flag combination (empty when valid)."""
        broken = []
        if (self.shape + self.regular + self.special + self.block) > 1:
            broken.append("first_four_coexistence")
        if self.jelly and self.is_void:
            broken.append("jelly_on_void")
        if self.lock and not (self.regular or self.special or self.block):
            broken.append("lock_on_empty")
        return broken

    def flags(self) -> tuple[int, int, int, int, int, int]:
        return (
            int(self.shape), int(self.regular), int(self.special),
            int(self.block), int(self.jelly), int(self.lock),
        )


VOID_CELL = CellState()


def collapse(cell: CellState) -> int:
    """Pack the six layers into a single tile id (shape = bit 0)."""
    f = cell.flags()
    return f[0] | f[1] << 1 | f[2] << 2 | f[3] << 3 | f[4] << 4 | f[5] << 5


def _expand_unchecked(tile: int) -> CellState:
    return CellState(
        shape=bool(tile & 1),
        regular=bool(tile & 2),
        special=bool(tile & 4),
        block=bool(tile & 8),
        jelly=bool(tile & 16),
        lock=bool(tile & 32),
    )


def _enumerate_valid() -> dict[int, CellState]:
    table = {}
    for tile in range(64):
        cell = _expand_unchecked(tile)
        if not cell.violations():
            table[tile] = cell
    return table


#: tile id -> CellState for every valid flag combination (15 entries).
EXPAND_TABLE = _enumerate_valid()
VALID_TILE_IDS = tuple(sorted(EXPAND_TABLE))


def expand(tile: int) -> CellState:
    """Inverse of `collapse`. Rejects BORDER/SELF and invalid bit patterns."""
    cell = EXPAND_TABLE.get(tile)
    if cell is None:
        raise ValueError(f"tile id {tile} is not a valid cell state")
    return cell


@dataclass(frozen=True, slots=True)
class Violation:
    row: int
    col: int
    rule: str

    def __str__(self) -> str:
        return f"{self.rule} at ({self.row},{self.col})"


@dataclass(frozen=True, slots=True)
class Level:
    """A 9x9 grid of cell states, indexed (row, col) with (0,0) top-left.

    Construction only enforces dimensions; cell-level rules are reported by
    `validate` so that malformed inputs can be diagnosed instead of refused.
    """

    cells: tuple[tuple[CellState, ...], ...]

    def __post_init__(self) -> None:
        if len(self.cells) != SIZE or any(len(row) != SIZE for row in self.cells):
            raise ValueError(f"level must be {SIZE}x{SIZE}")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[CellState]]) -> "Level":
        return cls(tuple(tuple(row) for row in rows))

    @classmethod
    def from_tiles(cls, tiles: Sequence[Sequence[int]]) -> "Level":
        return cls(tuple(tuple(expand(t) for t in row) for row in tiles))

    @classmethod
    def void(cls) -> "Level":
        return cls(tuple((VOID_CELL,) * SIZE for _ in range(SIZE)))

    def tile_grid(self) -> np.ndarray:
        """Tile ids as a (9, 9) int array."""
        return np.array([[collapse(c) for c in row] for row in self.cells], dtype=np.int64)


def validate(level: Level) -> list[Violation]:
    """Report every broken cell rule; an empty list means the level is valid."""
    out = []
    for r, row in enumerate(level.cells):
        for c, cell in enumerate(row):
            for rule in cell.violations():
                out.append(Violation(r, c, rule))
    return out


def check_levels(levels: Sequence[Level], *, allow_empty: bool = False) -> list[Level]:
    """Input-validation helper: materialize, type-check, and rule-check levels."""
    levels = list(levels)
    if not levels and not allow_empty:
        raise ValueError("expected at least one level")
    for i, level in enumerate(levels):
        if not isinstance(level, Level):
            raise TypeError(f"levels[{i}] is not a Level")
        bad = validate(level)
        if bad:
            raise ValueError(f"levels[{i}] is invalid: " + "; ".join(map(str, bad)))
    return levels


def check_raw_tensor(values) -> np.ndarray:
    """Input-validation helper for raw 9x9x6 generator output."""
    arr = np.asarray(values, dtype=float)
    if arr.shape != (SIZE, SIZE, N_LAYERS):
        raise ValueError(f"raw tensor must have shape {(SIZE, SIZE, N_LAYERS)}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("raw tensor contains non-finite values")
    return arr


#: Values at or below this never set a layer; comparison is strict.
THRESHOLD = 0.5


def postprocess(raw) -> Level:
    """Repair a raw 9x9x6 real-valued tensor into a valid level.

    Base layer: the highest of the first four values wins if it exceeds the
    threshold (ties go to the earlier layer); otherwise the cell is VOID.
    Jelly then requires a non-void cell, lock an item (regular/special/block).
    """
    arr = check_raw_tensor(raw)
    base = arr[:, :, :4]
    best = base.argmax(axis=2)  # first max wins: tie-break = layer order
    void = base.max(axis=2) <= THRESHOLD
    jelly = (arr[:, :, 4] > THRESHOLD) & ~void
    lock = (arr[:, :, 5] > THRESHOLD) & ~void & (best > 0)

    tiles = np.where(void, 0, 1 << best)
    tiles = tiles | (jelly << 4) | (lock << 5)
    return Level.from_tiles(tiles.tolist())


def level_to_tensor(level: Level) -> np.ndarray:
    """Embed a level as a 0/1 tensor (the fixed point of `postprocess`)."""
    return np.array(
        [[cell.flags() for cell in row] for row in level.cells], dtype=float
    )


def _mirror_coord(axis: str, r: int, c: int) -> tuple[int, int]:
    if axis == "vertical":
        return r, SIZE - 1 - c
    if axis == "horizontal":
        return SIZE - 1 - r, c
    raise ValueError(f"unknown mirror axis {axis!r}")


def mirror_complete(level: Level, axis: str) -> Level:
    """Overwrite the far half with the mirror of the near half.

    axis="vertical" copies columns 3..0 onto 5..8 (column 4 untouched);
    axis="horizontal" is the analog over rows. The result is perfectly
    symmetric along the chosen axis.
    """
    grid = [list(row) for row in level.cells]
    for r in range(SIZE):
        for c in range(SIZE):
            mr, mc = _mirror_coord(axis, r, c)
            if (mr, mc) > (r, c):
                grid[mr][mc] = grid[r][c]
    return Level.from_rows(grid)

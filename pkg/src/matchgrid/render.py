"""Deterministic level rendering: fixed-width glyph grids and simple SVG.

Text legend (three characters per cell: base, jelly mark, lock mark):
  base   '.' void   '_' empty   'o' regular   '*' special   '#' block
  jelly  'j' when present, '-' otherwise
  lock   'L' when present, '-' otherwise
"""

from __future__ import annotations

from .board import SIZE, CellState, Level

_BASE_GLYPHS = (
    ("block", "#"),
    ("special", "*"),
    ("regular", "o"),
    ("shape", "_"),
)

_BASE_COLORS = {
    ".": "#ffffff",
    "_": "#e8e4da",
    "o": "#53a356",
    "*": "#e2a93b",
    "#": "#6b4f3a",
}

CELL_PX = 24


def _base_glyph(cell: CellState) -> str:
    for name, glyph in _BASE_GLYPHS:
        if getattr(cell, name):
            return glyph
    return "."


def cell_glyphs(cell: CellState) -> str:
    return _base_glyph(cell) + ("j" if cell.jelly else "-") + ("L" if cell.lock else "-")


def render_text(level: Level) -> str:
    """One 3-glyph cell per column, space separated, one row per line."""
    return "\n".join(
        " ".join(cell_glyphs(cell) for cell in row) for row in level.cells
    ) + "\n"


def render_svg(level: Level) -> str:
    """Colored squares with a jelly disc and a lock outline as overlays."""
    side = SIZE * CELL_PX
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{side}" height="{side}" '
        f'viewBox="0 0 {side} {side}">',
        f'<rect width="{side}" height="{side}" fill="#fafafa"/>',
    ]
    for r, row in enumerate(level.cells):
        for c, cell in enumerate(row):
            x, y = c * CELL_PX, r * CELL_PX
            fill = _BASE_COLORS[_base_glyph(cell)]
            parts.append(
                f'<rect x="{x}" y="{y}" width="{CELL_PX}" height="{CELL_PX}" '
                f'fill="{fill}" stroke="#999999" stroke-width="1"/>'
            )
            if cell.jelly:
                parts.append(
                    f'<circle cx="{x + CELL_PX // 2}" cy="{y + CELL_PX // 2}" '
                    f'r="{CELL_PX // 4}" fill="#4d7fd1" fill-opacity="0.65"/>'
                )
            if cell.lock:
                pad = CELL_PX // 6
                parts.append(
                    f'<rect x="{x + pad}" y="{y + pad}" width="{CELL_PX - 2 * pad}" '
                    f'height="{CELL_PX - 2 * pad}" fill="none" stroke="#222222" '
                    f'stroke-width="2"/>'
                )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matchgrid.board import (
    BORDER,
    SELF,
    EXPAND_TABLE,
    VALID_TILE_IDS,
    CellState,
    Level,
    collapse,
    expand,
    level_to_tensor,
    mirror_complete,
    postprocess,
    validate,
)
from matchgrid.metrics import horizontal_symmetry, vertical_symmetry

from conftest import random_valid_level, random_valid_levels


def brute_force_valid_tiles() -> list[int]:
    """Independent enumeration of all 64 bit patterns against the rules."""
    valid = []
    for t in range(64):
        shape, regular, special, block = t & 1, t >> 1 & 1, t >> 2 & 1, t >> 3 & 1
        jelly, lock = t >> 4 & 1, t >> 5 & 1
        first_four = shape + regular + special + block
        if first_four > 1:
            continue
        if jelly and first_four == 0:
            continue
        if lock and (regular + special + block) != 1:
            continue
        valid.append(t)
    return valid


class TestTileIds:
    def test_valid_set_matches_brute_force(self):
        assert list(VALID_TILE_IDS) == brute_force_valid_tiles()
        assert len(VALID_TILE_IDS) == 15

    def test_round_trip_identity(self):
        for t in VALID_TILE_IDS:
            assert collapse(expand(t)) == t

    def test_expand_collapse_is_bijection(self):
        cells = {expand(t) for t in VALID_TILE_IDS}
        assert len(cells) == len(VALID_TILE_IDS)
        for cell in cells:
            assert expand(collapse(cell)) == cell

    def test_all_unset_is_zero(self):
        assert collapse(CellState()) == 0

    def test_bit_layout(self):
        assert collapse(CellState(block=True, jelly=True)) == (1 << 3) | (1 << 4)
        assert collapse(CellState(shape=True)) == 1
        assert collapse(CellState(regular=True, lock=True)) == (1 << 1) | (1 << 5)

    @pytest.mark.parametrize("bad", [BORDER, SELF, 3, 16, 33, -1, 66])
    def test_expand_rejects_invalid(self, bad):
        with pytest.raises(ValueError):
            expand(bad)

    def test_expand_table_covers_exactly_valid_ids(self):
        assert sorted(EXPAND_TABLE) == sorted(VALID_TILE_IDS)


class TestValidate:
    def test_all_void_board_is_valid(self):
        assert validate(Level.void()) == []

    def test_first_four_coexistence(self):
        grid = [list(row) for row in Level.void().cells]
        grid[2][3] = CellState(regular=True, block=True)
        violations = validate(Level.from_rows(grid))
        assert len(violations) == 1
        v = violations[0]
        assert (v.row, v.col, v.rule) == (2, 3, "first_four_coexistence")

    def test_lock_on_shape_only_cell(self):
        grid = [list(row) for row in Level.void().cells]
        grid[5][5] = CellState(shape=True, lock=True)
        violations = validate(Level.from_rows(grid))
        assert [v.rule for v in violations] == ["lock_on_empty"]

    def test_jelly_on_void(self):
        grid = [list(row) for row in Level.void().cells]
        grid[0][8] = CellState(jelly=True)
        assert [v.rule for v in validate(Level.from_rows(grid))] == ["jelly_on_void"]

    def test_wrong_dimensions_rejected(self):
        with pytest.raises(ValueError):
            Level(tuple((CellState(),) * 9 for _ in range(8)))
        with pytest.raises(ValueError):
            Level(tuple((CellState(),) * 8 for _ in range(9)))


def tensor_with(cell_values, at=(0, 0)):
    raw = np.zeros((9, 9, 6))
    raw[at[0], at[1], :] = cell_values
    return raw


class TestPostprocess:
    def test_clear_winner_above_threshold(self):
        level = postprocess(tensor_with([0.9, 0.2, 0.1, 0.3, 0.0, 0.0]))
        assert level.cells[0][0] == CellState(shape=True)

    def test_all_below_threshold_is_void_and_suppresses_overlays(self):
        level = postprocess(tensor_with([0.4, 0.5, 0.3, 0.2, 0.9, 0.9]))
        assert level.cells[0][0] == CellState()

    def test_tie_broken_by_layer_order_and_lock_kept(self):
        level = postprocess(tensor_with([0.1, 0.8, 0.2, 0.8, 0.0, 0.7]))
        assert level.cells[0][0] == CellState(regular=True, lock=True)

    def test_jelly_needs_non_void(self):
        level = postprocess(tensor_with([0.9, 0.0, 0.0, 0.0, 0.8, 0.0]))
        assert level.cells[0][0] == CellState(shape=True, jelly=True)

    def test_lock_needs_item_not_just_shape(self):
        level = postprocess(tensor_with([0.9, 0.0, 0.0, 0.0, 0.0, 0.9]))
        assert level.cells[0][0] == CellState(shape=True)

    def test_exact_threshold_does_not_count(self):
        level = postprocess(tensor_with([0.5, 0.5, 0.5, 0.5, 0.5, 0.5]))
        assert level.cells[0][0] == CellState()

    def test_malformed_dimensions_rejected(self):
        with pytest.raises(ValueError):
            postprocess(np.zeros((9, 9, 5)))
        with pytest.raises(ValueError):
            postprocess(np.zeros((8, 9, 6)))

    def test_non_finite_rejected(self):
        raw = np.zeros((9, 9, 6))
        raw[1, 1, 1] = np.nan
        with pytest.raises(ValueError):
            postprocess(raw)

    def test_totality_on_random_tensors(self):
        rng = np.random.default_rng(7)
        for _ in range(500):
            raw = rng.uniform(-1.0, 2.0, size=(9, 9, 6))
            assert validate(postprocess(raw)) == []

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=50, deadline=None)
    def test_totality_property(self, seed):
        raw = np.random.default_rng(seed).normal(scale=3.0, size=(9, 9, 6))
        assert validate(postprocess(raw)) == []

    def test_idempotent_through_tensor_embedding(self):
        rng = np.random.default_rng(21)
        for _ in range(50):
            level = postprocess(rng.uniform(-1.0, 2.0, size=(9, 9, 6)))
            assert postprocess(level_to_tensor(level)) == level

    def test_valid_levels_are_fixed_points(self, rng):
        for _ in range(50):
            level = random_valid_level(rng)
            assert postprocess(level_to_tensor(level)) == level


class TestMirrorComplete:
    def test_vertical_symmetry_is_exactly_one(self):
        for level in random_valid_levels(50, seed=5):
            mirrored = mirror_complete(level, "vertical")
            assert vertical_symmetry(mirrored) == 1.0
            assert validate(mirrored) == []

    def test_horizontal_symmetry_is_exactly_one(self):
        for level in random_valid_levels(20, seed=6):
            mirrored = mirror_complete(level, "horizontal")
            assert horizontal_symmetry(mirrored) == 1.0

    def test_idempotent(self):
        for level in random_valid_levels(20, seed=8):
            once = mirror_complete(level, "vertical")
            assert mirror_complete(once, "vertical") == once

    def test_left_half_and_axis_untouched(self, rng):
        level = random_valid_level(rng)
        mirrored = mirror_complete(level, "vertical")
        for r in range(9):
            for c in range(5):
                assert mirrored.cells[r][c] == level.cells[r][c]
            for c in range(5, 9):
                assert mirrored.cells[r][c] == level.cells[r][8 - c]

    def test_unknown_axis_rejected(self, rng):
        with pytest.raises(ValueError):
            mirror_complete(random_valid_level(rng), "diagonal")

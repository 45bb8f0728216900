import pytest

from matchgrid.board import Level
from matchgrid.metrics import (
    cluster_score,
    diagonal_symmetry,
    horizontal_symmetry,
    level_metrics,
    report,
    select_by_quantile,
    summarize,
    vertical_symmetry,
)

from conftest import (
    level_with,
    oracle_cluster,
    oracle_diagonal,
    oracle_horizontal,
    oracle_single_diagonal,
    oracle_vertical,
    random_valid_level,
    random_valid_levels,
    reflect,
)

BLOCK = 8
LOCKED_REGULAR = 34


class TestSymmetryScores:
    def test_all_void_board_scores_one(self):
        level = Level.void()
        assert vertical_symmetry(level) == 1.0
        assert horizontal_symmetry(level) == 1.0
        assert diagonal_symmetry(level) == 1.0

    def test_single_block_corner_fixture(self):
        level = level_with({(0, 0): BLOCK})
        # confirmed by the independent oracle, then pinned
        assert oracle_vertical(level) == 79 / 81
        assert oracle_horizontal(level) == 79 / 81
        assert oracle_diagonal(level) == 1.0
        assert vertical_symmetry(level) == 79 / 81
        assert horizontal_symmetry(level) == 79 / 81
        assert diagonal_symmetry(level) == 1.0

    def test_single_block_off_diagonal_fixture(self):
        level = level_with({(0, 1): BLOCK})
        assert oracle_diagonal(level) == 80 / 81
        assert diagonal_symmetry(level) == 80 / 81

    def test_matches_oracle_exactly_on_random_levels(self):
        for level in random_valid_levels(300, seed=17):
            assert vertical_symmetry(level) == oracle_vertical(level)
            assert horizontal_symmetry(level) == oracle_horizontal(level)
            assert diagonal_symmetry(level) == oracle_diagonal(level)

    def test_invariant_under_corresponding_reflection(self, rng):
        for _ in range(50):
            level = random_valid_level(rng)
            assert vertical_symmetry(reflect(level, "vertical")) == vertical_symmetry(level)
            assert horizontal_symmetry(reflect(level, "horizontal")) == horizontal_symmetry(level)

    def test_diagonal_or_is_at_least_each_single_diagonal(self, rng):
        for _ in range(100):
            level = random_valid_level(rng)
            both = diagonal_symmetry(level)
            assert both >= oracle_single_diagonal(level, "main")
            assert both >= oracle_single_diagonal(level, "anti")

    def test_scores_in_unit_interval(self, rng):
        for _ in range(50):
            level = random_valid_level(rng)
            for score in (vertical_symmetry(level), horizontal_symmetry(level),
                          diagonal_symmetry(level)):
                assert 0.0 <= score <= 1.0


class TestClusterScore:
    def test_isolated_lock_scores_zero(self):
        assert cluster_score(level_with({(4, 4): LOCKED_REGULAR})) == 0.0

    def test_adjacent_locks_score_one(self):
        level = level_with({(4, 4): LOCKED_REGULAR, (4, 5): LOCKED_REGULAR})
        assert cluster_score(level) == 1.0

    def test_no_flagged_cells_is_vacuously_one(self):
        assert cluster_score(Level.void()) == 1.0

    def test_block_next_to_lock_counts(self):
        level = level_with({(0, 0): BLOCK, (1, 0): LOCKED_REGULAR})
        assert cluster_score(level) == 1.0

    def test_category_subset(self):
        level = level_with({(0, 0): BLOCK, (0, 1): BLOCK, (8, 8): LOCKED_REGULAR})
        assert cluster_score(level, {"block"}) == 1.0
        assert cluster_score(level, {"lock"}) == 0.0

    def test_unknown_category_rejected(self):
        with pytest.raises(ValueError):
            cluster_score(Level.void(), {"jelly"})

    def test_matches_oracle_on_random_levels(self, rng):
        for _ in range(100):
            level = random_valid_level(rng)
            assert cluster_score(level) == oracle_cluster(level)


class TestSelectByQuantile:
    def _levels_with_vertical_scores(self):
        # left-edge wall (1/3), two stray blocks (~0.95), void board (1.0)
        low = Level.from_tiles(
            [[BLOCK if c < 3 else 0 for c in range(9)] for _ in range(9)]
        )
        mid = level_with({(0, 0): BLOCK, (1, 0): BLOCK})
        top = Level.void()
        return [low, mid, top]

    def test_ordered_picks(self):
        levels = self._levels_with_vertical_scores()
        scores = [vertical_symmetry(lv) for lv in levels]
        assert scores[0] < scores[1] < scores[2]
        picks = select_by_quantile(levels, "vertical")
        assert [p.pick for p in picks] == ["min", "median", "max"]
        assert [p.index for p in picks] == [0, 1, 2]
        assert picks[2].score == 1.0

    def test_all_equal_ties_resolve_to_lowest_index(self):
        levels = [Level.void()] * 5
        picks = {p.pick: p.index for p in select_by_quantile(levels, "vertical")}
        assert picks == {"min": 0, "median": 2, "max": 0}

    def test_median_is_lower_middle_of_sorted_order(self):
        levels = self._levels_with_vertical_scores() + [Level.void()]
        picks = {p.pick: p for p in select_by_quantile(levels, "vertical")}
        # sorted scores: [low, mid, 1.0, 1.0] -> median index floor(3/2)=1 -> mid
        assert picks["median"].index == 1
        # max tie between indices 2 and 3 -> lowest original index
        assert picks["max"].index == 2

    def test_empty_set_rejected(self):
        with pytest.raises(ValueError):
            select_by_quantile([], "vertical")

    def test_unknown_metric_and_picks_rejected(self):
        with pytest.raises(ValueError):
            select_by_quantile([Level.void()], "cluster")
        with pytest.raises(ValueError):
            select_by_quantile([Level.void()], "vertical", picks=["p99"])

    def test_subset_of_picks(self):
        picks = select_by_quantile([Level.void()], "vertical", picks=["max"])
        assert len(picks) == 1 and picks[0].pick == "max"


class TestReport:
    def test_aggregates_recomputable_from_per_level(self):
        levels = random_valid_levels(40, seed=23)
        rep = report(levels)
        assert len(rep.per_level) == 40
        for name in ("vertical", "horizontal", "diagonal", "cluster"):
            values = [getattr(m, name) for m in rep.per_level]
            assert rep.aggregates[name] == summarize(values)

    def test_summary_five_numbers(self):
        s = summarize([0.0, 0.25, 0.5, 0.75, 1.0])
        assert (s.min, s.q1, s.median, s.q3, s.max) == (0.0, 0.25, 0.5, 0.75, 1.0)
        assert s.mean == 0.5

    def test_fully_mirrored_set_has_median_one(self):
        from matchgrid.synthesis import CorpusSpec, synthesize

        levels = synthesize(CorpusSpec(count=30, seed=1, symmetry="vertical", strength=1.0))
        rep = report(levels)
        assert rep.aggregates["vertical"].median == 1.0

    def test_per_level_matches_level_metrics(self, rng):
        level = random_valid_level(rng)
        rep = report([level])
        assert rep.per_level[0] == level_metrics(level)

    def test_empty_set_rejected(self):
        with pytest.raises(ValueError):
            report([])

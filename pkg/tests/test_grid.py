"""Grid geometry: placement rule, slopes, moves, and checker agreement."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spotit.grid import (
    VERTICAL,
    Grid,
    Move,
    MoveKind,
    apply_move,
    col_common_image,
    counterdiagonal_image,
    diagonal_image,
    image_positions,
    line_violations,
    row_common_image,
    rule_check,
    slope_of_image,
    third_position,
)
from spotit.plane import generate_plane, remove_image_set


def canonical_identity_grid(n):
    """Cell (r, c) holds affine card (r, c) of the canonical deck."""
    deck = generate_plane(n)
    affine, _ = remove_image_set(deck, n * n + n)
    by_id = {c.id: c for c in affine}
    cells = tuple(tuple(by_id[r * n + c] for c in range(n)) for r in range(n))
    return Grid(deck.order, cells)


def shuffled_grid(n, rng):
    deck = generate_plane(n)
    affine, _ = remove_image_set(deck, n * n + n)
    rng.shuffle(affine)
    cells = tuple(tuple(affine[r * n + c] for c in range(n)) for r in range(n))
    return Grid(deck.order, cells)


class TestThirdPosition:
    def test_placement_formula_n7(self):
        assert third_position((1, 2), (3, 3), 7) == (5, 4)

    def test_wraparound(self):
        assert third_position((6, 6), (0, 0), 7) == (1, 1)

    def test_n3_diagonal(self):
        assert third_position((0, 0), (1, 1), 3) == (2, 2)

    def test_rejects_equal(self):
        with pytest.raises(ValueError):
            third_position((1, 1), (1, 1), 7)

    @given(st.sampled_from([3, 5, 7]), st.data())
    def test_stays_on_the_line(self, n, data):
        p1 = (data.draw(st.integers(0, n - 1)), data.draw(st.integers(0, n - 1)))
        p2 = (data.draw(st.integers(0, n - 1)), data.draw(st.integers(0, n - 1)))
        if p1 == p2:
            return
        t = third_position(p1, p2, n)
        h = ((p2[0] - p1[0]) % n, (p2[1] - p1[1]) % n)
        assert t == ((p2[0] + h[0]) % n, (p2[1] + h[1]) % n)
        assert t not in (p1, p2)


class TestRuleCheck:
    @pytest.mark.parametrize("n", [2, 3, 5])
    def test_canonical_identity_grid_solved(self, n):
        assert rule_check(canonical_identity_grid(n)) == []

    def test_swapping_two_cards_breaks_it(self):
        rng = random.Random(7)
        grid = canonical_identity_grid(3)
        for _ in range(20):
            cells = [list(row) for row in grid.cells]
            (r1, c1), (r2, c2) = rng.sample(grid.positions(), 2)
            cells[r1][c1], cells[r2][c2] = cells[r2][c2], cells[r1][c1]
            assert rule_check(Grid(grid.order, tuple(map(tuple, cells)))) != []

    def test_solved_grid_rows_and_cols_share_images(self, solved7):
        for i in range(7):
            assert row_common_image(solved7, i) is not None
            assert col_common_image(solved7, i) is not None

    def test_violations_carry_context(self):
        rng = random.Random(1)
        grid = shuffled_grid(3, rng)
        bad = rule_check(grid)
        assert bad
        v = bad[0]
        assert v.third == third_position(v.pos_a, v.pos_b, 3)
        assert v.message()


class TestCheckerAgreement:
    def test_line_checker_agrees_on_1000_random_grids(self, solved3, solved7):
        rng = random.Random(2024)
        grids = []
        for _ in range(600):
            grids.append(shuffled_grid(3, rng))
        for _ in range(200):
            grids.append(shuffled_grid(5, rng))
        for _ in range(198):
            base = solved3 if rng.random() < 0.7 else solved7
            n = base.n
            grid = base
            for _ in range(rng.randrange(4)):
                kind = rng.choice(list(MoveKind))
                i, j = rng.sample(range(n), 2)
                if kind is MoveKind.BALANCED and (i == (n - 1) // 2) != (j == (n - 1) // 2):
                    continue
                grid = apply_move(grid, Move(kind, i, j))
            grids.append(grid)
        grids.append(solved3)
        grids.append(solved7)
        assert len(grids) == 1000
        for grid in grids:
            assert (rule_check(grid) == []) == (line_violations(grid) == [])


class TestImagePositions:
    def test_canonical_diagonal_image(self):
        grid = canonical_identity_grid(3)
        assert image_positions(grid, 3) == [(0, 0), (1, 1), (2, 2)]

    def test_affine_images_have_n_positions(self, solved7):
        for img in {i for row in solved7.cells for c in row for i in c.images}:
            assert len(image_positions(solved7, img)) == 7

    def test_absent_image_empty(self, solved3):
        present = {i for row in solved3.cells for c in row for i in c.images}
        absent = next(i for i in range(13) if i not in present)
        assert image_positions(solved3, absent) == []


class TestSlopes:
    def test_canonical_fixtures(self):
        grid = canonical_identity_grid(3)
        assert slope_of_image(grid, 9) == 0        # full row 0
        assert slope_of_image(grid, 3) == 1        # main diagonal
        assert slope_of_image(grid, 8) == 2        # counterdiagonal, n-1
        assert slope_of_image(grid, 0) == VERTICAL # full column 0

    def test_scrambled_images_mostly_lineless(self):
        rng = random.Random(3)
        grid = shuffled_grid(5, rng)
        present = sorted({i for row in grid.cells for c in row for i in c.images})
        slopes = [slope_of_image(grid, i) for i in present]
        assert slopes.count(None) > len(slopes) // 2

    def test_solved_grid_has_exactly_n_plus_1_slopes(self, solved7):
        present = sorted({i for row in solved7.cells for c in row for i in c.images})
        slopes = {slope_of_image(solved7, i) for i in present}
        assert None not in slopes
        assert len(slopes) == 8

    def test_parallel_classes_tile_the_grid(self, solved7):
        present = sorted({i for row in solved7.cells for c in row for i in c.images})
        by_slope = {}
        for img in present:
            by_slope.setdefault(slope_of_image(solved7, img), []).append(img)
        for slope, imgs in by_slope.items():
            assert len(imgs) == 7
            covered = []
            for img in imgs:
                covered.extend(image_positions(solved7, img))
            assert len(covered) == 49
            assert len(set(covered)) == 49


class TestMoves:
    def test_move_rejects_equal_indices(self):
        with pytest.raises(ValueError):
            Move(MoveKind.SWAP_ROWS, 2, 2)

    def test_apply_rejects_out_of_range(self, solved3):
        with pytest.raises(ValueError):
            apply_move(solved3, Move(MoveKind.SWAP_ROWS, 0, 5))

    @given(st.sampled_from(list(MoveKind)), st.data())
    @settings(max_examples=40)
    def test_moves_are_involutions(self, kind, data):
        grid = canonical_identity_grid(5)
        i = data.draw(st.integers(0, 4))
        j = data.draw(st.integers(0, 4))
        if i == j:
            return
        if kind is MoveKind.BALANCED and (i == 2) != (j == 2):
            return  # rejected: touches the frozen middle
        move = Move(kind, i, j)
        assert apply_move(apply_move(grid, move), move) == grid

    def test_multiset_of_cards_unchanged(self, solved7):
        move = Move(MoveKind.BALANCED, 1, 2)
        after = apply_move(solved7, move)
        before_ids = sorted(c.id for row in solved7.cells for c in row)
        after_ids = sorted(c.id for row in after.cells for c in row)
        assert before_ids == after_ids

    def test_paired_preserves_diagonal_image(self, solved7):
        rng = random.Random(11)
        grid = solved7
        d = diagonal_image(grid)
        assert d is not None
        for _ in range(50):
            i, j = rng.sample(range(7), 2)
            grid = apply_move(grid, Move(MoveKind.PAIRED, i, j))
            assert diagonal_image(grid) == d

    def test_balanced_preserves_both_diagonals(self, solved7):
        rng = random.Random(12)
        grid = solved7
        d = diagonal_image(grid)
        cd = counterdiagonal_image(grid)
        assert d is not None and cd is not None
        count = 0
        while count < 50:
            i, j = rng.sample(range(7), 2)
            if (i == 3) != (j == 3):
                with pytest.raises(ValueError):
                    apply_move(grid, Move(MoveKind.BALANCED, i, j))
                continue
            grid = apply_move(grid, Move(MoveKind.BALANCED, i, j))
            assert diagonal_image(grid) == d
            assert counterdiagonal_image(grid) == cd
            count += 1

    def test_balanced_self_mirror_pair_is_single_paired(self, solved7):
        # {2, 4} mirrors onto itself at n=7
        balanced = apply_move(solved7, Move(MoveKind.BALANCED, 2, 4))
        paired = apply_move(solved7, Move(MoveKind.PAIRED, 2, 4))
        assert balanced == paired

    def test_paired_equals_row_then_col_swap(self, solved7):
        via_paired = apply_move(solved7, Move(MoveKind.PAIRED, 0, 3))
        via_two = apply_move(
            apply_move(solved7, Move(MoveKind.SWAP_ROWS, 0, 3)),
            Move(MoveKind.SWAP_COLS, 0, 3))
        assert via_paired == via_two

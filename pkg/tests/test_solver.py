"""Solver stages, counting claims, and the brute-force oracle."""

import random

import pytest

from spotit.grid import (
    Grid,
    Move,
    MoveKind,
    apply_move,
    col_common_image,
    counterdiagonal_image,
    diagonal_image,
    image_positions,
    row_common_image,
    rule_check,
)
from spotit.plane import Card, Deck, generate_plane, relabel_shuffle, remove_image_set
from spotit.solver import (
    AxisChoice,
    Pairing,
    SolveError,
    brute_force_solve,
    choose_infinity,
    count_paired_orbit,
    count_residual_orbit,
    diagonalize,
    enumerate_pairings,
    find_counterdiagonal,
    finish,
    initial_grid,
    nest_squares,
    residual_group_size,
    setup_choice_count,
    solve,
)


def setup_grid(deck):
    """Canonical axes: lowest infinity image, two lowest-id infinity cards."""
    inf = choose_infinity(deck)
    affine, infinity_cards = remove_image_set(deck, inf)
    infinity_cards.sort(key=lambda c: c.id)
    return initial_grid(affine, AxisChoice(inf, infinity_cards[0], infinity_cards[1]))


def diagonalized_grid(deck):
    grid, _ = diagonalize(setup_grid(deck))
    return grid


def grid_ids(grid):
    return tuple(tuple(c.id for c in row) for row in grid.cells)


class TestChooseInfinity:
    def test_complete_deck_lowest_image(self, deck7):
        assert choose_infinity(deck7) == 0

    def test_two_missing_picks_deficient_image(self, deck7):
        partial = Deck(deck7.order, deck7.cards[2:])
        shared = deck7.cards[0].images & deck7.cards[1].images
        assert choose_infinity(partial) == next(iter(shared))

    def test_relabeled_deck_uses_post_relabel_ids(self, deck7):
        shuffled = relabel_shuffle(deck7, 13)
        assert choose_infinity(shuffled) == min(shuffled.images())

    def test_other_shapes_rejected(self, deck7):
        with pytest.raises(SolveError, match="cards"):
            choose_infinity(Deck(deck7.order, deck7.cards[1:]))


class TestAxisChoice:
    def test_validates_infinity_membership(self, deck7):
        affine, infinity = remove_image_set(deck7, 0)
        with pytest.raises(ValueError, match="infinity"):
            AxisChoice(0, infinity[0], affine[0])
        with pytest.raises(ValueError, match="differ"):
            AxisChoice(0, infinity[0], infinity[0])


class TestInitialGrid:
    @pytest.mark.parametrize("n", [3, 5, 7])
    def test_rows_and_cols_share_images(self, n):
        grid = setup_grid(generate_plane(n))
        for i in range(n):
            assert row_common_image(grid, i) is not None
            assert col_common_image(grid, i) is not None

    def test_every_setup_choice_builds_n3(self, deck3):
        # all 13 * 4 * 3 (infinity, row, col) choices produce a valid grid;
        # with the 3! * 3! orderings that is 13*4*3*6*6 = 5616 setups
        built = 0
        for inf in sorted(deck3.images()):
            affine, infinity_cards = remove_image_set(deck3, inf)
            for row_card in infinity_cards:
                for col_card in infinity_cards:
                    if row_card.id == col_card.id:
                        continue
                    grid = initial_grid(affine, AxisChoice(inf, row_card, col_card))
                    assert row_common_image(grid, 0) is not None
                    built += 1
        assert built == 13 * 4 * 3
        assert setup_choice_count(3) == built * 6 * 6 == 5616

    def test_setup_count_n7_matches_factor_product(self):
        assert setup_choice_count(7) == 57 * 8 * 7 * 5040 * 5040 == 81_081_907_200

    def test_corrupt_input_rejected(self, deck3):
        affine, infinity_cards = remove_image_set(deck3, 0)
        broken = affine[:-1] + [Card(99, affine[0].images)]
        with pytest.raises(SolveError, match="corrupt"):
            initial_grid(broken, AxisChoice(0, infinity_cards[0], infinity_cards[1]))


class TestDiagonalize:
    def test_fixed_point(self, deck7):
        grid = diagonalized_grid(deck7)
        again, log = diagonalize(grid)
        assert again == grid and log == []

    def test_canonical_n3_identity_grid_diagonal_is_3(self, deck3):
        affine, _ = remove_image_set(deck3, 12)
        by_id = {c.id: c for c in affine}
        identity = Grid(deck3.order, tuple(
            tuple(by_id[r * 3 + c] for c in range(3)) for r in range(3)))
        out, log = diagonalize(identity)
        assert diagonal_image(out) == 3
        assert log == []

    @pytest.mark.parametrize("n", [3, 5, 7])
    def test_diagonal_set_and_properties(self, n):
        deck = generate_plane(n)
        grid = setup_grid(deck)
        out, log = diagonalize(grid)
        d = diagonal_image(out)
        assert d is not None
        assert set(image_positions(out, d)) == {(i, i) for i in range(n)}
        # d is on the (0,0) card and is neither the row-0 nor column-0 image
        assert d in out.at((0, 0)).images
        assert d != row_common_image(out, 0)
        assert d != col_common_image(out, 0)
        # only row/col swaps in the log, and rows/cols keep common images
        assert all(e.move.kind in (MoveKind.SWAP_ROWS, MoveKind.SWAP_COLS) for e in log)
        for i in range(n):
            assert row_common_image(out, i) is not None
            assert col_common_image(out, i) is not None

    def test_shuffled_setups_diagonalize(self, deck7):
        for seed in range(5):
            grid = setup_grid(relabel_shuffle(deck7, seed))
            out, _ = diagonalize(grid)
            assert diagonal_image(out) is not None


class TestFindCounterdiagonal:
    def test_n3_fixture(self, deck3):
        affine, _ = remove_image_set(deck3, 12)
        by_id = {c.id: c for c in affine}
        identity = Grid(deck3.order, tuple(
            tuple(by_id[r * 3 + c] for c in range(3)) for r in range(3)))
        img, pairing = find_counterdiagonal(identity)
        assert img == 8
        assert pairing.pairs == ((0, 2),)

    def test_n7_pool_of_five(self, deck7):
        grid = diagonalized_grid(deck7)
        mid = 3
        pool = grid.at((mid, mid)).images - {
            row_common_image(grid, mid), col_common_image(grid, mid), diagonal_image(grid)}
        assert len(pool) == 5
        img, pairing = find_counterdiagonal(grid)
        assert img in pool
        assert len(pairing.pairs) == 3

    def test_invariant_under_paired_scrambles(self, deck7):
        grid = diagonalized_grid(deck7)
        img, _ = find_counterdiagonal(grid)
        rng = random.Random(5)
        scrambled = grid
        for _ in range(100):
            i, j = rng.sample([0, 1, 2, 4, 5, 6], 2)
            scrambled = apply_move(scrambled, Move(MoveKind.PAIRED, i, j))
        img2, _ = find_counterdiagonal(scrambled)
        assert img2 == img

    def test_requires_diagonal(self, deck7):
        grid = setup_grid(deck7)
        if diagonal_image(grid) is None:
            with pytest.raises(SolveError, match="diagonal"):
                find_counterdiagonal(grid)

    def test_transpose_symmetry_conjugates_under_any_paired_swap(self, deck7):
        grid = diagonalized_grid(deck7)
        img, _ = find_counterdiagonal(grid)
        pos = set(image_positions(grid, img))
        assert all((c, r) in pos for r, c in pos)
        moved = apply_move(grid, Move(MoveKind.PAIRED, 0, 3))  # moves the middle
        pos2 = set(image_positions(moved, img))
        assert all((c, r) in pos2 for r, c in pos2)


class TestEnumeratePairings:
    def test_counts(self):
        assert len(enumerate_pairings(2)) == 1
        assert len(enumerate_pairings(4)) == 3
        assert len(enumerate_pairings(6)) == 15
        assert len(enumerate_pairings(8)) == 105

    def test_double_factorial_growth(self):
        for m in (2, 4, 6, 8, 10):
            want = 1
            for k in range(m - 1, 0, -2):
                want *= k
            assert len(enumerate_pairings(m)) == want

    def test_all_distinct_perfect_matchings(self):
        ps = enumerate_pairings(6)
        assert len({p.pairs for p in ps}) == 15
        for p in ps:
            assert p.elements() == list(range(6))

    def test_odd_rejected(self):
        with pytest.raises(ValueError, match="odd"):
            enumerate_pairings(5)

    def test_oversized_rejected(self):
        with pytest.raises(ValueError, match="bound"):
            enumerate_pairings(14)


class TestNestSquares:
    def test_already_nested_is_fixed_point(self, deck7):
        grid = diagonalized_grid(deck7)
        _, pairing = find_counterdiagonal(grid)
        nested, _ = nest_squares(grid, pairing)
        _, pairing2 = find_counterdiagonal(nested)
        again, log = nest_squares(nested, pairing2)
        assert again == nested and log == []

    def test_all_15_pairings_normalize(self, deck7):
        # realize each pairing by conjugating a nested grid, then nest back
        grid = diagonalized_grid(deck7)
        _, pairing = find_counterdiagonal(grid)
        nested, _ = nest_squares(grid, pairing)
        lift = {0: 0, 1: 1, 2: 2, 3: 4, 4: 5, 5: 6}  # matchings on 0..5 -> non-middle
        for abstract in enumerate_pairings(6):
            target = Pairing(tuple((lift[a], lift[b]) for a, b in abstract.pairs))
            sigma = list(range(7))
            for k, (a, b) in enumerate(target.pairs):
                sigma[k], sigma[6 - k] = a, b
            cells = [[None] * 7 for _ in range(7)]
            for r in range(7):
                for c in range(7):
                    cells[sigma[r]][sigma[c]] = nested.cells[r][c]
            scrambled = Grid(nested.order, tuple(tuple(row) for row in cells))
            img, found = find_counterdiagonal(scrambled)
            assert found.pairs == target.pairs
            out, log = nest_squares(scrambled, found)
            assert counterdiagonal_image(out) == img
            assert all(e.move.kind is MoveKind.PAIRED for e in log)
            assert diagonal_image(out) == diagonal_image(scrambled)

    def test_wrong_pairing_rejected(self, deck7):
        grid = diagonalized_grid(deck7)
        with pytest.raises(SolveError, match="non-middle"):
            nest_squares(grid, Pairing(((0, 1), (2, 3), (4, 5)),))


class TestFinish:
    def test_n3_residual_has_2_and_both_pass(self, deck3):
        grid = diagonalized_grid(deck3)
        _, pairing = find_counterdiagonal(grid)
        nested, _ = nest_squares(grid, pairing)
        size, solutions = count_residual_orbit(nested)
        assert (size, solutions) == (2, 2)

    def test_n7_residual_48_with_6_solutions(self, deck7):
        grid = diagonalized_grid(deck7)
        _, pairing = find_counterdiagonal(grid)
        nested, _ = nest_squares(grid, pairing)
        size, solutions = count_residual_orbit(nested)
        assert (size, solutions) == (48, 6)
        assert residual_group_size(7) == 48

    def test_solved_grid_is_fixed_point(self, solved7):
        out, log = finish(solved7)
        assert out == solved7 and log == []

    def test_moves_are_balanced_and_preserve_diagonals(self, deck7):
        for seed in (1, 2, 3):
            grid = diagonalized_grid(relabel_shuffle(deck7, seed))
            _, pairing = find_counterdiagonal(grid)
            nested, _ = nest_squares(grid, pairing)
            out, log = finish(nested)
            assert rule_check(out) == []
            assert all(e.move.kind is MoveKind.BALANCED for e in log)
            assert diagonal_image(out) == diagonal_image(nested)
            assert counterdiagonal_image(out) == counterdiagonal_image(nested)


class TestSolve:
    @pytest.mark.parametrize("n", [3, 5, 7])
    def test_round_trip_small(self, n):
        deck = generate_plane(n)
        for seed in range(5):
            grid, log, trace = solve(relabel_shuffle(deck, seed))
            assert rule_check(grid) == []
            assert [s.name for s in trace.stages] == ["setup", "diagonalize", "nest", "finish"]

    def test_replaying_log_reproduces_grid(self, deck7):
        grid, log, trace = solve(relabel_shuffle(deck7, 21))
        replay = trace.stages[0].grid
        for entry in log:
            replay = apply_move(replay, entry.move)
        assert replay == grid

    def test_two_missing_solves_without_reconstruction(self, deck7):
        partial = Deck(deck7.order, deck7.cards[2:])
        grid, _, trace = solve(partial)
        assert rule_check(grid) == []
        assert trace.infinity_image == choose_infinity(partial)

    def test_even_or_tiny_orders_rejected(self):
        with pytest.raises(SolveError, match="odd prime"):
            solve(generate_plane(2))

    def test_n3_matches_structure(self, deck3):
        grid, _, _ = solve(deck3)
        # 12 affine images each form a line of 3 cells
        present = {i for row in grid.cells for c in row for i in c.images}
        assert len(present) == 12
        for img in present:
            assert len(image_positions(grid, img)) == 3


class TestBruteForce:
    def test_n3_solution_count_and_consistency(self, deck3):
        sols = brute_force_solve(deck3)
        # with cell (0,0) pinned, solutions biject with GL(2,3): 48
        assert len(sols) == 48
        for g in sols:
            assert rule_check(g) == []
        assert len({grid_ids(g) for g in sols}) == 48

    def test_solve_output_in_brute_force_list(self, deck3):
        sols = {grid_ids(g) for g in brute_force_solve(deck3)}
        grid, _, _ = solve(deck3)
        # translate so the brute-force anchor card sits at (0,0)
        inf = min(deck3.images())
        affine, _ = remove_image_set(deck3, inf)
        anchor = min(affine, key=lambda c: c.id)
        (r0, c0), = [(r, c) for r in range(3) for c in range(3)
                     if grid.cells[r][c].id == anchor.id]
        shifted = tuple(
            tuple(grid.cells[(r + r0) % 3][(c + c0) % 3].id for c in range(3))
            for r in range(3))
        assert shifted in sols

    def test_corrupt_deck_yields_nothing(self, deck3):
        # duplicate an affine card (image 0's set stays intact as infinity)
        cards = list(deck3.cards)
        affine_ids = [c.id for c in cards if 0 not in c.images]
        a, b = affine_ids[0], affine_ids[1]
        victim = next(i for i, c in enumerate(cards) if c.id == a)
        donor = next(c for c in cards if c.id == b)
        cards[victim] = Card(a, donor.images)
        assert brute_force_solve(Deck(deck3.order, tuple(cards))) == []

    def test_n2_all_quotient_arrangements_solve(self):
        sols = brute_force_solve(generate_plane(2))
        # the third-position rule is vacuous mod 2: all 3! placements pass
        assert len(sols) == 6

    def test_large_order_rejected(self, deck5):
        with pytest.raises(SolveError, match="orders 2 and 3"):
            brute_force_solve(deck5)


class TestStageMonotonicity:
    def test_predicates_hold_after_every_emitted_move(self, deck7):
        for seed in (0, 4):
            deck = relabel_shuffle(deck7, seed)
            g0 = setup_grid(deck)
            g1, log1 = diagonalize(g0)
            grid = g0
            for entry in log1:
                grid = apply_move(grid, entry.move)
                for i in range(7):
                    assert row_common_image(grid, i) is not None
                    assert col_common_image(grid, i) is not None
            assert grid == g1

            d = diagonal_image(g1)
            _, pairing = find_counterdiagonal(g1)
            g2, log2 = nest_squares(g1, pairing)
            grid = g1
            for entry in log2:
                grid = apply_move(grid, entry.move)
                assert diagonal_image(grid) == d
            assert grid == g2

            cd = counterdiagonal_image(g2)
            g3, log3 = finish(g2)
            grid = g2
            for entry in log3:
                grid = apply_move(grid, entry.move)
                assert diagonal_image(grid) == d
                assert counterdiagonal_image(grid) == cd
            assert grid == g3


class TestCountPairedOrbit:
    def test_n3_orbit(self, deck3):
        grid = diagonalized_grid(deck3)
        assert count_paired_orbit(grid) == (2, 2)

    def test_orbit_equals_pairings_times_residual(self):
        assert len(enumerate_pairings(6)) * residual_group_size(7) == 720

    def test_requires_diagonalized(self, deck3):
        rng = random.Random(0)
        affine, _ = remove_image_set(deck3, 0)
        rng.shuffle(affine)
        grid = Grid(deck3.order, tuple(
            tuple(affine[r * 3 + c] for c in range(3)) for r in range(3)))
        if diagonal_image(grid) is None:
            with pytest.raises(SolveError, match="diagonalized"):
                count_paired_orbit(grid)

"""Staged solution of the grid puzzle, plus counting and brute-force oracles.

The pipeline mirrors how the puzzle is actually played: pick an infinity
image and two of its cards as axes, lay out the affine cards so rows and
columns share images, walk a transversal image onto the main diagonal with
row/column swaps, detect the unique transpose-symmetric image on the middle
card and nest its interlaced squares onto the counterdiagonal with paired
swaps, then search the small residual group of balanced arrangements for
the one rule-clean layout.

Every stage emits the moves it made, so a full run is replayable and each
intermediate grid can back a hint engine.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from math import isqrt

from .grid import (
    Grid,
    Move,
    MoveKind,
    apply_moves,
    col_common_image,
    counterdiagonal_image,
    diagonal_image,
    image_positions,
    line_directions,
    row_common_image,
    rule_check,
)
from .plane import Card, Deck, Order, remove_image_set
from .recovery import image_census


class SolveError(RuntimeError):
    """A solver stage could not proceed; the message says which and why."""


@dataclass(frozen=True)
class AxisChoice:
    """The infinity image plus the two infinity cards framing rows and columns."""

    infinity_image: int
    row_card: Card
    col_card: Card

    def __post_init__(self) -> None:
        if self.row_card.id == self.col_card.id:
            raise ValueError("row and column axis cards must differ")
        for card in (self.row_card, self.col_card):
            if self.infinity_image not in card.images:
                raise ValueError(
                    f"axis card {card.id} does not contain infinity image {self.infinity_image}")


@dataclass(frozen=True)
class Pairing:
    """A perfect matching, stored as (low, high) pairs sorted by low index."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        norm = tuple(sorted((min(a, b), max(a, b)) for a, b in self.pairs))
        seen: set[int] = set()
        for a, b in norm:
            if a == b:
                raise ValueError(f"pairing pairs an index with itself: {a}")
            if a in seen or b in seen:
                raise ValueError(f"pairing reuses an index in {norm}")
            seen.add(a)
            seen.add(b)
        object.__setattr__(self, "pairs", norm)

    def elements(self) -> list[int]:
        return sorted(i for pair in self.pairs for i in pair)


@dataclass(frozen=True)
class MoveLogEntry:
    stage: str
    move: Move


@dataclass(frozen=True)
class StageSnapshot:
    name: str
    grid: Grid
    moves: tuple[Move, ...]


@dataclass(frozen=True)
class SolveTrace:
    """Per-stage grids and choices, for hints and teaching output."""

    stages: tuple[StageSnapshot, ...]
    infinity_image: int
    axes: AxisChoice
    diagonal_image: int
    counterdiagonal_image: int
    pairing: Pairing


def choose_infinity(deck: Deck) -> int:
    """Pick the image whose card set gets removed before gridding.

    Complete deck: the lowest image id.  Deck missing exactly two cards:
    the doubly-deficient image, so the missing cards never need to be
    reconstructed.  Anything else is rejected.
    """
    n = deck.n
    full = deck.order.num_points
    count = len(deck.cards)
    if count == full:
        return min(deck.images())
    if count == full - 2:
        census = image_census(deck)
        doubly = census.images_at(n - 1)
        singly = census.images_at(n)
        if len(doubly) == 1 and len(singly) == 2 * n:
            return doubly[0]
        raise SolveError(
            f"census does not match a two-cards-missing deck: "
            f"{len(doubly)} images at {n - 1}, {len(singly)} at {n}")
    raise SolveError(
        f"deck has {count} cards; need a complete deck ({full}) or one missing two ({full - 2})")


def initial_grid(affine_cards, axes: AxisChoice) -> Grid:
    """Place the n^2 affine cards so each row and column shares an image.

    Cell (r, c) gets the unique card containing both the r-th non-infinity
    image of the row axis card and the c-th of the column axis card,
    images taken in ascending id order.
    """
    cards = list(affine_cards)
    n = isqrt(len(cards))
    if n * n != len(cards):
        raise SolveError(f"{len(cards)} affine cards is not a square count")
    order = Order(n)
    row_imgs = sorted(axes.row_card.images - {axes.infinity_image})
    col_imgs = sorted(axes.col_card.images - {axes.infinity_image})
    if len(row_imgs) != n or len(col_imgs) != n:
        raise SolveError("axis cards do not carry n parallel images each")
    row_index = {img: r for r, img in enumerate(row_imgs)}
    col_index = {img: c for c, img in enumerate(col_imgs)}

    cells: list[list[Card | None]] = [[None] * n for _ in range(n)]
    for card in cards:
        if axes.infinity_image in card.images:
            raise SolveError(f"card {card.id} carries the infinity image; it is not affine")
        rs = [row_index[i] for i in card.images if i in row_index]
        cs = [col_index[i] for i in card.images if i in col_index]
        if len(rs) != 1 or len(cs) != 1:
            raise SolveError(
                f"card {card.id} matches {len(rs)} row and {len(cs)} column images; deck corrupt")
        r, c = rs[0], cs[0]
        if cells[r][c] is not None:
            raise SolveError(
                f"cards {cells[r][c].id} and {card.id} both map to cell ({r},{c}); deck corrupt")
        cells[r][c] = card
    return Grid(order, tuple(tuple(row) for row in cells))


def diagonalize(grid: Grid) -> tuple[Grid, list[MoveLogEntry]]:
    """Walk one transversal image onto the main diagonal via column swaps.

    A grid that already has some image exactly on the diagonal is returned
    unchanged.  Otherwise the target is the lowest-id image on the (0,0)
    card that is neither the row-0 nor the column-0 common image; such an
    image appears once per row and once per column, so sorting columns
    suffices and the row/column common-image property survives untouched.
    """
    n = grid.n
    if diagonal_image(grid) is not None:
        return grid, []
    row0 = row_common_image(grid, 0)
    col0 = col_common_image(grid, 0)
    if row0 is None or col0 is None:
        raise SolveError("rows or columns lack common images; build the initial grid first")

    target = None
    by_row: dict[int, int] = {}
    for img in sorted(grid.at((0, 0)).images - {row0, col0}):
        pos = image_positions(grid, img)
        rows = sorted(r for r, _ in pos)
        cols = sorted(c for _, c in pos)
        if len(pos) == n and rows == list(range(n)) and cols == list(range(n)):
            target = img
            by_row = {r: c for r, c in pos}
            break
    if target is None:
        raise SolveError("no transversal image through cell (0,0); grid is not an affine setup")

    moves: list[Move] = []
    colpos = [by_row[r] for r in range(n)]
    for i in range(n):
        j = colpos[i]
        if j != i:
            moves.append(Move(MoveKind.SWAP_COLS, min(i, j), max(i, j)))
            colpos = [i if x == j else (j if x == i else x) for x in colpos]
    out = apply_moves(grid, moves)
    return out, [MoveLogEntry("diagonalize", m) for m in moves]


def find_counterdiagonal(grid: Grid) -> tuple[int, Pairing]:
    """Identify the forced counterdiagonal image and its index pairing.

    Of the middle card's images, drop the middle row's, the middle
    column's, and the diagonal image; among the rest exactly one has a
    transpose-symmetric position set.  Its off-diagonal positions pair the
    non-middle indices into the interlaced squares.
    """
    n = grid.n
    if n % 2 == 0:
        raise SolveError("counterdiagonal detection needs an odd order")
    mid = (n - 1) // 2
    diag = diagonal_image(grid)
    if diag is None:
        raise SolveError("diagonal image not set; diagonalize first")
    row_img = row_common_image(grid, mid)
    col_img = col_common_image(grid, mid)
    middle = grid.at((mid, mid))
    pool = sorted(middle.images - {row_img, col_img, diag})

    winners: list[tuple[int, set]] = []
    for img in pool:
        pos = set(image_positions(grid, img))
        if len(pos) == n and all((c, r) in pos for r, c in pos):
            winners.append((img, pos))
    if len(winners) != 1:
        raise SolveError(
            f"{len(winners)} transpose-symmetric candidates in pool {pool}; "
            f"expected exactly one, so an upstream stage went wrong")
    img, pos = winners[0]
    pairs = sorted({(min(r, c), max(r, c)) for r, c in pos if r != c})
    return img, Pairing(tuple(pairs))


def enumerate_pairings(m: int) -> list[Pairing]:
    """All perfect matchings on m labeled elements 0..m-1; (m-1)!! of them."""
    if m % 2:
        raise ValueError(f"cannot pair an odd count of elements: {m}")
    if m > 12:
        raise ValueError(f"{m} elements exceeds the supported bound of 12")
    return [Pairing(p) for p in _matchings(tuple(range(m)))]


def _matchings(items: tuple[int, ...]):
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for k in range(len(rest)):
        head = (first, rest[k])
        for tail in _matchings(rest[:k] + rest[k + 1:]):
            yield (head,) + tail


def _transpositions_for(sigma: list[int]) -> list[tuple[int, int]]:
    """Swaps (applied left to right) whose composition sends index i to sigma[i]."""
    n = len(sigma)
    inv = [0] * n
    for i, s in enumerate(sigma):
        inv[s] = i
    arr = list(range(n))
    out: list[tuple[int, int]] = []
    for k in range(n):
        j = arr.index(inv[k], k)
        if j != k:
            arr[k], arr[j] = arr[j], arr[k]
            out.append((k, j))
    return out


def nest_squares(grid: Grid, pairing: Pairing) -> tuple[Grid, list[MoveLogEntry]]:
    """Move each pairing pair onto a mirror pair {k, n-1-k} using paired swaps.

    Pairs sorted by low index go to mirror slots 0, 1, ... in order, so an
    already-nested grid yields no moves.  Paired swaps conjugate position
    sets, keeping the diagonal image in place while the counterdiagonal
    image's squares collapse onto the counterdiagonal.
    """
    n = grid.n
    mid = (n - 1) // 2
    if pairing.elements() != [i for i in range(n) if i != mid]:
        raise SolveError(f"pairing {pairing.pairs} does not cover the non-middle indices")
    sigma = list(range(n))
    for k, (a, b) in enumerate(pairing.pairs):
        sigma[a] = k
        sigma[b] = n - 1 - k
    moves = [Move(MoveKind.PAIRED, min(a, b), max(a, b))
             for a, b in _transpositions_for(sigma)]
    out = apply_moves(grid, moves)
    if counterdiagonal_image(out) is None:
        raise SolveError("counterdiagonal not established; the pairing did not match the grid")
    return out, [MoveLogEntry("nest", m) for m in moves]


def _residual_maps(n: int):
    """Index maps of the residual group, in deterministic enumeration order.

    Non-middle indices form (n-1)/2 mirror levels {k, n-1-k}; the group
    permutes levels and flips each level's two ends, all applied equally to
    rows and columns, so both diagonals survive.  Size ((n-1)/2)! * 2^((n-1)/2).
    """
    t = (n - 1) // 2
    for perm in itertools.permutations(range(t)):
        for flips in itertools.product((0, 1), repeat=t):
            sigma = list(range(n))
            for k in range(t):
                tgt = perm[k]
                if flips[k]:
                    sigma[k], sigma[n - 1 - k] = n - 1 - tgt, tgt
                else:
                    sigma[k], sigma[n - 1 - k] = tgt, n - 1 - tgt
            yield sigma


def residual_group_size(order: Order | int) -> int:
    n = order.n if isinstance(order, Order) else order
    t = (n - 1) // 2
    return math.factorial(t) * 2 ** t


def _balanced_moves(sigma: list[int], n: int) -> list[Move]:
    """Decompose a residual-group index map into balanced swaps."""
    t = (n - 1) // 2
    level_to = [min(sigma[k], n - 1 - sigma[k]) for k in range(t)]
    flipped = [sigma[k] > (n - 1) // 2 for k in range(t)]

    inv = [0] * t
    for k, tgt in enumerate(level_to):
        inv[tgt] = k
    arr = list(range(t))
    moves: list[Move] = []
    for k in range(t):
        j = arr.index(inv[k], k)
        if j != k:
            arr[k], arr[j] = arr[j], arr[k]
            moves.append(Move(MoveKind.BALANCED, k, j))
    for slot in sorted(level_to[k] for k in range(t) if flipped[k]):
        moves.append(Move(MoveKind.BALANCED, slot, n - 1 - slot))
    return moves


def _mapped_solved(sets, inv: list[int], n: int) -> bool:
    """Line-based solvedness of the grid whose cell (r,c) is sets[inv[r]][inv[c]].

    Checks the slopes the residual group can actually disturb first, so
    failing candidates die on their first line.
    """
    dirs = [(1, s) for s in range(2, n - 1)] + [(0, 1), (1, 0), (1, 1), (1, n - 1)]
    if n == 2:
        dirs = line_directions(n)
    for dr, dc in dirs:
        starts = [(r, 0) for r in range(n)] if (dr, dc) == (0, 1) else [(0, c) for c in range(n)]
        for r0, c0 in starts:
            common = sets[inv[r0]][inv[c0]]
            r, c = r0, c0
            for _ in range(n - 1):
                r = (r + dr) % n
                c = (c + dc) % n
                common = common & sets[inv[r]][inv[c]]
                if not common:
                    return False
            if len(common) != 1:
                return False
    return True


def finish(grid: Grid) -> tuple[Grid, list[MoveLogEntry]]:
    """Search the residual group for the rule-clean arrangement.

    Enumerates level permutations and per-level flips in a fixed order and
    returns the first arrangement whose placement rule check is empty,
    realized as balanced move sequences.  An already-solved grid maps to
    the identity and yields no moves.
    """
    n = grid.n
    if diagonal_image(grid) is None or counterdiagonal_image(grid) is None:
        raise SolveError("finish needs both the diagonal and counterdiagonal set")
    sets = [[grid.cells[r][c].images for c in range(n)] for r in range(n)]
    for sigma in _residual_maps(n):
        inv = [0] * n
        for i, s in enumerate(sigma):
            inv[s] = i
        if _mapped_solved(sets, inv, n):
            moves = _balanced_moves(sigma, n)
            out = apply_moves(grid, moves)
            if rule_check(out):
                raise SolveError("residual winner failed the pairwise rule; internal inconsistency")
            return out, [MoveLogEntry("finish", m) for m in moves]
    raise SolveError("no solution in the residual group; an upstream invariant broke")


def solve(deck: Deck) -> tuple[Grid, list[MoveLogEntry], SolveTrace]:
    """Run the full pipeline on a complete or two-cards-missing deck."""
    n = deck.n
    if n < 3 or n % 2 == 0:
        raise SolveError(f"solving needs an odd prime order >= 3, got {n}")
    inf = choose_infinity(deck)
    affine, infinity_cards = remove_image_set(deck, inf)
    if len(affine) != n * n:
        raise SolveError(
            f"{len(affine)} affine cards after removing image {inf}, expected {n * n}")
    if len(infinity_cards) < 2:
        raise SolveError("need at least two infinity cards to frame the axes")
    infinity_cards.sort(key=lambda c: c.id)
    axes = AxisChoice(inf, infinity_cards[0], infinity_cards[1])

    g0 = initial_grid(affine, axes)
    stages = [StageSnapshot("setup", g0, ())]
    g1, log1 = diagonalize(g0)
    stages.append(StageSnapshot("diagonalize", g1, tuple(e.move for e in log1)))
    cd_img, pairing = find_counterdiagonal(g1)
    g2, log2 = nest_squares(g1, pairing)
    stages.append(StageSnapshot("nest", g2, tuple(e.move for e in log2)))
    g3, log3 = finish(g2)
    stages.append(StageSnapshot("finish", g3, tuple(e.move for e in log3)))

    diag = diagonal_image(g1)
    assert diag is not None
    trace = SolveTrace(tuple(stages), inf, axes, diag, cd_img, pairing)
    return g3, log1 + log2 + log3, trace


def brute_force_solve(deck: Deck) -> list[Grid]:
    """Exhaustive oracle for tiny orders: every rule-clean arrangement.

    The lowest image id is removed as infinity and the lowest-id affine
    card is pinned to cell (0,0), quotienting out the toroidal translation
    symmetry (translations of a solved grid are again solved).  Placement
    is row-major with pruning on every pair and third-position constraint
    as soon as its cells are filled.
    """
    n = deck.n
    if n not in (2, 3):
        raise SolveError(f"brute force is limited to orders 2 and 3, got {n}")
    imgs = deck.images()
    if not imgs:
        return []
    inf = min(imgs)
    affine = sorted((c for c in deck.cards if inf not in c.images), key=lambda c: c.id)
    if len(affine) != n * n:
        return []

    total = n * n
    cells: list[Card | None] = [None] * total
    cells[0] = affine[0]
    rest = affine[1:]
    used = [False] * len(rest)
    inv2 = (n + 1) // 2 if n % 2 else None  # multiplicative inverse of 2 mod n
    solutions: list[Grid] = []

    def placement_ok(idx: int, cand: Card) -> bool:
        r, c = divmod(idx, n)
        for pidx in range(idx):
            prev = cells[pidx]
            assert prev is not None
            common = prev.images & cand.images
            if len(common) != 1:
                return False
            img = next(iter(common))
            pr, pc = divmod(pidx, n)
            t1 = ((2 * r - pr) % n) * n + (2 * c - pc) % n
            if t1 < idx and img not in cells[t1].images:
                return False
            t2 = ((2 * pr - r) % n) * n + (2 * pc - c) % n
            if t2 < idx and img not in cells[t2].images:
                return False
            if inv2 is not None:
                # cand sits at the third position of an already-placed pair
                q = ((r + pr) * inv2 % n) * n + (c + pc) * inv2 % n
                if q < idx and q != pidx:
                    pair_common = prev.images & cells[q].images
                    if len(pair_common) == 1 and next(iter(pair_common)) not in cand.images:
                        return False
        return True

    def dfs(idx: int) -> None:
        if idx == total:
            grid = Grid(deck.order, tuple(
                tuple(cells[r * n + c] for c in range(n)) for r in range(n)))
            if not rule_check(grid):
                solutions.append(grid)
            return
        for k, cand in enumerate(rest):
            if not used[k] and placement_ok(idx, cand):
                used[k] = True
                cells[idx] = cand
                dfs(idx + 1)
                cells[idx] = None
                used[k] = False

    dfs(1)
    return solutions


def count_paired_orbit(grid: Grid) -> tuple[int, int]:
    """Count arrangements and solutions in the paired orbit of a diagonalized grid.

    All (n-1)! permutations of the non-middle indices, applied identically
    to rows and columns with the middle frozen; solutions are the ones with
    an empty pairwise rule check.
    """
    n = grid.n
    if n % 2 == 0:
        raise SolveError("paired orbit needs an odd order")
    if diagonal_image(grid) is None:
        raise SolveError("paired orbit counting expects a diagonalized grid")
    mid = (n - 1) // 2
    others = [i for i in range(n) if i != mid]
    orbit = 0
    solutions = 0
    for perm in itertools.permutations(others):
        sigma = list(range(n))
        for src, dst in zip(others, perm):
            sigma[src] = dst
        inv = [0] * n
        for i, s in enumerate(sigma):
            inv[s] = i
        cand = Grid(grid.order, tuple(
            tuple(grid.cells[inv[r]][inv[c]] for c in range(n)) for r in range(n)))
        orbit += 1
        if not rule_check(cand):
            solutions += 1
    return orbit, solutions


def count_residual_orbit(grid: Grid) -> tuple[int, int]:
    """Count arrangements and solutions in the residual group of a nested grid."""
    n = grid.n
    if diagonal_image(grid) is None or counterdiagonal_image(grid) is None:
        raise SolveError("residual counting expects both diagonals set")
    size = 0
    solutions = 0
    for sigma in _residual_maps(n):
        inv = [0] * n
        for i, s in enumerate(sigma):
            inv[s] = i
        cand = Grid(grid.order, tuple(
            tuple(grid.cells[inv[r]][inv[c]] for c in range(n)) for r in range(n)))
        size += 1
        if not rule_check(cand):
            solutions += 1
    return size, solutions


def setup_choice_count(order: Order | int) -> int:
    """Number of distinct initial-setup choices: points * (n+1) * n * n! * n!."""
    o = order if isinstance(order, Order) else Order(order)
    n = o.n
    return o.num_points * (n + 1) * n * math.factorial(n) ** 2

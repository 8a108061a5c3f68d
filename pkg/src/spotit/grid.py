"""The n-by-n toroidal grid of affine cards, its placement rule, and moves.

Positions are (row, col) with row 0 at top, both components mod n.  The
placement rule: for any two cards at positions p and q, their common image
must also appear on the card at p + 2*(q - p), componentwise mod n.

A grid satisfying the rule turns every affine line of positions into a set
of n cards sharing one image; an independent line-based checker of that
equivalent statement lives here as the cross-check oracle for rule_check.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations

from .plane import Card, Order

GridPos = tuple[int, int]

VERTICAL = "vertical"


class MoveKind(str, Enum):
    SWAP_ROWS = "swap_rows"
    SWAP_COLS = "swap_cols"
    PAIRED = "paired"
    BALANCED = "balanced"


@dataclass(frozen=True)
class Move:
    """A reversible grid action on two distinct indices.

    PAIRED(i, j) means swap rows i,j then columns i,j.  BALANCED(i, j) is
    PAIRED(i, j) followed by PAIRED(n-1-i, n-1-j), the mirrored pair being
    skipped when it is the same pair of indices.
    """

    kind: MoveKind
    i: int
    j: int

    def __post_init__(self) -> None:
        if not isinstance(self.i, int) or not isinstance(self.j, int):
            raise ValueError(f"move indices must be integers, got {self.i!r}, {self.j!r}")
        if self.i < 0 or self.j < 0:
            raise ValueError(f"move indices must be non-negative, got {self.i}, {self.j}")
        if self.i == self.j:
            raise ValueError(f"move indices must differ, got {self.i} twice")

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "i": self.i, "j": self.j}

    @staticmethod
    def from_dict(d: dict) -> "Move":
        try:
            kind = MoveKind(d["kind"])
            return Move(kind, int(d["i"]), int(d["j"]))
        except (KeyError, TypeError) as e:
            raise ValueError(f"malformed move {d!r}") from e


@dataclass(frozen=True)
class Grid:
    """An n-by-n arrangement of distinct cards, every cell occupied."""

    order: Order
    cells: tuple[tuple[Card, ...], ...]

    def __post_init__(self) -> None:
        n = self.order.n
        cells = tuple(tuple(row) for row in self.cells)
        object.__setattr__(self, "cells", cells)
        if len(cells) != n or any(len(row) != n for row in cells):
            raise ValueError(f"grid must be {n}x{n}")
        ids = [c.id for row in cells for c in row]
        if len(set(ids)) != n * n:
            raise ValueError("grid cards are not distinct")

    @property
    def n(self) -> int:
        return self.order.n

    def at(self, pos: GridPos) -> Card:
        return self.cells[pos[0]][pos[1]]

    def positions(self) -> list[GridPos]:
        n = self.n
        return [(r, c) for r in range(n) for c in range(n)]


@dataclass(frozen=True)
class RuleViolation:
    """A placement-rule failure, with enough context to highlight it."""

    pos_a: GridPos
    pos_b: GridPos
    third: GridPos
    common: tuple[int, ...]
    third_card_id: int
    third_card_images: tuple[int, ...]

    @property
    def expected(self) -> int | None:
        return self.common[0] if len(self.common) == 1 else None

    def message(self) -> str:
        if len(self.common) != 1:
            return (f"cards at {self.pos_a} and {self.pos_b} share "
                    f"{len(self.common)} images {list(self.common)}, expected 1")
        return (f"image {self.common[0]} shared by {self.pos_a} and {self.pos_b} "
                f"missing from card {self.third_card_id} at {self.third}")


@dataclass(frozen=True)
class LineViolation:
    direction: GridPos
    start: GridPos
    common: tuple[int, ...]


def third_position(p1: GridPos, p2: GridPos, n: int) -> GridPos:
    """The cell that must carry the common image of the cards at p1, p2."""
    if p1 == p2:
        raise ValueError(f"positions must differ, got {p1} twice")
    return ((2 * p2[0] - p1[0]) % n, (2 * p2[1] - p1[1]) % n)


def rule_check(grid: Grid) -> list[RuleViolation]:
    """Check the placement rule over every unordered pair of positions.

    O(n^4) pairs; fine for supported orders.  Empty result means solved.
    """
    n = grid.n
    sets = [[grid.cells[r][c].images for c in range(n)] for r in range(n)]
    out: list[RuleViolation] = []
    for pa, pb in combinations(grid.positions(), 2):
        common = sets[pa[0]][pa[1]] & sets[pb[0]][pb[1]]
        third = third_position(pa, pb, n)
        tcard = grid.at(third)
        if len(common) != 1 or next(iter(common)) not in tcard.images:
            out.append(RuleViolation(
                pa, pb, third, tuple(sorted(common)), tcard.id, tuple(tcard.sorted_images())))
    return out


def line_directions(n: int) -> list[GridPos]:
    """The n+1 direction vectors generating every affine line of positions."""
    return [(0, 1)] + [(1, s) for s in range(n)]


def line_cells(start: GridPos, direction: GridPos, n: int) -> list[GridPos]:
    r, c = start
    dr, dc = direction
    return [((r + t * dr) % n, (c + t * dc) % n) for t in range(n)]


def line_violations(grid: Grid) -> list[LineViolation]:
    """Independent solvedness check: every affine line of positions must
    carry one common image across its n cards.

    Serves as the cross-check oracle for rule_check; the two must agree on
    emptiness for every grid.
    """
    n = grid.n
    out: list[LineViolation] = []
    for d in line_directions(n):
        starts = [(r, 0) for r in range(n)] if d == (0, 1) else [(0, c) for c in range(n)]
        for start in starts:
            cells = line_cells(start, d, n)
            common = frozenset(grid.at(cells[0]).images)
            for pos in cells[1:]:
                common &= grid.at(pos).images
                if not common:
                    break
            if len(common) != 1:
                out.append(LineViolation(d, start, tuple(sorted(common))))
    return out


def image_positions(grid: Grid, img: int) -> list[GridPos]:
    """All cells whose card contains img, in row-major order."""
    n = grid.n
    return [(r, c) for r in range(n) for c in range(n) if img in grid.cells[r][c].images]


def slope_of_image(grid: Grid, img: int):
    """Slope of an image's position set when it forms a grid line.

    Slope s means row = r0 + s*(col - c0) mod n, so a full row is slope 0,
    the main diagonal slope 1 and the counterdiagonal n-1; a full column
    returns VERTICAL.  Anything that is not a line returns None.
    """
    n = grid.n
    pos = image_positions(grid, img)
    if len(pos) != n:
        return None
    cols = {c for _, c in pos}
    if len(cols) == 1:
        return VERTICAL
    by_col = {c: r for r, c in pos}
    if len(by_col) != n:
        return None
    s = (by_col[1] - by_col[0]) % n
    r0 = by_col[0]
    if all(by_col[c] == (r0 + s * c) % n for c in range(n)):
        return s
    return None


def _swap_rows(cells: tuple[tuple[Card, ...], ...], i: int, j: int):
    rows = list(cells)
    rows[i], rows[j] = rows[j], rows[i]
    return tuple(rows)


def _swap_cols(cells: tuple[tuple[Card, ...], ...], i: int, j: int):
    out = []
    for row in cells:
        r = list(row)
        r[i], r[j] = r[j], r[i]
        out.append(tuple(r))
    return tuple(out)


def apply_move(grid: Grid, move: Move) -> Grid:
    """Apply one move, returning a new grid; the card multiset is unchanged."""
    n = grid.n
    i, j = move.i, move.j
    if i >= n or j >= n:
        raise ValueError(f"move indices {i}, {j} out of range for order {n}")
    cells = grid.cells
    if move.kind == MoveKind.SWAP_ROWS:
        cells = _swap_rows(cells, i, j)
    elif move.kind == MoveKind.SWAP_COLS:
        cells = _swap_cols(cells, i, j)
    elif move.kind == MoveKind.PAIRED:
        cells = _swap_cols(_swap_rows(cells, i, j), i, j)
    elif move.kind == MoveKind.BALANCED:
        mi, mj = n - 1 - i, n - 1 - j
        if {mi, mj} != {i, j} and {mi, mj} & {i, j}:
            # exactly one index is the middle: the two paired swaps would
            # compose to a 3-cycle that drags the middle card away
            raise ValueError(
                f"balanced swap of {i}, {j} touches the frozen middle index {(n - 1) // 2}")
        cells = _swap_cols(_swap_rows(cells, i, j), i, j)
        if {mi, mj} != {i, j}:
            cells = _swap_cols(_swap_rows(cells, mi, mj), mi, mj)
    else:  # pragma: no cover
        raise ValueError(f"unknown move kind {move.kind!r}")
    return Grid(grid.order, cells)


def apply_moves(grid: Grid, moves) -> Grid:
    for m in moves:
        grid = apply_move(grid, m)
    return grid


def _cells_common(grid: Grid, cells: list[GridPos]) -> int | None:
    common = frozenset(grid.at(cells[0]).images)
    for pos in cells[1:]:
        common &= grid.at(pos).images
        if not common:
            return None
    return next(iter(common)) if len(common) == 1 else None


def row_common_image(grid: Grid, r: int) -> int | None:
    return _cells_common(grid, [(r, c) for c in range(grid.n)])


def col_common_image(grid: Grid, c: int) -> int | None:
    return _cells_common(grid, [(r, c) for r in range(grid.n)])


def diagonal_image(grid: Grid) -> int | None:
    """The image lying exactly on the main diagonal, if any."""
    return _cells_common(grid, [(i, i) for i in range(grid.n)])


def counterdiagonal_image(grid: Grid) -> int | None:
    n = grid.n
    return _cells_common(grid, [(i, n - 1 - i) for i in range(n)])

"""Playable solitaire sessions: phases, legal moves, hints, progress checks.

A game walks forward through ChooseInfinity -> ChooseAxes -> Arrange ->
Solved (restart is the only way back).  Laying out the initial grid is
automated once the axes are picked; the human plays the swap phase.  Hints
are recomputed from the current grid each time, so they stay sound no
matter what detours the player took.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from enum import Enum
from typing import Any, Mapping

from .grid import (
    Grid,
    Move,
    MoveKind,
    apply_move,
    col_common_image,
    counterdiagonal_image,
    diagonal_image,
    row_common_image,
    rule_check,
)
from .plane import Deck, Order, generate_plane, relabel_shuffle, remove_image_set
from .recovery import image_census
from .solver import (
    AxisChoice,
    Pairing,
    SolveError,
    diagonalize,
    find_counterdiagonal,
    finish,
    initial_grid,
    nest_squares,
)


class GamePhase(str, Enum):
    CHOOSE_INFINITY = "choose_infinity"
    CHOOSE_AXES = "choose_axes"
    ARRANGE = "arrange"
    SOLVED = "solved"


class SessionError(Exception):
    """An illegal player action; code is machine-readable, message human."""

    def __init__(self, code: str, message: str, status: int = 400):
        self.code = code
        self.message = message
        self.status = status
        super().__init__(message)


@dataclass(frozen=True)
class GameState:
    game_id: str
    order: Order
    seed: int
    missing: int
    deck: Deck
    phase: GamePhase
    guided: bool
    infinity_image: int | None
    axes: AxisChoice | None
    grid: Grid | None
    history: tuple[Move, ...]


@dataclass(frozen=True)
class Hint:
    stage: str
    narration: str
    move: Move | None = None
    highlight_image: int | None = None


@dataclass(frozen=True)
class ProgressReport:
    rows: tuple[int | None, ...]
    cols: tuple[int | None, ...]
    diagonal: int | None
    counterdiagonal: int | None
    violations: int
    pairing: Pairing | None
    solved: bool


def new_game(order: Order | int, seed: int, missing: int = 0, game_id: str = "") -> GameState:
    """Start a session: a seed-shuffled deck, optionally minus two cards."""
    o = order if isinstance(order, Order) else Order(order)
    if o.n < 3 or o.n % 2 == 0:
        raise SessionError("bad_order", f"playable orders are odd primes >= 3, got {o.n}")
    if missing not in (0, 2):
        raise SessionError("bad_missing", f"missing must be 0 or 2, got {missing}")
    deck = relabel_shuffle(generate_plane(o), seed)
    if missing == 2:
        rng = random.Random(f"{seed}:missing")
        drop = set(rng.sample(range(len(deck.cards)), 2))
        deck = Deck(o, tuple(c for i, c in enumerate(deck.cards) if i not in drop),
                    deck.image_names)
    return GameState(
        game_id=game_id,
        order=o,
        seed=seed,
        missing=missing,
        deck=deck,
        phase=GamePhase.CHOOSE_INFINITY,
        guided=True,
        infinity_image=None,
        axes=None,
        grid=None,
        history=(),
    )


def _require_phase(state: GameState, *phases: GamePhase) -> None:
    if state.phase not in phases:
        want = " or ".join(p.value for p in phases)
        raise SessionError(
            "wrong_phase", f"action needs phase {want}, game is in {state.phase.value}", 409)


def _doubly_deficient(deck: Deck) -> int | None:
    census = image_census(deck)
    low = census.images_at(deck.n - 1)
    return low[0] if len(low) == 1 else None


def _after_grid_change(state: GameState, grid: Grid, move: Move | None) -> GameState:
    history = state.history + (move,) if move else state.history
    phase = GamePhase.SOLVED if not rule_check(grid) else GamePhase.ARRANGE
    return replace(state, grid=grid, history=history, phase=phase)


def apply_player_action(state: GameState, action: Mapping[str, Any]) -> GameState:
    """Apply one player action, returning the new state or raising SessionError."""
    kind = action.get("type")
    if kind == "restart":
        return replace(state, phase=GamePhase.CHOOSE_INFINITY,
                       infinity_image=None, axes=None, grid=None, history=())
    if kind == "set_mode":
        guided = action.get("guided")
        if not isinstance(guided, bool):
            raise SessionError("bad_action", "set_mode needs a boolean 'guided'")
        return replace(state, guided=guided)
    if kind == "choose_infinity":
        return _choose_infinity(state, action)
    if kind == "choose_axes":
        return _choose_axes(state, action)
    if kind == "move":
        return _move(state, action)
    raise SessionError("bad_action", f"unknown action type {kind!r}")


def _choose_infinity(state: GameState, action: Mapping[str, Any]) -> GameState:
    _require_phase(state, GamePhase.CHOOSE_INFINITY)
    img = action.get("image")
    if not isinstance(img, int):
        raise SessionError("bad_action", "choose_infinity needs an integer 'image'")
    if img not in state.deck.images():
        raise SessionError("unknown_image", f"image {img} is not in this deck", 404)
    if state.missing == 2:
        needed = _doubly_deficient(state.deck)
        if img != needed:
            raise SessionError(
                "infinity_unavailable",
                f"two cards are missing; only the doubly-deficient image {needed} leaves "
                f"a complete affine plane behind")
    return replace(state, infinity_image=img, phase=GamePhase.CHOOSE_AXES)


def _choose_axes(state: GameState, action: Mapping[str, Any]) -> GameState:
    _require_phase(state, GamePhase.CHOOSE_AXES)
    row_id = action.get("row_card")
    col_id = action.get("col_card")
    if not isinstance(row_id, int) or not isinstance(col_id, int):
        raise SessionError("bad_action", "choose_axes needs integer 'row_card' and 'col_card'")
    if row_id == col_id:
        raise SessionError("bad_action", "row and column axis cards must differ")
    assert state.infinity_image is not None
    try:
        row_card = state.deck.card_by_id(row_id)
        col_card = state.deck.card_by_id(col_id)
    except KeyError as e:
        raise SessionError("unknown_card", str(e), 404) from None
    for card in (row_card, col_card):
        if state.infinity_image not in card.images:
            raise SessionError(
                "not_infinity_card",
                f"card {card.id} does not carry the infinity image {state.infinity_image}")
    axes = AxisChoice(state.infinity_image, row_card, col_card)
    affine, _ = remove_image_set(state.deck, state.infinity_image)
    try:
        grid = initial_grid(affine, axes)
    except SolveError as e:
        raise SessionError("setup_failed", str(e)) from None
    return _after_grid_change(replace(state, axes=axes), grid, None)


def _move(state: GameState, action: Mapping[str, Any]) -> GameState:
    _require_phase(state, GamePhase.ARRANGE)
    assert state.grid is not None
    try:
        move = Move.from_dict(action)
    except ValueError as e:
        raise SessionError("bad_move", str(e)) from None
    if state.guided:
        allowed = _guided_kinds(state.grid)
        if move.kind not in allowed:
            names = ", ".join(k.value for k in sorted(allowed, key=lambda k: k.value))
            raise SessionError(
                "guided_restriction",
                f"guided mode allows only [{names}] moves at this point; "
                f"switch to free mode to break the pattern deliberately")
    try:
        grid = apply_move(state.grid, move)
    except ValueError as e:
        raise SessionError("bad_move", str(e)) from None
    return _after_grid_change(state, grid, move)


def _guided_kinds(grid: Grid) -> set[MoveKind]:
    """Move kinds guided mode permits, given what the grid has locked in."""
    if diagonal_image(grid) is None:
        return set(MoveKind)
    if counterdiagonal_image(grid) is None:
        return {MoveKind.PAIRED, MoveKind.BALANCED}
    return {MoveKind.BALANCED}


def hint(state: GameState) -> Hint:
    """One concrete step toward the solution, recomputed from the live grid."""
    _require_phase(state, GamePhase.ARRANGE, GamePhase.SOLVED)
    assert state.grid is not None
    grid = state.grid
    if state.phase is GamePhase.SOLVED or not rule_check(grid):
        return Hint("solved", "Every image lines up; the grid is solved.")

    if diagonal_image(grid) is None:
        try:
            _, log = diagonalize(grid)
        except SolveError as e:
            return Hint("stuck", f"The diagonal cannot be rebuilt: {e}")
        move = log[0].move
        return Hint(
            "diagonalize",
            "No image runs down the main diagonal yet. Pick the marker on the top-left "
            "card that is neither its row's nor its column's shared image and walk it "
            f"onto the diagonal; swapping columns {move.i} and {move.j} is the next step.",
            move=move)

    if counterdiagonal_image(grid) is None:
        try:
            cd_img, pairing = find_counterdiagonal(grid)
            _, log = nest_squares(grid, pairing)
        except SolveError as e:
            return Hint("stuck", f"The counterdiagonal is out of reach from here: {e}")
        move = log[0].move
        return Hint(
            "nest",
            f"The counterdiagonal image is already decided: of the middle card's images, "
            f"only image {cd_img} sits mirror-symmetrically across the diagonal (equal "
            f"counts down and across). Nest its squares with paired swaps; rows/columns "
            f"{move.i} and {move.j} next.",
            move=move, highlight_image=cd_img)

    try:
        _, log = finish(grid)
    except SolveError as e:
        return Hint("stuck", f"The balanced endgame broke down: {e}")
    if not log:
        return Hint("solved", "Every image lines up; the grid is solved.")
    move = log[0].move
    return Hint(
        "finish",
        "Both diagonals are set, so stay balanced: mirror every swap about the center "
        "and each placed image propagates its neighbours into position. Swap levels "
        f"{move.i} and {move.j} (with their mirrors) next.",
        move=move)


def check(state: GameState) -> ProgressReport:
    """Snapshot of row/column/diagonal status and rule violations."""
    _require_phase(state, GamePhase.ARRANGE, GamePhase.SOLVED)
    assert state.grid is not None
    grid = state.grid
    n = grid.n
    rows = tuple(row_common_image(grid, r) for r in range(n))
    cols = tuple(col_common_image(grid, c) for c in range(n))
    diag = diagonal_image(grid)
    pairing = None
    if diag is not None and n % 2 == 1:
        try:
            _, pairing = find_counterdiagonal(grid)
        except SolveError:
            pairing = None
    violations = len(rule_check(grid))
    return ProgressReport(
        rows=rows,
        cols=cols,
        diagonal=diag,
        counterdiagonal=counterdiagonal_image(grid),
        violations=violations,
        pairing=pairing,
        solved=violations == 0,
    )

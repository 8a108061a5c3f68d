"""Workbench for the Spot it! solitaire challenge.

Generate and verify prime-order plane decks, reconstruct missing cards,
and solve or play the puzzle of arranging the affine cards into an n-by-n
grid where every pair's common image lands on the cell the placement rule
demands.
"""

from .plane import (
    Card,
    Deck,
    Order,
    VerificationReport,
    Violation,
    common_images,
    generate_plane,
    relabel_shuffle,
    remove_image_set,
    verify_plane,
)
from .grid import (
    Grid,
    Move,
    MoveKind,
    RuleViolation,
    apply_move,
    apply_moves,
    image_positions,
    rule_check,
    slope_of_image,
    third_position,
)
from .recovery import (
    Census,
    RecoveryError,
    enumerate_image_universe,
    image_census,
    reconstruct_missing_cards,
)
from .solver import (
    AxisChoice,
    Pairing,
    SolveError,
    SolveTrace,
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
    setup_choice_count,
    solve,
)
from .session import (
    GamePhase,
    GameState,
    Hint,
    ProgressReport,
    SessionError,
    apply_player_action,
    check,
    hint,
    new_game,
)

__all__ = [name for name in dir() if not name.startswith("_")]

"""Command-line interface: deck plumbing, solving, counting, serving.

All commands stream the text formats on stdin/stdout so they compose in
pipelines; `solve --trace` and `recover` put their annotations on stderr
to keep stdout parseable.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import deckio
from .deckio import DeckFormatError
from .grid import rule_check, slope_of_image
from .names import default_names
from .plane import (
    Deck,
    Order,
    generate_plane,
    relabel_shuffle,
    remove_image_set,
    verify_plane,
)
from .recovery import RecoveryError, reconstruct_missing_cards
from .solver import (
    AxisChoice,
    SolveError,
    choose_infinity,
    count_paired_orbit,
    count_residual_orbit,
    diagonalize,
    enumerate_pairings,
    find_counterdiagonal,
    initial_grid,
    nest_squares,
    residual_group_size,
    setup_choice_count,
    solve,
)

ORBIT_ENUM_LIMIT = 7  # (n-1)! arrangements; enumerating past 6! is impractical


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DeckFormatError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (RecoveryError, SolveError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spotit", description=__doc__)
    sub = parser.add_subparsers(required=True)

    p = sub.add_parser("gen", help="generate the canonical deck for an order")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--names", action="store_true", help="include image name lines")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("shuffle", help="relabel and reorder a deck from stdin")
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_shuffle)

    p = sub.add_parser("verify", help="verify a deck (or a grid with --deck) from stdin")
    p.add_argument("--deck", help="deck file for resolving a grid document")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("recover", help="reconstruct two missing cards from a deck on stdin")
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("solve", help="solve a deck from stdin into a grid")
    p.add_argument("--trace", action="store_true", help="stage-by-stage grids and moves on stderr")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("counts", help="reproduce the counting claims for an order")
    p.add_argument("--order", type=int, required=True)
    p.set_defaults(func=cmd_counts)

    p = sub.add_parser("demo", help="annotated solved grid for a small order")
    p.add_argument("--order", type=int, default=3)
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("serve", help="run the session service")
    p.add_argument("--addr", default=os.environ.get("SPOTIT_ADDR", "127.0.0.1:8000"))
    p.add_argument("--store", default=os.environ.get("SPOTIT_STORE"))
    p.add_argument("--cors", action="append", default=None,
                   help="allowed UI origin (repeatable); env SPOTIT_CORS is comma-separated")
    p.set_defaults(func=cmd_serve)

    return parser


def cmd_gen(args) -> int:
    deck = generate_plane(Order(args.order))
    if args.names:
        deck = Deck(deck.order, deck.cards, default_names(deck.order.num_points))
    sys.stdout.write(deckio.serialize_deck(deck))
    return 0


def cmd_shuffle(args) -> int:
    deck = deckio.parse_deck(sys.stdin.read())
    sys.stdout.write(deckio.serialize_deck(relabel_shuffle(deck, args.seed)))
    return 0


def cmd_verify(args) -> int:
    text = sys.stdin.read()
    first = text.split("\n", 1)[0]
    if first.startswith(deckio.GRID_MAGIC):
        if not args.deck:
            print("error: verifying a grid needs --deck <deckfile>", file=sys.stderr)
            return 2
        with open(args.deck, encoding="utf-8") as fh:
            deck = deckio.parse_deck(fh.read())
        grid = deckio.parse_grid(text, deck)
        violations = rule_check(grid)
        if violations:
            print(f"{len(violations)} placement-rule violation(s); first: "
                  f"{violations[0].message()}")
            return 1
        print(f"ok: solved grid of order {grid.n}")
        return 0
    deck = deckio.parse_deck(text)
    report = verify_plane(deck)
    print(report.summary())
    return 0 if report.ok else 1


def cmd_recover(args) -> int:
    deck = deckio.parse_deck(sys.stdin.read())
    card_a, card_b = reconstruct_missing_cards(deck)
    completed = Deck(deck.order, deck.cards + (card_a, card_b), deck.image_names)
    sys.stdout.write(deckio.serialize_deck(completed))
    for card in (card_a, card_b):
        imgs = ",".join(str(i) for i in card.sorted_images())
        print(f"reconstructed: card {card.id}: {imgs}", file=sys.stderr)
    return 0


def cmd_solve(args) -> int:
    deck = deckio.parse_deck(sys.stdin.read())
    grid, log, trace = solve(deck)
    sys.stdout.write(deckio.serialize_grid(grid))
    if args.trace:
        print(f"infinity image: {trace.infinity_image}", file=sys.stderr)
        print(f"axes: row card {trace.axes.row_card.id}, col card {trace.axes.col_card.id}",
              file=sys.stderr)
        print(f"diagonal image: {trace.diagonal_image}; "
              f"counterdiagonal image: {trace.counterdiagonal_image}; "
              f"pairing: {list(trace.pairing.pairs)}", file=sys.stderr)
        for snap in trace.stages:
            print(f"-- after {snap.name} ({len(snap.moves)} moves)", file=sys.stderr)
            for move in snap.moves:
                print(f"   {move.kind.value} {move.i} {move.j}", file=sys.stderr)
            sys.stderr.write(deckio.serialize_grid(snap.grid))
        print(f"total moves: {len(log)}", file=sys.stderr)
    return 0


def _diagonalized_grid(order: Order):
    """Canonical deck taken through setup and diagonalization."""
    deck = generate_plane(order)
    inf = choose_infinity(deck)
    affine, infinity_cards = remove_image_set(deck, inf)
    infinity_cards.sort(key=lambda c: c.id)
    axes = AxisChoice(inf, infinity_cards[0], infinity_cards[1])
    g0 = initial_grid(affine, axes)
    g1, _ = diagonalize(g0)
    return g1


def cmd_counts(args) -> int:
    order = Order(args.order)
    n = order.n
    if n < 3 or n % 2 == 0:
        print(f"error: counts needs an odd prime order >= 3, got {n}", file=sys.stderr)
        return 2
    import math
    setups = setup_choice_count(order)
    print(f"setup choices: {order.num_points} * {n + 1} * {n} * {n}! * {n}! = {setups}")

    pairings = len(enumerate_pairings(n - 1))
    print(f"pairings of the {n - 1} counterdiagonal elements: {pairings}")
    residual = residual_group_size(order)
    print(f"residual group size: {(n - 1) // 2}! * 2^{(n - 1) // 2} = {residual}")
    print(f"decomposition: {pairings} * {residual} = {pairings * residual} "
          f"(= {n - 1}! = {math.factorial(n - 1)})")

    if n <= ORBIT_ENUM_LIMIT:
        g1 = _diagonalized_grid(order)
        orbit, solutions = count_paired_orbit(g1)
        print(f"paired orbit: {orbit} arrangements, {solutions} solutions")
        _, pairing = find_counterdiagonal(g1)
        g2, _ = nest_squares(g1, pairing)
        rsize, rsol = count_residual_orbit(g2)
        print(f"residual orbit: {rsize} arrangements, {rsol} solutions")
    else:
        print(f"paired orbit: {math.factorial(n - 1)} arrangements (enumeration skipped, too large)")
    return 0


def cmd_demo(args) -> int:
    order = Order(args.order)
    deck = generate_plane(order)
    names = default_names(order.num_points)
    grid, _, trace = solve(deck)
    n = order.n
    print(f"solved {n}x{n} grid (card ids):")
    sys.stdout.write(deckio.serialize_grid(grid))
    print()
    print(f"all {order.num_points} images:")
    for img in range(order.num_points):
        label = f"image {img} ({names[img]})"
        if img == trace.infinity_image:
            print(f"  {label}: infinity image, on the {n + 1} removed cards")
            continue
        slope = slope_of_image(grid, img)
        cells = [(r, c) for r in range(n) for c in range(n)
                 if img in grid.cells[r][c].images]
        if slope is None:
            where = "on removed infinity cards" if not cells else f"at {cells}"
            print(f"  {label}: {where}")
        else:
            print(f"  {label}: grid line, slope {slope}, cells {cells}")
    return 0


def cmd_serve(args) -> int:
    from .service import serve

    cors = args.cors
    if cors is None and os.environ.get("SPOTIT_CORS"):
        cors = [o.strip() for o in os.environ["SPOTIT_CORS"].split(",") if o.strip()]
    serve(args.addr, args.store, cors)
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Bit-exact text serialization for decks and solved grids.

Deck format, version 1 (UTF-8, LF line endings):

    spotit-deck 1 order=<n>
    image <id> <name>            zero or more, name runs to end of line
    card <id>: <img>,<img>,...   ascending ids, no spaces after commas

Grid format, version 1:

    spotit-grid 1 order=<n>
    <id>,<id>,...                n lines of comma-separated card ids

Parsing enforces structure only; plane axioms are deliberately not checked
here so deficient decks (recovery inputs) can be loaded.
"""

from __future__ import annotations

from .plane import Card, Deck, Order
from .grid import Grid

DECK_MAGIC = "spotit-deck"
GRID_MAGIC = "spotit-grid"
FORMAT_VERSION = 1


class DeckFormatError(ValueError):
    """Structural error in a deck or grid document, with a 1-based line number."""

    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


def serialize_deck(deck: Deck) -> str:
    """Emit the deck text format; byte-identical for equal decks."""
    n = deck.n
    lines = [f"{DECK_MAGIC} {FORMAT_VERSION} order={n}"]
    if deck.image_names:
        for img in sorted(deck.image_names):
            lines.append(f"image {img} {deck.image_names[img]}")
    for card in sorted(deck.cards, key=lambda c: c.id):
        lines.append(f"card {card.id}: " + ",".join(str(i) for i in card.sorted_images()))
    return "\n".join(lines) + "\n"


def _parse_header(line: str, line_no: int, magic: str) -> Order:
    parts = line.split()
    if len(parts) != 3 or parts[0] != magic or not parts[2].startswith("order="):
        raise DeckFormatError(line_no, f"malformed header, expected '{magic} 1 order=<n>'")
    if parts[1] != str(FORMAT_VERSION):
        raise DeckFormatError(line_no, f"unknown format version {parts[1]!r}")
    try:
        n = int(parts[2][len("order="):])
    except ValueError:
        raise DeckFormatError(line_no, f"order is not an integer: {parts[2]!r}") from None
    try:
        return Order(n)
    except ValueError as e:
        raise DeckFormatError(line_no, str(e)) from None


def parse_deck(text: str) -> Deck:
    """Parse a deck document; the result may be a partial deck.

    Structural errors (bad header, duplicate card ids, a repeated image on
    one card, malformed or out-of-range fields) raise DeckFormatError with
    the offending line number.  Axiom violations do not.
    """
    lines = text.split("\n")
    if not lines or not lines[0].strip():
        raise DeckFormatError(1, "missing header")
    order = _parse_header(lines[0], 1, DECK_MAGIC)
    max_id = order.num_points - 1

    names: dict[int, str] = {}
    cards: list[Card] = []
    seen_ids: set[int] = set()
    for line_no, raw in enumerate(lines[1:], start=2):
        line = raw.rstrip("\r")
        if not line.strip():
            continue
        if line.startswith("image "):
            rest = line[len("image "):]
            head, sep, name = rest.partition(" ")
            if not sep or not name:
                raise DeckFormatError(line_no, "malformed image line, expected 'image <id> <name>'")
            img = _int_field(head, line_no, "image id")
            if not 0 <= img <= max_id:
                raise DeckFormatError(line_no, f"image id {img} out of range [0, {max_id}]")
            if img in names:
                raise DeckFormatError(line_no, f"duplicate name for image {img}")
            names[img] = name
        elif line.startswith("card "):
            rest = line[len("card "):]
            head, sep, body = rest.partition(": ")
            if not sep:
                raise DeckFormatError(line_no, "malformed card line, expected 'card <id>: <img>,...'")
            card_id = _int_field(head, line_no, "card id")
            if not 0 <= card_id <= max_id:
                raise DeckFormatError(line_no, f"card id {card_id} out of range [0, {max_id}]")
            if card_id in seen_ids:
                raise DeckFormatError(line_no, f"duplicate card id {card_id}")
            seen_ids.add(card_id)
            imgs = [_int_field(tok, line_no, "image id") for tok in body.split(",")]
            for img in imgs:
                if not 0 <= img <= max_id:
                    raise DeckFormatError(line_no, f"image id {img} out of range [0, {max_id}]")
            if len(set(imgs)) != len(imgs):
                raise DeckFormatError(line_no, f"card {card_id} repeats an image id")
            if imgs != sorted(imgs):
                raise DeckFormatError(line_no, f"card {card_id} image ids not ascending")
            cards.append(Card(card_id, frozenset(imgs)))
        else:
            raise DeckFormatError(line_no, f"unrecognized line: {line[:40]!r}")

    return Deck(order, tuple(cards), names or None)


def serialize_grid(grid: Grid) -> str:
    n = grid.n
    lines = [f"{GRID_MAGIC} {FORMAT_VERSION} order={n}"]
    for r in range(n):
        lines.append(",".join(str(grid.cells[r][c].id) for c in range(n)))
    return "\n".join(lines) + "\n"


def parse_grid(text: str, deck: Deck) -> Grid:
    """Parse a grid document, resolving card ids against the given deck."""
    lines = [ln.rstrip("\r") for ln in text.split("\n")]
    if not lines or not lines[0].strip():
        raise DeckFormatError(1, "missing header")
    order = _parse_header(lines[0], 1, GRID_MAGIC)
    n = order.n
    if order != deck.order:
        raise DeckFormatError(1, f"grid order {n} does not match deck order {deck.n}")

    by_id = {c.id: c for c in deck.cards}
    rows: list[tuple[Card, ...]] = []
    line_no = 1
    for raw in lines[1:]:
        line_no += 1
        if not raw.strip():
            continue
        ids = [_int_field(tok, line_no, "card id") for tok in raw.split(",")]
        if len(ids) != n:
            raise DeckFormatError(line_no, f"expected {n} card ids, got {len(ids)}")
        row = []
        for cid in ids:
            if cid not in by_id:
                raise DeckFormatError(line_no, f"card id {cid} not in deck")
            row.append(by_id[cid])
        rows.append(tuple(row))
        if len(rows) == n:
            break
    if len(rows) != n:
        raise DeckFormatError(line_no, f"expected {n} grid rows, got {len(rows)}")
    try:
        return Grid(order, tuple(rows))
    except ValueError as e:
        raise DeckFormatError(line_no, str(e)) from None


def _int_field(token: str, line_no: int, what: str) -> int:
    token = token.strip()
    try:
        return int(token)
    except ValueError:
        raise DeckFormatError(line_no, f"{what} is not an integer: {token!r}") from None

"""Prime-order projective planes modeled as Spot-it style card decks.

Cards play the role of points and images the role of lines: a complete deck
of order n has n^2+n+1 cards and n^2+n+1 images, every card carries n+1
images, every image sits on n+1 cards, any two cards share exactly one
image, and any two images co-occur on exactly one card.

The canonical construction coordinatizes the affine part over the integers
mod n.  Image ids: sloped line (m, b) gets id m*n+b, vertical line c gets
id n^2+c, the line at infinity gets id n^2+n.  Card ids: affine point
(x, y) gets id x*n+y, the slope-m point gets id n^2+m, the vertical-pencil
point gets id n^2+n.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping

MIN_ORDER = 2
MAX_ORDER = 31

AXIOM_CARD_COUNT = "card-count"
AXIOM_IMAGE_COUNT = "image-count"
AXIOM_IMAGES_PER_CARD = "images-per-card"
AXIOM_CARDS_PER_IMAGE = "cards-per-image"
AXIOM_CARD_PAIR = "card-pair"
AXIOM_IMAGE_PAIR = "image-pair"

ALL_AXIOMS = (
    AXIOM_CARD_COUNT,
    AXIOM_IMAGE_COUNT,
    AXIOM_IMAGES_PER_CARD,
    AXIOM_CARDS_PER_IMAGE,
    AXIOM_CARD_PAIR,
    AXIOM_IMAGE_PAIR,
)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Order:
    """A supported plane order: a prime n with 2 <= n <= 31."""

    n: int

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or isinstance(self.n, bool):
            raise ValueError(f"order must be an integer, got {self.n!r}")
        if not MIN_ORDER <= self.n <= MAX_ORDER:
            raise ValueError(
                f"order {self.n} outside supported range [{MIN_ORDER}, {MAX_ORDER}]"
            )
        if not is_prime(self.n):
            raise ValueError(f"order {self.n} is not prime")

    @property
    def num_points(self) -> int:
        """Cards (equally, images) in a complete deck: n^2 + n + 1."""
        return self.n * self.n + self.n + 1

    @property
    def per_line(self) -> int:
        """Images per card (equally, cards per image): n + 1."""
        return self.n + 1


def as_order(order: Order | int) -> Order:
    return order if isinstance(order, Order) else Order(order)


@dataclass(frozen=True)
class Card:
    """One card: an id plus its set of image ids."""

    id: int
    images: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "images", frozenset(self.images))

    def sorted_images(self) -> list[int]:
        return sorted(self.images)


@dataclass(frozen=True)
class Deck:
    """A (possibly partial) deck of cards with a declared order.

    Construction only enforces structural sanity (unique card ids, no
    empty deck shape constraints); plane axioms are checked separately by
    verify_plane so deficient decks remain first-class values.
    """

    order: Order
    cards: tuple[Card, ...]
    image_names: Mapping[int, str] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "cards", tuple(self.cards))
        ids = [c.id for c in self.cards]
        if len(ids) != len(set(ids)):
            dupes = sorted(i for i, k in Counter(ids).items() if k > 1)
            raise ValueError(f"duplicate card ids in deck: {dupes}")
        if self.image_names is not None:
            object.__setattr__(self, "image_names", dict(self.image_names))

    @property
    def n(self) -> int:
        return self.order.n

    def images(self) -> frozenset[int]:
        return frozenset(i for c in self.cards for i in c.images)

    def card_by_id(self, card_id: int) -> Card:
        for c in self.cards:
            if c.id == card_id:
                return c
        raise KeyError(f"no card with id {card_id}")


@dataclass(frozen=True)
class Violation:
    """One axiom failure found by verify_plane."""

    axiom: str
    message: str


@dataclass(frozen=True)
class VerificationReport:
    order: Order
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def by_axiom(self, axiom: str) -> list[Violation]:
        return [v for v in self.violations if v.axiom == axiom]

    def summary(self) -> str:
        if self.ok:
            return f"ok: projective plane of order {self.order.n}"
        lines = [f"{len(self.violations)} violation(s) for declared order {self.order.n}:"]
        lines += [f"  [{v.axiom}] {v.message}" for v in self.violations]
        return "\n".join(lines)


def generate_plane(order: Order | int) -> Deck:
    """Build the canonical deck for a prime order.

    The result always passes verify_plane; ids follow the module-level
    indexing scheme so fixtures can be checked by hand.
    """
    o = as_order(order)
    n = o.n
    cards: list[Card] = []
    for x in range(n):
        for y in range(n):
            imgs = {m * n + (y - m * x) % n for m in range(n)}
            imgs.add(n * n + x)
            cards.append(Card(x * n + y, frozenset(imgs)))
    for m in range(n):
        cards.append(Card(n * n + m, frozenset({m * n + b for b in range(n)} | {n * n + n})))
    cards.append(Card(n * n + n, frozenset({n * n + c for c in range(n)} | {n * n + n})))
    return Deck(o, tuple(cards))


def common_images(a: Card, b: Card) -> set[int]:
    """Intersection of two distinct cards' image sets.

    Returns the raw intersection (possibly empty or larger than one) so
    verification code can observe violations instead of masking them.
    """
    if a.id == b.id:
        raise ValueError(f"common_images needs two distinct cards, got id {a.id} twice")
    return set(a.images & b.images)


def verify_plane(deck: Deck) -> VerificationReport:
    """Check all six plane axioms and report every failure.

    Accepts partial decks; an empty report means the deck is a projective
    plane of its declared order.
    """
    n = deck.n
    expected = deck.order.num_points
    per = deck.order.per_line
    out: list[Violation] = []

    if len(deck.cards) != expected:
        out.append(Violation(AXIOM_CARD_COUNT, f"{len(deck.cards)} cards, expected {expected}"))

    images = sorted(deck.images())
    if len(images) != expected:
        out.append(Violation(AXIOM_IMAGE_COUNT, f"{len(images)} distinct images, expected {expected}"))

    for c in deck.cards:
        if len(c.images) != per:
            out.append(Violation(
                AXIOM_IMAGES_PER_CARD, f"card {c.id} has {len(c.images)} images, expected {per}"))

    freq = Counter(i for c in deck.cards for i in c.images)
    for img in images:
        if freq[img] != per:
            out.append(Violation(
                AXIOM_CARDS_PER_IMAGE, f"image {img} on {freq[img]} cards, expected {per}"))

    for a, b in combinations(deck.cards, 2):
        shared = a.images & b.images
        if len(shared) != 1:
            out.append(Violation(
                AXIOM_CARD_PAIR,
                f"cards {a.id} and {b.id} share {len(shared)} images {sorted(shared)}, expected 1"))

    cooc: Counter[tuple[int, int]] = Counter()
    for c in deck.cards:
        for i, j in combinations(c.sorted_images(), 2):
            cooc[(i, j)] += 1
    for i, j in combinations(images, 2):
        k = cooc.get((i, j), 0)
        if k != 1:
            out.append(Violation(
                AXIOM_IMAGE_PAIR, f"images {i} and {j} co-occur on {k} cards, expected 1"))

    return VerificationReport(deck.order, tuple(out))


def relabel_shuffle(deck: Deck, seed: int) -> Deck:
    """Randomly relabel image ids and reorder cards, deterministically per seed.

    Models receiving a physical deck in unknown order with arbitrary
    artwork: card ids are reassigned sequentially in the shuffled order (a
    transcription would do the same) and image ids are permuted within the
    deck's image universe.  Incidence, and therefore every verify_plane
    outcome, is preserved.
    """
    rng = random.Random(seed)
    universe = sorted(set(deck.images()) | set(deck.image_names or ()))
    shuffled = universe[:]
    rng.shuffle(shuffled)
    remap = dict(zip(universe, shuffled))
    cards = list(deck.cards)
    rng.shuffle(cards)
    new_cards = tuple(
        Card(pos, frozenset(remap[i] for i in c.images)) for pos, c in enumerate(cards)
    )
    names = None
    if deck.image_names is not None:
        names = {remap[i]: s for i, s in deck.image_names.items()}
    return Deck(deck.order, new_cards, names)


def remove_image_set(deck: Deck, img: int) -> tuple[list[Card], list[Card]]:
    """Split the deck into (affine_cards, infinity_cards) for one image.

    The infinity cards are exactly those containing img; for a complete
    deck that is n+1 cards, leaving the n^2 cards of an affine plane.
    """
    if img not in deck.images():
        raise ValueError(f"image {img} not in deck")
    infinity = [c for c in deck.cards if img in c.images]
    affine = [c for c in deck.cards if img not in c.images]
    return affine, infinity

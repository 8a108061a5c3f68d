"""Reconstruction of exactly two missing cards from a deficient deck.

The frequency census pins down the shape: one image short by two (it was
on both missing cards) and 2n images short by one.  Splitting the singly
deficient images between the two new cards only needs co-occurrence tests
against one anchor image: a pair of images meets exactly once in the full
plane, so an image that already meets the anchor somewhere in the deck
belongs on the other card, and one that never does belongs next to it.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .plane import Card, Deck, Order, verify_plane


class RecoveryError(ValueError):
    """The deck's census does not match the exactly-two-missing shape."""


@dataclass(frozen=True)
class Census:
    """Image frequencies across a (possibly partial) deck."""

    order: Order
    freq: dict[int, int]

    def distribution(self) -> dict[int, int]:
        """Map frequency -> how many images occur that often."""
        dist = Counter(self.freq.values())
        return dict(sorted(dist.items()))

    def images_at(self, count: int) -> list[int]:
        return sorted(i for i, k in self.freq.items() if k == count)


def image_census(deck: Deck, universe: Iterable[int] | None = None) -> Census:
    """Count every image's occurrences; a known universe adds zero entries."""
    freq: Counter[int] = Counter()
    for card in deck.cards:
        for img in card.images:
            freq[img] += 1
    if universe is not None:
        for img in universe:
            freq.setdefault(img, 0)
    return Census(deck.order, dict(freq))


def enumerate_image_universe(deck: Deck) -> set[int]:
    """Recover the full image universe from one full-frequency image set.

    The n+1 cards of an image at frequency n+1 pairwise share only that
    image, so together they carry (n+1)*n + 1 = all n^2+n+1 images.
    """
    per = deck.order.per_line
    census = image_census(deck)
    full = census.images_at(per)
    if not full:
        raise RecoveryError(
            f"no image at full frequency {per}; deck too deficient for this method")
    anchor = full[0]
    universe: set[int] = set()
    for card in deck.cards:
        if anchor in card.images:
            universe |= card.images
    expected = deck.order.num_points
    if len(universe) != expected:
        raise RecoveryError(
            f"image {anchor}'s cards carry {len(universe)} images, expected {expected}")
    return universe


def reconstruct_missing_cards(deck: Deck) -> tuple[Card, Card]:
    """Rebuild the two missing cards of an otherwise complete deck.

    The lowest-id singly-deficient image is the anchor placed on the first
    card; every other singly-deficient image joins it exactly when it never
    co-occurs with the anchor in the surviving deck.  Fresh card ids are
    the two smallest unused non-negative integers.  The completed deck is
    verified before returning.
    """
    n = deck.n
    census = image_census(deck)
    doubly = census.images_at(n - 1)
    singly = census.images_at(n)
    expected_cards = deck.order.num_points - 2

    if len(deck.cards) != expected_cards:
        raise RecoveryError(
            f"deck has {len(deck.cards)} cards, expected {expected_cards} for two missing")
    if len(doubly) != 1:
        raise RecoveryError(
            f"expected exactly one image at frequency {n - 1}, found {len(doubly)}")
    if len(singly) != 2 * n:
        raise RecoveryError(
            f"expected {2 * n} images at frequency {n}, found {len(singly)}")
    wrong = [i for i, k in census.freq.items() if k not in (n - 1, n, n + 1)]
    if wrong:
        raise RecoveryError(f"images at impossible frequencies: {sorted(wrong)}")

    shared = doubly[0]
    anchor = singly[0]
    seen_with_anchor: set[int] = set()
    for card in deck.cards:
        if anchor in card.images:
            seen_with_anchor |= card.images

    first = {shared, anchor}
    second = {shared}
    for img in singly[1:]:
        if img in seen_with_anchor:
            second.add(img)
        else:
            first.add(img)

    per = deck.order.per_line
    if len(first) != per or len(second) != per:
        raise RecoveryError(
            f"reconstructed sets have sizes {len(first)} and {len(second)}, expected {per}")

    used = {c.id for c in deck.cards}
    fresh = [i for i in range(deck.order.num_points + 2) if i not in used][:2]
    card_a = Card(fresh[0], frozenset(first))
    card_b = Card(fresh[1], frozenset(second))

    completed = Deck(deck.order, deck.cards + (card_a, card_b), deck.image_names)
    report = verify_plane(completed)
    if not report.ok:
        raise RecoveryError(
            "completed deck fails verification; input was not a plane minus two cards:\n"
            + report.summary())
    return card_a, card_b

"""Deck and grid text formats: round-trips and structural error reporting."""

import pytest

from spotit.deckio import (
    DeckFormatError,
    parse_deck,
    parse_grid,
    serialize_deck,
    serialize_grid,
)
from spotit.plane import Deck, relabel_shuffle


class TestDeckRoundTrip:
    def test_parse_serialize_identity_on_text(self, deck7):
        text = serialize_deck(deck7)
        assert serialize_deck(parse_deck(text)) == text

    def test_serialize_parse_identity_on_deck(self, deck7):
        assert parse_deck(serialize_deck(deck7)) == deck7

    def test_shuffled_deck_round_trip(self, deck7):
        shuffled = relabel_shuffle(deck7, 11)
        assert parse_deck(serialize_deck(shuffled)) == shuffled

    def test_equal_decks_equal_bytes(self, deck3):
        again = Deck(deck3.order, tuple(reversed(deck3.cards)))
        assert serialize_deck(deck3) == serialize_deck(again)

    def test_n3_has_13_card_lines(self, deck3):
        lines = serialize_deck(deck3).strip().split("\n")
        assert sum(1 for ln in lines if ln.startswith("card ")) == 13

    def test_names_round_trip(self, deck3):
        named = Deck(deck3.order, deck3.cards, {0: "anchor", 2: "maple leaf"})
        parsed = parse_deck(serialize_deck(named))
        assert parsed.image_names == {0: "anchor", 2: "maple leaf"}

    def test_partial_deck_preserved(self, deck7):
        partial = Deck(deck7.order, deck7.cards[:55])
        parsed = parse_deck(serialize_deck(partial))
        assert len(parsed.cards) == 55


class TestDeckParseErrors:
    def test_unknown_version(self):
        with pytest.raises(DeckFormatError, match="line 1.*version"):
            parse_deck("spotit-deck 9 order=7\n")

    def test_non_prime_order(self):
        with pytest.raises(DeckFormatError, match="line 1.*not prime"):
            parse_deck("spotit-deck 1 order=6\n")

    def test_duplicate_card_id(self):
        text = "spotit-deck 1 order=2\ncard 0: 0,2,4\ncard 0: 1,3,4\n"
        with pytest.raises(DeckFormatError, match="line 3.*duplicate card id"):
            parse_deck(text)

    def test_repeated_image_on_card(self):
        text = "spotit-deck 1 order=2\ncard 0: 2,2,4\n"
        with pytest.raises(DeckFormatError, match="line 2.*repeats"):
            parse_deck(text)

    def test_unsorted_images(self):
        text = "spotit-deck 1 order=2\ncard 0: 4,0,2\n"
        with pytest.raises(DeckFormatError, match="line 2.*ascending"):
            parse_deck(text)

    def test_malformed_line(self):
        text = "spotit-deck 1 order=2\nbogus line\n"
        with pytest.raises(DeckFormatError, match="line 2.*unrecognized"):
            parse_deck(text)

    def test_image_out_of_range(self):
        text = "spotit-deck 1 order=2\ncard 0: 0,2,9\n"
        with pytest.raises(DeckFormatError, match="line 2.*out of range"):
            parse_deck(text)

    def test_missing_header(self):
        with pytest.raises(DeckFormatError, match="line 1"):
            parse_deck("")

    def test_axiom_violations_are_not_errors(self, deck7):
        partial = Deck(deck7.order, deck7.cards[:10])
        parsed = parse_deck(serialize_deck(partial))
        assert len(parsed.cards) == 10


class TestGridFormat:
    def test_round_trip(self, deck7, solved7):
        text = serialize_grid(solved7)
        assert serialize_grid(parse_grid(text, deck7)) == text
        assert parse_grid(text, deck7) == solved7

    def test_row_count_check(self, deck3, solved3):
        text = serialize_grid(solved3)
        truncated = "\n".join(text.strip().split("\n")[:-1]) + "\n"
        with pytest.raises(DeckFormatError, match="rows"):
            parse_grid(truncated, deck3)

    def test_unknown_card_id(self, deck3, solved3):
        text = serialize_grid(solved3).replace(str(solved3.cells[0][0].id), "999", 1)
        with pytest.raises(DeckFormatError, match="not in deck"):
            parse_grid(text, deck3)

    def test_order_mismatch(self, deck7, solved3):
        with pytest.raises(DeckFormatError, match="order"):
            parse_grid(serialize_grid(solved3), deck7)

    def test_duplicate_card_rejected(self, deck3, solved3):
        lines = serialize_grid(solved3).strip().split("\n")
        lines[2] = lines[1]
        with pytest.raises(DeckFormatError, match="distinct"):
            parse_grid("\n".join(lines) + "\n", deck3)

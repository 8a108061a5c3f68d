"""Display names for image ids, in the spirit of the card game's artwork."""

IMAGE_WORDS = (
    "anchor", "apple", "bird", "bomb", "bottle", "cactus", "candle", "car",
    "carrot", "cat", "cheese", "clock", "clover", "crown", "daisy",
    "dinosaur", "dog", "dolphin", "dragon", "exclamation mark", "eye",
    "fire", "ghost", "gift", "hammer", "heart", "ice cube", "igloo", "key",
    "knight", "ladybug", "light bulb", "lightning", "lips", "lock",
    "maple leaf", "moon", "pencil", "question mark", "scissors", "skull",
    "snowflake", "snowman", "spider", "splat", "star", "sun", "sunglasses",
    "target", "taxi", "tortoise", "treble clef", "tree", "water drop",
    "yin yang", "zebra", "cobweb",
)


def default_names(count: int) -> dict[int, str]:
    """Names for image ids 0..count-1, padding past the word list."""
    return {
        i: IMAGE_WORDS[i] if i < len(IMAGE_WORDS) else f"img{i}"
        for i in range(count)
    }

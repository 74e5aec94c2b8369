"""Unicode helpers shared by the segmenters."""

import unicodedata

import regex

_GRAPHEME = regex.compile(r"\X")


def normalize(text: str) -> str:
    return unicodedata.normalize("NFC", text)


def graphemes(text: str) -> list[str]:
    """Split NFC-normalized ``text`` into extended grapheme clusters."""
    return _GRAPHEME.findall(normalize(text))


def is_word_char(grapheme: str) -> bool:
    """True for a letter optionally followed by combining marks."""
    if not grapheme[0].isalpha():
        return False
    return all(unicodedata.category(c).startswith("M") for c in grapheme[1:])

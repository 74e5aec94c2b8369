import sys
from pathlib import Path

import pytest

from syltok.syllabifier import LanguageProfile

sys.path.insert(0, str(Path(__file__).parent))

TOY_GRAPHEMES = ["a", "i", "í", "p", "r", "ch"]


def make_toy_profile() -> LanguageProfile:
    """Three vowels (one of them a hiatus vowel), three consonant units."""
    return LanguageProfile(
        language_id="toy",
        vowels=frozenset({"a", "i", "í"}),
        diphthongs=frozenset({("a", "i"), ("i", "a"), ("a", "í")}),
        hiatus_vowels=frozenset({"í"}),
        digraphs=frozenset({"ch"}),
        valid_onsets=frozenset({("p",), ("r",), ("ch",), ("p", "r")}),
        valid_codas=frozenset({("r",), ("p",), ("r", "p")}),
    )


@pytest.fixture
def toy_profile():
    return make_toy_profile()

import pytest
from hypothesis import given
from hypothesis import strategies as st

from syltok.english import syllabify_english
from syltok.syllabifier import Method, NotSyllabifiable

SENTENCE = "A syllable contains a single vowel unit"


def test_motivating_sentence():
    split = [syllabify_english(w).syllables for w in SENTENCE.split()]
    assert split == [("A",), ("syl", "la", "ble"), ("con", "tains"), ("a",),
                     ("sin", "gle"), ("vow", "el"), ("u", "nit")]


@pytest.mark.parametrize("word,expected", [
    ("syllable", ["syl", "la", "ble"]),
    ("contains", ["con", "tains"]),
    ("unit", ["u", "nit"]),
    ("a", ["a"]),
    ("happy", ["hap", "py"]),
    ("table", ["ta", "ble"]),
    ("teacher", ["tea", "cher"]),
    ("unhappy", ["un", "hap", "py"]),
    ("beautiful", ["beau", "ti", "ful"]),
    ("the", ["the"]),
    ("why", ["why"]),
    ("rhythm", ["rhythm"]),
])
def test_rules(word, expected):
    result = syllabify_english(word)
    assert list(result.syllables) == expected
    assert result.method is Method.ENGLISH_RULES


def test_case_preserved():
    assert syllabify_english("Syllable").syllables == ("Syl", "la", "ble")


def test_lexicon_compound():
    assert syllabify_english("sunflower", lexicon={"sun", "flower"}).syllables[0] == "sun"


@pytest.mark.parametrize("word", ["brr", "x", "3d", "e-mail"])
def test_unsyllabifiable(word):
    with pytest.raises(NotSyllabifiable):
        syllabify_english(word)


def test_empty():
    with pytest.raises(ValueError):
        syllabify_english("")


@given(st.text(alphabet="abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ", min_size=1, max_size=20))
def test_round_trip_and_vowels(word):
    try:
        result = syllabify_english(word)
    except NotSyllabifiable:
        return
    assert "".join(result.syllables) == word
    for syl in result.syllables:
        assert any(c in "aeiouy" for c in syl.lower()), result.syllables


@pytest.mark.parametrize("word,expected", [("oaw", ("oaw",)), ("oawa", ("oa", "wa"))])
def test_w_after_a_vowel_team_is_a_consonant(word, expected):
    assert syllabify_english(word).syllables == expected

import itertools
import unicodedata

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import TOY_GRAPHEMES, make_toy_profile
from oracles import SplitEnumerator
from syltok.bpe import BpeModel
from syltok.syllabifier import (FallbackMode, FallbackPolicy, LanguageProfile, Method, NotSyllabifiable,
                                ProfileError, SyllabifiedWord, apply_fallback, load_profile,
                                load_shipped_profile, parse_profile, shipped_profiles, syllabify)


@pytest.fixture(scope="module")
def es():
    return load_shipped_profile("es")


@pytest.mark.parametrize("lang,word,expected", [
    ("es", "pelota", ["pe", "lo", "ta"]),
    ("es", "a", ["a"]),
    ("es", "construcción", ["cons", "truc", "ción"]),
    ("es", "chaqueta", ["cha", "que", "ta"]),
    ("es", "perro", ["pe", "rro"]),
    ("es", "hablar", ["ha", "blar"]),
    ("es", "ciudad", ["ciu", "dad"]),
    ("es", "día", ["dí", "a"]),
    ("es", "Buey", ["Buey"]),
    ("shp", "konibo", ["ko", "ni", "bo"]),
    ("shp", "shipibo", ["shi", "pi", "bo"]),
    ("fi", "kontti", ["kont", "ti"]),
    ("fi", "lauantai", ["lau", "an", "tai"]),
    ("tr", "Türkçe", ["Türk", "çe"]),
    ("tr", "İstanbul", ["İs", "tan", "bul"]),
])
def test_shipped_profiles(lang, word, expected):
    result = syllabify(word, load_shipped_profile(lang))
    assert list(result.syllables) == expected
    assert result.method is Method.PROFILE


def test_shipped_profile_list():
    assert {"es", "fi", "tr", "shp"} <= set(shipped_profiles())


def test_no_nucleus(es):
    with pytest.raises(NotSyllabifiable) as err:
        syllabify("xyz", es)
    assert err.value.word == "xyz"


def test_foreign_grapheme(es):
    with pytest.raises(NotSyllabifiable, match="alphabet"):
        syllabify("paço", es)


def test_empty_word_rejected(es):
    with pytest.raises(ValueError):
        syllabify("", es)


def test_case_preserved(es):
    assert syllabify("PELOTA", es).syllables == ("PE", "LO", "TA")


def test_decomposed_input_is_normalized(es):
    word = unicodedata.normalize("NFD", "canción")
    result = syllabify(word, es)
    assert "".join(result.syllables) == "canción"
    assert result.syllables == ("can", "ción")


def test_coda_table_limits_onset(toy_profile):
    # "rp" is not an onset, so the cluster splits r|p
    assert syllabify("arpa", toy_profile).syllables == ("ar", "pa")
    assert syllabify("apra", toy_profile).syllables == ("a", "pra")


def test_hiatus_vowel_breaks_diphthong(toy_profile):
    assert syllabify("ai", toy_profile).syllables == ("ai",)
    assert syllabify("aí", toy_profile).syllables == ("a", "í")


def test_illegal_cluster(toy_profile):
    with pytest.raises(NotSyllabifiable):
        syllabify("prpa", toy_profile)
    with pytest.raises(NotSyllabifiable):
        syllabify("apprpa", toy_profile)


def test_syllabified_word_invariants():
    with pytest.raises(ValueError):
        SyllabifiedWord("abc", ("a", "b"), Method.PROFILE)
    with pytest.raises(ValueError):
        SyllabifiedWord("ab", ("a", "", "b"), Method.PROFILE)
    with pytest.raises(ValueError):
        SyllabifiedWord("ab", (), Method.PROFILE)


# -- fallback ----------------------------------------------------------------------------


def test_char_fallback():
    policy = FallbackPolicy(FallbackMode.CHAR_SPLIT)
    out = apply_fallback("xyz", policy)
    assert out.syllables == ("x", "y", "z")
    assert out.method is Method.FALLBACK_CHARS
    assert apply_fallback("x", policy).syllables == ("x",)


def test_char_fallback_keeps_clusters():
    word = "éx"
    assert apply_fallback(word, FallbackPolicy(FallbackMode.CHAR_SPLIT)).syllables == ("é", "x")


def test_bpe_fallback():
    model = BpeModel((("x", "y"),), frozenset("xyz"))
    out = apply_fallback("xyz", FallbackPolicy(FallbackMode.BPE_DELEGATE, model))
    assert out.syllables == ("xy", "z")
    assert out.method is Method.FALLBACK_BPE


def test_bpe_policy_requires_model():
    with pytest.raises(ValueError):
        FallbackPolicy(FallbackMode.BPE_DELEGATE)


# -- profile documents --------------------------------------------------------------------

ES_DOC = """\
# a small Spanish profile
language: es
vowels: a e i o u í
diphthongs: ai ei oi
hiatus: í
digraphs: ch ll
onsets: b c d l ll ch n p r s t
  bl br pl pr tr
codas: n s r l
"""


def test_parse_profile():
    profile = parse_profile(ES_DOC)
    assert profile.language_id == "es"
    assert ("p", "r") in profile.valid_onsets
    assert () in profile.valid_onsets and () in profile.valid_codas
    assert "ch" in profile.consonants


def test_load_profile_file(tmp_path):
    path = tmp_path / "x.profile"
    path.write_text(ES_DOC, encoding="utf-8")
    assert load_profile(path).language_id == "es"


def test_vowel_digraph_rejected():
    doc = ES_DOC.replace("digraphs: ch ll", "digraphs: ch ll aa")
    with pytest.raises(ProfileError, match="digraphs"):
        parse_profile(doc)


def test_missing_single_onset_reported_by_field():
    doc = ES_DOC.replace("ch n p r s t", "ch n p r s")
    with pytest.raises(ProfileError, match="valid_onsets.*'t'"):
        parse_profile(doc)


def test_vowel_consonant_overlap():
    with pytest.raises(ProfileError, match="also a vowel"):
        LanguageProfile("x", frozenset("ae"), valid_onsets=frozenset({("a",)}))


@pytest.mark.parametrize("doc", ["", "   \n# only a comment\n", "vowels a e\n", "bogus: x\n"])
def test_bad_documents(doc):
    with pytest.raises(ProfileError):
        parse_profile(doc)


def test_profile_search_path(tmp_path, monkeypatch):
    (tmp_path / "zz.profile").write_text(ES_DOC.replace("language: es", "language: zz"), encoding="utf-8")
    monkeypatch.setenv("SYLTOK_PROFILE_DIR", str(tmp_path))
    assert load_shipped_profile("zz").language_id == "zz"
    with pytest.raises(FileNotFoundError):
        load_shipped_profile("nope")


# -- properties ----------------------------------------------------------------------------

toy_words = st.lists(st.sampled_from(TOY_GRAPHEMES), min_size=1, max_size=12).map("".join)


@given(toy_words)
def test_round_trip_and_template(word):
    profile = make_toy_profile()
    try:
        result = syllabify(word, profile)
    except NotSyllabifiable:
        return
    assert "".join(result.syllables) == word
    for syl in result.syllables:
        keys = [k for _, k in profile.units(syl)]
        vowel_idx = [i for i, k in enumerate(keys) if k in profile.vowels]
        assert vowel_idx, syl
        first, last = vowel_idx[0], vowel_idx[-1]
        assert tuple(keys[:first]) in profile.valid_onsets
        assert tuple(keys[last + 1:]) in profile.valid_codas
        nucleus = tuple(keys[first:last + 1])
        assert len(nucleus) == 1 or (nucleus in profile.diphthongs and "í" not in nucleus)


@given(toy_words)
def test_deterministic(word):
    profile = make_toy_profile()
    try:
        first = syllabify(word, profile)
    except NotSyllabifiable:
        with pytest.raises(NotSyllabifiable):
            syllabify(word, profile)
        return
    assert syllabify(word, profile) == first


@given(st.text(alphabet="abcdefghijklmnopqrstuvwxyzáéíóúñü", min_size=1, max_size=15))
@settings(max_examples=300)
def test_spanish_round_trip(word):
    es = load_shipped_profile("es")
    try:
        result = syllabify(word, es)
    except NotSyllabifiable:
        return
    assert "".join(result.syllables) == word
    assert all(any(c in es.vowels for c in s) for s in result.syllables)


def test_oracle_up_to_five_units(toy_profile):
    nuclei = [(v,) for v in toy_profile.vowels] + [d for d in toy_profile.diphthongs if "í" not in d]
    oracle = SplitEnumerator(toy_profile.vowels, nuclei, toy_profile.valid_onsets,
                             toy_profile.valid_codas, 5)
    for n in range(1, 6):
        for units in itertools.product(TOY_GRAPHEMES, repeat=n):
            expected = oracle.split(units)
            try:
                got = syllabify("".join(units), toy_profile).syllables
            except NotSyllabifiable:
                got = None
            assert got == (None if expected is None else tuple("".join(s) for s in expected)), units

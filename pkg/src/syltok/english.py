"""Heuristic orthographic syllabification for English.

English spelling is too deep for a declarative profile, so this module
applies five rules of thumb instead:

1. VC-CV: two consonants between vowels are split, unless they form a
   consonant digraph or a legal onset (which then moves right as a whole).
2. V-CV: a single consonant between vowels starts the next syllable.
3. Consonant + "le" at the end of a word forms the last syllable.
4. Compounds split at the component boundary when both halves appear in
   an optional word list.
5. A small set of prefixes and suffixes is split off.
"""

from __future__ import annotations

import unicodedata
from typing import AbstractSet, Optional

from syltok._text import graphemes, is_word_char, normalize
from syltok.syllabifier import Method, NotSyllabifiable, SyllabifiedWord

PREFIXES = ("counter", "inter", "trans", "super", "under", "over", "anti",
            "dis", "mis", "non", "pre", "sub", "un", "re")
SUFFIXES = ("ness", "less", "ment", "ful", "ing", "ly")

# digraphs that behave as a single consonant
CONSONANT_DIGRAPHS = frozenset({"ch", "sh", "th", "ph", "wh", "gh", "ck", "qu"})
# consonants that close the preceding syllable instead of opening the next
CODA_ONLY = frozenset({"ck", "x"})
ONSET_CLUSTERS = frozenset({
    ("b", "l"), ("b", "r"), ("c", "l"), ("c", "r"), ("d", "r"), ("f", "l"),
    ("f", "r"), ("g", "l"), ("g", "r"), ("p", "l"), ("p", "r"), ("t", "r"),
    ("th", "r"), ("sh", "r"), ("ph", "r"), ("ch", "r"),
})
VOWEL_TEAMS = frozenset({
    "ai", "ay", "au", "aw", "ea", "ee", "ei", "ey", "eu", "ew", "ie", "oa",
    "oe", "oi", "oo", "ou", "ow", "oy", "ue", "ui",
    "eau", "iou", "eou",
})
_PLAIN_VOWELS = frozenset("aeiou")


def _base(letter: str) -> str:
    return unicodedata.normalize("NFD", letter)[0]


def _units(keys: list[str]) -> list[str]:
    out = []
    i = 0
    while i < len(keys):
        pair = "".join(keys[i:i + 2])
        if pair in CONSONANT_DIGRAPHS:
            out.append(pair)
            i += 2
        else:
            out.append(keys[i])
            i += 1
    return out


def _vowel_flags(units: list[str]) -> list[bool]:
    flags = []
    for i, u in enumerate(units):
        if _base(u) in _PLAIN_VOWELS:
            flags.append(True)
        elif u == "y":
            after_vowel = i > 0 and flags[i - 1]
            before_vowel = i + 1 < len(units) and _base(units[i + 1]) in _PLAIN_VOWELS
            flags.append(after_vowel or not (i == 0 and before_vowel))
        elif u == "w":
            # only inside the teams aw / ew / ow
            flags.append(i > 0 and units[i - 1] in ("a", "e", "o"))
        else:
            flags.append(False)
    return flags


def _core(keys: list[str]) -> list[int]:
    """Return syllable lengths (in graphemes) for one chunk of lowercase letters."""
    units = _units(keys)
    is_v = _vowel_flags(units)

    spans = []
    i = 0
    while i < len(units):
        if not is_v[i]:
            i += 1
            continue
        n = 1
        for size in (3, 2):
            if all(is_v[i:i + size]) and len(units[i:i + size]) == size \
                    and "".join(_base(u) for u in units[i:i + size]) in VOWEL_TEAMS:
                n = size
                break
        if n == 1 and units[i] == "w":
            # the preceding vowel joined another team ("oaw"), so w is a consonant
            is_v[i] = False
            i += 1
            continue
        spans.append((i, i + n))
        i += n
    if not spans:
        return []

    # silent final e: "make", "whole"
    last = len(units) - 1
    if (len(spans) > 1 and spans[-1] == (last, last + 1) and units[last] == "e"
            and not is_v[last - 1]):
        spans.pop()

    cuts = []
    for (_, end), (nxt, _) in zip(spans, spans[1:]):
        cluster = units[end:nxt]
        if not cluster:
            cuts.append(end)
        elif len(cluster) == 1:
            cuts.append(nxt if cluster[0] in CODA_ONLY else end)
        else:
            onset = 1
            if tuple(cluster[-2:]) in ONSET_CLUSTERS:
                onset = 2
            if cluster[-onset] in CODA_ONLY:
                onset -= 1
            cuts.append(nxt - onset)

    bounds = [0, *cuts, len(units)]
    return [sum(len(u) for u in units[a:b]) for a, b in zip(bounds, bounds[1:])]


def _has_nucleus(keys: list[str]) -> bool:
    return bool(_core(keys))


def _chunks(keys: list[str], lexicon: Optional[AbstractSet[str]]) -> list[int]:
    """Split a word into independently syllabified chunk lengths (rules 3-5)."""
    word = "".join(keys)
    if lexicon:
        for cut in range(2, len(keys) - 1):
            left, right = "".join(keys[:cut]), "".join(keys[cut:])
            if left in lexicon and right in lexicon and _has_nucleus(keys[:cut]) \
                    and _has_nucleus(keys[cut:]):
                return _chunks(keys[:cut], lexicon) + _chunks(keys[cut:], lexicon)
    for prefix in PREFIXES:
        n = len(prefix)
        rest = keys[n:]
        if word.startswith(prefix) and rest and _base(rest[0]) not in _PLAIN_VOWELS | {"y"} \
                and _has_nucleus(rest):
            return [n] + _chunks(rest, lexicon)
    for suffix in SUFFIXES:
        n = len(suffix)
        stem = keys[:-n]
        if word.endswith(suffix) and stem and _has_nucleus(stem):
            return _chunks(stem, lexicon) + [n]
    if (len(keys) >= 4 and word.endswith("le") and not _is_vowel_letter(keys[-3])
            and keys[-3] not in ("l", "x", "w") and _has_nucleus(keys[:-3])):
        if word.endswith("ckle"):
            return _chunks(keys[:-2], lexicon) + [2]
        return _chunks(keys[:-3], lexicon) + [3]
    return [len(keys)]


def _is_vowel_letter(k: str) -> bool:
    return _base(k) in _PLAIN_VOWELS or k == "y"


def syllabify_english(word: str, lexicon: Optional[AbstractSet[str]] = None) -> SyllabifiedWord:
    """Syllabify an English word with orthographic rules of thumb.

    ``lexicon`` is an optional set of lowercase words used to split compounds.

    >>> syllabify_english("syllable").syllables
    ('syl', 'la', 'ble')
    """
    if not word:
        raise ValueError("cannot syllabify an empty word")
    word = normalize(word)
    gs = graphemes(word)
    if not all(is_word_char(g) for g in gs):
        raise NotSyllabifiable(word, "non-alphabetic characters")
    keys = [normalize(g.lower()) for g in gs]
    if len("".join(keys)) != len(keys):
        raise NotSyllabifiable(word, "multi-character graphemes are not supported")

    pieces = []
    pos = 0
    for size in _chunks(keys, lexicon):
        chunk = keys[pos:pos + size]
        sub = _core(chunk)
        if not sub:
            raise NotSyllabifiable(word, "no vowel nucleus")
        for n in sub:
            pieces.append("".join(gs[pos:pos + n]))
            pos += n
    return SyllabifiedWord(word, tuple(pieces), Method.ENGLISH_RULES)

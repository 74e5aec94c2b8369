"""Liang pattern hyphenation, used as a syllabification proxy.

Pattern semantics follow TeX and the Hunspell ``hyph_*.dic`` files: letters
interleaved with digit weights, ``.`` marking a word edge.  For a word the
weights of every matching pattern are combined by pointwise maximum and an
odd value between two letters allows a break there.
"""

from __future__ import annotations

import logging
import os
import re
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Mapping, Union

from syltok._text import graphemes, is_word_char, normalize
from syltok.syllabifier import Method, SyllabifiedWord

log = logging.getLogger(__name__)

DEFAULT_MIN_LEFT = 2
DEFAULT_MIN_RIGHT = 2

_HUNSPELL_DIRECTIVES = ("LEFTHYPHENMIN", "RIGHTHYPHENMIN", "COMPOUNDLEFTHYPHENMIN",
                        "COMPOUNDRIGHTHYPHENMIN", "NOHYPHEN", "NEXTLEVEL")


class PatternError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class PatternSet:
    """Compiled hyphenation patterns.

    ``patterns`` maps a letter key (possibly with leading/trailing ``.``) to
    its weight vector, which has one entry per gap including both ends, so
    ``len(weights) == len(key) + 1``.  ``exceptions`` maps a lowercase word
    to the sorted offsets after which it breaks.
    """

    patterns: Mapping[str, tuple[int, ...]] = field(default_factory=dict)
    exceptions: Mapping[str, tuple[int, ...]] = field(default_factory=dict)
    min_left: int = DEFAULT_MIN_LEFT
    min_right: int = DEFAULT_MIN_RIGHT
    language_id: str = ""
    _max_key: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        patterns = {}
        for key, weights in self.patterns.items():
            weights = tuple(int(w) for w in weights)
            if not key or key != key.lower():
                raise ValueError(f"pattern key {key!r} must be non-empty and lowercase")
            if "." in key.strip(".") or key.strip(".") == "":
                raise ValueError(f"pattern key {key!r} has a misplaced boundary marker")
            if len(weights) != len(key) + 1:
                raise ValueError(f"pattern {key!r} needs {len(key) + 1} weights, got {len(weights)}")
            patterns[key] = weights
        if self.min_left < 1 or self.min_right < 1:
            raise ValueError("min_left and min_right must be at least 1")
        object.__setattr__(self, "patterns", MappingProxyType(patterns))
        object.__setattr__(self, "exceptions", MappingProxyType(
            {k: tuple(sorted(v)) for k, v in self.exceptions.items()}))
        object.__setattr__(self, "_max_key", max(map(len, patterns), default=0))

    def with_margins(self, min_left: int, min_right: int) -> "PatternSet":
        return PatternSet(self.patterns, self.exceptions, min_left, min_right, self.language_id)


def _parse_pattern(token: str, lineno: int) -> tuple[str, tuple[int, ...]]:
    letters = []
    weights = [0]
    for ch in token:
        if ch.isdigit():
            if weights[-1] != 0:
                raise PatternError(lineno, f"malformed pattern {token!r}")
            weights[-1] = int(ch)
        else:
            letters.append(ch)
            weights.append(0)
    key = "".join(letters)
    if not key.strip("."):
        raise PatternError(lineno, f"empty key in pattern {token!r}")
    if key.startswith(".") and weights[0]:
        raise PatternError(lineno, f"digit before the word-start marker in {token!r}")
    if key.endswith(".") and len(key) > 1 and weights[-1]:
        raise PatternError(lineno, f"digit after the word-end marker in {token!r}")
    if "." in key.strip("."):
        raise PatternError(lineno, f"boundary marker inside pattern {token!r}")
    return key, tuple(weights)


def _parse_exception(token: str, lineno: int) -> tuple[str, tuple[int, ...]]:
    if token.startswith("-") or token.endswith("-") or "--" in token:
        raise PatternError(lineno, f"malformed exception {token!r}")
    breaks = []
    offset = 0
    for part in token.split("-")[:-1]:
        offset += len(part)
        breaks.append(offset)
    return token.replace("-", ""), tuple(breaks)


def parse_patterns(text: str, language_id: str = "",
                   min_left: int = DEFAULT_MIN_LEFT, min_right: int = DEFAULT_MIN_RIGHT) -> PatternSet:
    """Parse a pattern document into a :class:`PatternSet`.

    Accepts plain whitespace-separated patterns, TeX ``\\patterns{...}`` and
    ``\\hyphenation{...}`` blocks, and Hunspell dictionaries (a charset first
    line and ``LEFTHYPHENMIN``-style directives).  Tokens containing ``-`` are
    exceptions.  Hunspell non-standard patterns (``c1k/k=k,1,2``) are skipped.
    """
    patterns: dict[str, tuple[int, ...]] = {}
    exceptions: dict[str, tuple[int, ...]] = {}
    lines = normalize(text).split("\n")
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        if lineno == 1 and re.fullmatch(r"(UTF-8|ISO8859-\d+|KOI8-[RU]|microsoft-cp\d+)", line, re.I):
            continue
        head = line.split()[0]
        if head in _HUNSPELL_DIRECTIVES:
            fields = line.split()
            if head == "LEFTHYPHENMIN" and len(fields) > 1:
                min_left = int(fields[1])
            elif head == "RIGHTHYPHENMIN" and len(fields) > 1:
                min_right = int(fields[1])
            continue
        line = re.sub(r"\\(patterns|hyphenation)\s*\{|\}", " ", line)
        for token in line.split():
            token = token.lower()
            if "/" in token:
                log.debug("line %d: skipping non-standard pattern %r", lineno, token)
                continue
            if "-" in token:
                word, breaks = _parse_exception(token, lineno)
                exceptions[word] = breaks
            else:
                key, weights = _parse_pattern(token, lineno)
                if key in patterns and patterns[key] != weights:
                    log.debug("line %d: pattern %r redefined", lineno, key)
                patterns[key] = weights
    return PatternSet(patterns, exceptions, min_left, min_right, language_id)


def load_patterns(path: Union[str, os.PathLike], **kwargs) -> PatternSet:
    return parse_patterns(Path(path).read_text(encoding="utf-8"), **kwargs)


def break_points(word: str, ps: PatternSet) -> list[int]:
    """Offsets (in code points) after which ``word`` may be broken."""
    lower = word.lower()
    n = len(word)
    if len(lower) != n:
        return []
    if lower in ps.exceptions:
        candidates = ps.exceptions[lower]
    else:
        work = "." + lower + "."
        scores = [0] * (len(work) + 1)
        for start in range(len(work)):
            for end in range(start + 1, min(len(work), start + ps._max_key) + 1):
                weights = ps.patterns.get(work[start:end])
                if weights is None:
                    continue
                for k, w in enumerate(weights):
                    if w > scores[start + k]:
                        scores[start + k] = w
        # scores[i + 1] is the gap before word[i]
        candidates = [i for i in range(1, n) if scores[i + 1] % 2]
    return [i for i in candidates if ps.min_left <= i <= n - ps.min_right]


def hyphenate(word: str, ps: PatternSet) -> SyllabifiedWord:
    """Split ``word`` at its hyphenation points.

    Words containing anything but letters are returned whole.
    """
    if not word:
        raise ValueError("cannot hyphenate an empty word")
    word = normalize(word)
    gs = graphemes(word)
    if not all(is_word_char(g) for g in gs):
        return SyllabifiedWord(word, (word,), Method.HYPHENATION)
    # never split a grapheme cluster
    edges = set()
    pos = 0
    for g in gs:
        pos += len(g)
        edges.add(pos)
    cuts = [c for c in break_points(word, ps) if c in edges]
    bounds = [0, *cuts, len(word)]
    return SyllabifiedWord(word, tuple(word[a:b] for a, b in zip(bounds, bounds[1:])),
                           Method.HYPHENATION)

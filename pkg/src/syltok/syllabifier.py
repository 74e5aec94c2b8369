"""Profile-driven syllabification.

A :class:`LanguageProfile` declares the vowels, diphthongs, consonant
digraphs and the legal onset/coda clusters of one language.  :func:`syllabify`
locates vowel nuclei first and then distributes every intervocalic consonant
cluster by the maximal onset principle, subject to the coda table.

Words the profile cannot account for raise :class:`NotSyllabifiable`; callers
recover with :func:`apply_fallback`.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import TYPE_CHECKING, Iterable, Optional, Sequence, Union

from syltok._text import graphemes, normalize

if TYPE_CHECKING:
    from syltok.bpe import BpeModel

PROFILE_DIR_ENV = "SYLTOK_PROFILE_DIR"
PROFILE_SUFFIX = ".profile"

Cluster = tuple[str, ...]


class NotSyllabifiable(ValueError):
    """Raised when a word cannot be split with the active rules."""

    def __init__(self, word: str, reason: str):
        super().__init__(f"cannot syllabify {word!r}: {reason}")
        self.word = word
        self.reason = reason


class ProfileError(ValueError):
    """A profile document failed to parse or violates a profile invariant."""


class Method(str, enum.Enum):
    PROFILE = "profile"
    ENGLISH_RULES = "english_rules"
    HYPHENATION = "hyphenation"
    FALLBACK_CHARS = "fallback_chars"
    FALLBACK_BPE = "fallback_bpe"


@dataclass(frozen=True)
class SyllabifiedWord:
    word: str
    syllables: tuple[str, ...]
    method: Method

    def __post_init__(self):
        object.__setattr__(self, "syllables", tuple(self.syllables))
        if "".join(self.syllables) != self.word:
            raise ValueError(
                f"syllables {self.syllables!r} do not concatenate to {self.word!r}")
        if self.word and (not self.syllables or any(s == "" for s in self.syllables)):
            raise ValueError(f"empty syllable in segmentation of {self.word!r}")

    def __iter__(self):
        return iter(self.syllables)

    def __len__(self):
        return len(self.syllables)


class FallbackMode(str, enum.Enum):
    CHAR_SPLIT = "char_split"
    BPE_DELEGATE = "bpe_delegate"


@dataclass(frozen=True)
class FallbackPolicy:
    mode: FallbackMode = FallbackMode.CHAR_SPLIT
    bpe_model: Optional["BpeModel"] = None

    def __post_init__(self):
        object.__setattr__(self, "mode", FallbackMode(self.mode))
        if self.mode is FallbackMode.BPE_DELEGATE and self.bpe_model is None:
            raise ValueError("fallback mode bpe_delegate requires a bpe_model")


def apply_fallback(word: str, policy: FallbackPolicy) -> SyllabifiedWord:
    """Segment ``word`` without syllable rules: per grapheme or via BPE."""
    if not word:
        raise ValueError("cannot segment an empty word")
    word = normalize(word)
    if policy.mode is FallbackMode.CHAR_SPLIT:
        return SyllabifiedWord(word, tuple(graphemes(word)), Method.FALLBACK_CHARS)
    pieces = policy.bpe_model.encode(word)
    return SyllabifiedWord(word, tuple(pieces), Method.FALLBACK_BPE)


def _lower(g: str) -> str:
    if g.isascii():
        return g.lower()
    # str.lower() turns U+0130 into "i" plus a combining dot above
    return normalize(g.replace("\u0130", "i").lower())


def _split_units(text: str, digraphs_by_length: Sequence[tuple[int, frozenset]]) -> list[tuple[str, str]]:
    """Greedy longest-match grouping of graphemes into (surface, key) units."""
    gs = graphemes(text)
    keys = [_lower(g) for g in gs]
    units = []
    i = 0
    while i < len(gs):
        for n, table in digraphs_by_length:
            if i + n <= len(gs) and "".join(keys[i:i + n]) in table:
                units.append(("".join(gs[i:i + n]), "".join(keys[i:i + n])))
                i += n
                break
        else:
            units.append((gs[i], keys[i]))
            i += 1
    return units


@dataclass(frozen=True)
class LanguageProfile:
    """Declarative syllabification rules for one language.

    ``valid_onsets`` and ``valid_codas`` hold clusters as tuples of consonant
    units (single graphemes or digraphs).  The empty cluster is always legal
    on both sides and is added automatically.
    """

    language_id: str
    vowels: frozenset[str]
    diphthongs: frozenset[tuple[str, str]] = frozenset()
    hiatus_vowels: frozenset[str] = frozenset()
    digraphs: frozenset[str] = frozenset()
    valid_onsets: frozenset[Cluster] = frozenset()
    valid_codas: frozenset[Cluster] = frozenset()
    triphthongs: frozenset[tuple[str, str, str]] = frozenset()
    consonants: frozenset[str] = field(init=False)
    alphabet: frozenset[str] = field(init=False, repr=False, compare=False)
    _digraphs_by_length: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        norm = lambda xs: frozenset(_lower(x) for x in xs)  # noqa: E731
        set_ = lambda name, value: object.__setattr__(self, name, value)  # noqa: E731
        set_("vowels", norm(self.vowels))
        set_("hiatus_vowels", norm(self.hiatus_vowels))
        set_("digraphs", norm(self.digraphs))
        set_("diphthongs", frozenset(tuple(_lower(v) for v in d) for d in self.diphthongs))
        set_("triphthongs", frozenset(tuple(_lower(v) for v in t) for t in self.triphthongs))
        set_("valid_onsets", frozenset(tuple(_lower(c) for c in o) for o in self.valid_onsets) | {()})
        set_("valid_codas", frozenset(tuple(_lower(c) for c in o) for o in self.valid_codas) | {()})
        consonants = set(self.digraphs)
        for cluster in self.valid_onsets | self.valid_codas:
            consonants.update(cluster)
        set_("consonants", frozenset(consonants))
        set_("alphabet", self.vowels | self.consonants)
        by_len: dict[int, set] = {}
        for d in self.digraphs:
            by_len.setdefault(len(graphemes(d)), set()).add(d)
        set_("_digraphs_by_length",
             tuple((n, frozenset(ds)) for n, ds in sorted(by_len.items(), reverse=True)))
        self._validate()

    def _validate(self) -> None:
        problems = []
        if not self.language_id:
            problems.append("language_id: must be non-empty")
        if not self.vowels:
            problems.append("vowels: must be non-empty")
        for v in sorted(self.vowels):
            if len(graphemes(v)) != 1:
                problems.append(f"vowels: {v!r} is not a single grapheme")
        for name, groups in (("diphthongs", self.diphthongs), ("triphthongs", self.triphthongs)):
            for group in sorted(groups):
                for v in group:
                    if len(graphemes(v)) != 1:
                        problems.append(f"{name}: member {v!r} of {''.join(group)!r} is not a single grapheme")
                    elif v not in self.vowels:
                        problems.append(f"{name}: member {v!r} of {''.join(group)!r} is not a vowel")
        for v in sorted(self.hiatus_vowels - self.vowels):
            problems.append(f"hiatus: {v!r} is not listed among vowels")
        for d in sorted(self.digraphs):
            parts = graphemes(d)
            if len(parts) < 2:
                problems.append(f"digraphs: {d!r} must span at least two graphemes")
            if all(p in self.vowels for p in parts):
                problems.append(f"digraphs: {d!r} is made of vowels")
            elif parts[0] in self.vowels:
                problems.append(f"digraphs: {d!r} starts with vowel {parts[0]!r}")
        for c in sorted(self.consonants & self.vowels):
            problems.append(f"valid_onsets/valid_codas: {c!r} is also a vowel")
        singles = {o[0] for o in self.valid_onsets if len(o) == 1}
        for c in sorted(self.consonants - singles):
            problems.append(f"valid_onsets: missing single consonant {c!r}")
        if problems:
            raise ProfileError(f"profile {self.language_id!r}: " + "; ".join(problems))

    def units(self, word: str) -> list[tuple[str, str]]:
        """Split ``word`` into (surface, lowercase key) grapheme units."""
        return _split_units(word, self._digraphs_by_length)

    def cluster(self, text: str) -> Cluster:
        return tuple(key for _, key in self.units(text))

    def nuclei(self, keys: Sequence[str]) -> list[tuple[int, int]]:
        """Leftmost-longest grouping of vowel units into nuclei, as [start, end) spans."""
        spans = []
        i = 0
        while i < len(keys):
            if keys[i] not in self.vowels:
                i += 1
                continue
            n = 1
            if tuple(keys[i:i + 3]) in self.triphthongs:
                n = 3
            elif (tuple(keys[i:i + 2]) in self.diphthongs
                  and not self.hiatus_vowels.intersection(keys[i:i + 2])):
                n = 2
            spans.append((i, i + n))
            i += n
        return spans


def syllabify(word: str, profile: LanguageProfile) -> SyllabifiedWord:
    """Split ``word`` into syllables according to ``profile``.

    >>> syllabify("pelota", load_shipped_profile("es")).syllables
    ('pe', 'lo', 'ta')
    """
    if not word:
        raise ValueError("cannot syllabify an empty word")
    word = normalize(word)
    units = profile.units(word)
    keys = [k for _, k in units]
    for key in keys:
        if key not in profile.alphabet:
            raise NotSyllabifiable(word, f"grapheme {key!r} is outside the {profile.language_id} alphabet")
    spans = profile.nuclei(keys)
    if not spans:
        raise NotSyllabifiable(word, "no vowel nucleus")
    if tuple(keys[:spans[0][0]]) not in profile.valid_onsets:
        raise NotSyllabifiable(word, "illegal word-initial onset")
    if tuple(keys[spans[-1][1]:]) not in profile.valid_codas:
        raise NotSyllabifiable(word, "illegal word-final coda")

    cuts = []
    for (_, end), (nxt, _) in zip(spans, spans[1:]):
        cluster = tuple(keys[end:nxt])
        for j in range(len(cluster) + 1):
            if cluster[j:] in profile.valid_onsets and cluster[:j] in profile.valid_codas:
                cuts.append(end + j)
                break
        else:
            raise NotSyllabifiable(word, f"no legal split of cluster {''.join(cluster)!r}")

    bounds = [0, *cuts, len(units)]
    pieces = tuple("".join(s for s, _ in units[a:b]) for a, b in zip(bounds, bounds[1:]))
    return SyllabifiedWord(word, pieces, Method.PROFILE)


# -- profile documents -------------------------------------------------------

_SECTIONS = ("language", "vowels", "diphthongs", "triphthongs", "hiatus", "digraphs", "onsets", "codas")


def parse_profile(text: str) -> LanguageProfile:
    """Parse a profile document.

    Each section starts on a line ``name: item item ...``; indented lines
    continue the previous section.  ``#`` starts a comment.
    """
    sections: dict[str, list[str]] = {}
    current = None
    for lineno, raw in enumerate(normalize(text).split("\n"), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if line[0].isspace():
            if current is None:
                raise ProfileError(f"line {lineno}: continuation line outside a section")
            sections[current].extend(line.split())
            continue
        name, sep, rest = line.partition(":")
        name = name.strip().lower()
        if not sep or name not in _SECTIONS:
            raise ProfileError(f"line {lineno}: expected one of {', '.join(_SECTIONS)} followed by ':'")
        if name in sections:
            raise ProfileError(f"line {lineno}: duplicate section {name!r}")
        sections[name] = rest.split()
        current = name
    if not sections:
        raise ProfileError("empty profile document")
    if len(sections.get("language", [])) != 1:
        raise ProfileError("language: exactly one language id is required")
    if not sections.get("vowels"):
        raise ProfileError("vowels: section is required")

    digraphs = frozenset(_lower(d) for d in sections.get("digraphs", []))
    by_len: dict[int, set] = {}
    for d in digraphs:
        by_len.setdefault(len(graphemes(d)), set()).add(d)
    table = tuple((n, frozenset(ds)) for n, ds in sorted(by_len.items(), reverse=True))
    clusters = lambda name: frozenset(  # noqa: E731
        tuple(k for _, k in _split_units(item, table)) for item in sections.get(name, []))

    def groups(name: str, size: int) -> frozenset:
        out = set()
        for item in sections.get(name, []):
            parts = tuple(_lower(g) for g in graphemes(item))
            if len(parts) != size:
                raise ProfileError(f"{name}: {item!r} must have exactly {size} graphemes")
            out.add(parts)
        return frozenset(out)

    return LanguageProfile(
        language_id=sections["language"][0],
        vowels=frozenset(sections["vowels"]),
        diphthongs=groups("diphthongs", 2),
        triphthongs=groups("triphthongs", 3),
        hiatus_vowels=frozenset(sections.get("hiatus", [])),
        digraphs=digraphs,
        valid_onsets=clusters("onsets"),
        valid_codas=clusters("codas"),
    )


def load_profile(source: Union[str, os.PathLike]) -> LanguageProfile:
    """Load a profile from a file path."""
    return parse_profile(Path(source).read_text(encoding="utf-8"))


def shipped_profiles() -> list[str]:
    return sorted(p.name[:-len(PROFILE_SUFFIX)]
                  for p in resources.files("syltok").joinpath("profiles").iterdir()
                  if p.name.endswith(PROFILE_SUFFIX))


def load_shipped_profile(language_id: str, search_path: Optional[Iterable[Union[str, os.PathLike]]] = None) -> LanguageProfile:
    """Find ``<language_id>.profile`` on the search path.

    Directories named by ``$SYLTOK_PROFILE_DIR`` (``os.pathsep``-separated)
    are searched before the profiles bundled with the package.
    """
    dirs = list(search_path or [])
    env = os.environ.get(PROFILE_DIR_ENV)
    if env:
        dirs.extend(d for d in env.split(os.pathsep) if d)
    name = language_id + PROFILE_SUFFIX
    for d in dirs:
        candidate = Path(d) / name
        if candidate.is_file():
            return load_profile(candidate)
    bundled = resources.files("syltok").joinpath("profiles").joinpath(name)
    if bundled.is_file():
        return parse_profile(bundled.read_text(encoding="utf-8"))
    raise FileNotFoundError(f"no syllabification profile for {language_id!r}")

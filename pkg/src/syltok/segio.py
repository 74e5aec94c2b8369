"""Corpus readers, segmentation formats and the segmentation pipeline.

Three serializations of a segmented sentence are supported::

    boundary   A @ syl la ble @ con tains
    suffix     A syl@ la@ ble con@ tains
    prefix     ▁A ▁syl la ble ▁con tains

Every encoder refuses pieces that would make its output ambiguous, so
``decode_format(encode_format(s, f), f) == s`` always holds.
"""

from __future__ import annotations

import enum
import functools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import islice
from typing import Callable, Iterable, Iterator, Optional, Sequence, Union

from syltok._text import graphemes, is_word_char, normalize
from syltok.bpe import BpeModel
from syltok.english import syllabify_english
from syltok.hyphenator import PatternSet, hyphenate
from syltok.syllabifier import (FallbackPolicy, LanguageProfile, Method, NotSyllabifiable,
                                SyllabifiedWord, apply_fallback, syllabify)

BOUNDARY_TOKEN = "@"
SUFFIX_MARKER = "@"
PREFIX_MARKER = "▁"


class FormatError(ValueError):
    """Malformed serialized text, or pieces that cannot be serialized safely."""

    def __init__(self, message: str, position: Optional[int] = None):
        if position is not None:
            message = f"{message} (at character {position})"
        super().__init__(message)
        self.position = position


class MarkerCollision(FormatError):
    pass


class Format(str, enum.Enum):
    BOUNDARY = "boundary"
    SUFFIX = "suffix"
    PREFIX = "prefix"


Word = Union[SyllabifiedWord, Sequence[str]]


@dataclass(frozen=True)
class SegmentedSentence:
    words: tuple[tuple[str, ...], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "words", tuple(
            tuple(w.syllables) if isinstance(w, SyllabifiedWord) else tuple(w) for w in self.words))

    @classmethod
    def of(cls, words: Iterable[Word]) -> "SegmentedSentence":
        return cls(tuple(words))

    def surface_words(self) -> list[str]:
        return ["".join(w) for w in self.words]

    def text(self) -> str:
        return " ".join(self.surface_words())

    def __len__(self):
        return len(self.words)


def _as_sentence(s: Union[SegmentedSentence, Iterable[Word]]) -> SegmentedSentence:
    return s if isinstance(s, SegmentedSentence) else SegmentedSentence.of(s)


def _check_pieces(s: SegmentedSentence) -> None:
    for w in s.words:
        if not w:
            raise FormatError("word without pieces")
        for piece in w:
            if not piece:
                raise FormatError("empty piece")
            if any(c.isspace() for c in piece):
                raise FormatError(f"piece {piece!r} contains whitespace")


def encode_boundary_format(s, boundary: str = BOUNDARY_TOKEN) -> str:
    s = _as_sentence(s)
    _check_pieces(s)
    for w in s.words:
        if boundary in w:
            raise MarkerCollision(f"piece equals the boundary token {boundary!r}")
    return f" {boundary} ".join(" ".join(w) for w in s.words)


def encode_suffix_format(s, marker: str = SUFFIX_MARKER) -> str:
    s = _as_sentence(s)
    _check_pieces(s)
    out = []
    for w in s.words:
        for piece in w:
            if piece.endswith(marker):
                raise MarkerCollision(f"piece {piece!r} ends with the continuation marker {marker!r}")
        out.extend(p + marker for p in w[:-1])
        out.append(w[-1])
    return " ".join(out)


def encode_prefix_format(s, marker: str = PREFIX_MARKER) -> str:
    s = _as_sentence(s)
    _check_pieces(s)
    out = []
    for w in s.words:
        for piece in w:
            if piece.startswith(marker):
                raise MarkerCollision(f"piece {piece!r} starts with the word marker {marker!r}")
        out.append(marker + w[0])
        out.extend(w[1:])
    return " ".join(out)


def encode_format(s, format_id: Union[Format, str], marker: Optional[str] = None) -> str:
    format_id = Format(format_id)
    kwargs = {} if marker is None else {"marker" if format_id is not Format.BOUNDARY else "boundary": marker}
    return _ENCODERS[format_id](s, **kwargs)


_ENCODERS = {
    Format.BOUNDARY: encode_boundary_format,
    Format.SUFFIX: encode_suffix_format,
    Format.PREFIX: encode_prefix_format,
}


def _tokens(text: str) -> Iterator[tuple[int, str]]:
    pos = 0
    for token in text.split(" "):
        if not token:
            raise FormatError("empty token (repeated or edge space)", pos)
        yield pos, token
        pos += len(token) + 1


def decode_format(text: str, format_id: Union[Format, str], marker: Optional[str] = None) -> SegmentedSentence:
    """Invert one of the encoders; reconstructed words join their pieces."""
    format_id = Format(format_id)
    if text == "":
        return SegmentedSentence()
    words: list[list[str]] = []
    if format_id is Format.BOUNDARY:
        boundary = marker or BOUNDARY_TOKEN
        current: list[str] = []
        for pos, token in _tokens(text):
            if token == boundary:
                if not current:
                    raise FormatError("boundary token without a preceding word", pos)
                words.append(current)
                current = []
            else:
                current.append(token)
        if not current:
            raise FormatError("boundary token at the end of the sentence", len(text))
        words.append(current)
    elif format_id is Format.SUFFIX:
        marker = marker or SUFFIX_MARKER
        current = []
        for pos, token in _tokens(text):
            cont = token.endswith(marker)
            piece = token[:-len(marker)] if cont else token
            if not piece:
                raise FormatError("continuation marker without a piece", pos)
            current.append(piece)
            if not cont:
                words.append(current)
                current = []
        if current:
            raise FormatError("dangling continuation marker at the end of the sentence", len(text))
    else:
        marker = marker or PREFIX_MARKER
        for pos, token in _tokens(text):
            if token.startswith(marker):
                piece = token[len(marker):]
                if not piece:
                    raise FormatError("word marker without a piece", pos)
                words.append([piece])
            elif not words:
                raise FormatError("sentence does not start with the word marker", pos)
            else:
                words[-1].append(token)
    return SegmentedSentence(tuple(tuple(w) for w in words))


# -- corpora -------------------------------------------------------------------


class SourceKind(str, enum.Enum):
    PLAIN_TEXT = "plain_text"
    CONLLU = "conllu"
    PARALLEL_PAIR = "parallel_pair"
    PRESEGMENTED = "presegmented"


class CorpusError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass
class CorpusHandle:
    """A single-pass stream of sentences.

    Plain text and CoNLL-U sentences are lists of surface words; presegmented
    sentences are lists of piece tuples; parallel corpora yield
    ``(source_words, target_words)`` pairs.
    """

    kind: SourceKind
    _sentences: Iterable

    def __iter__(self):
        return iter(self._sentences)

    def words(self) -> Iterator[list[str]]:
        """Surface words of every sentence (both sides of a parallel corpus)."""
        for item in self:
            if self.kind is SourceKind.PARALLEL_PAIR:
                yield from item
            elif self.kind is SourceKind.PRESEGMENTED:
                yield ["".join(w) for w in item]
            else:
                yield item


def _lines(source: Union[str, Iterable[str]]) -> Iterator[str]:
    if isinstance(source, str):
        source = source.split("\n")
        if source and source[-1] == "":
            source.pop()
    for line in source:
        yield line.rstrip("\n")


def read_plain(source: Union[str, Iterable[str]]) -> CorpusHandle:
    """One sentence per line, split on Unicode whitespace."""
    return CorpusHandle(SourceKind.PLAIN_TEXT, (normalize(line).split() for line in _lines(source)))


def _conllu_sentences(source) -> Iterator[list[str]]:
    words: list[str] = []
    skip_until = 0
    for lineno, line in enumerate(_lines(source), 1):
        if not line.strip():
            if words:
                yield words
            words, skip_until = [], 0
            continue
        if line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise CorpusError(lineno, f"expected 10 tab-separated columns, found {len(cols)}")
        token_id, form = cols[0], normalize(cols[1])
        if "-" in token_id:
            start, _, end = token_id.partition("-")
            if not (start.isdigit() and end.isdigit()) or int(end) < int(start):
                raise CorpusError(lineno, f"bad multiword token range {token_id!r}")
            words.append(form)
            skip_until = int(end)
        elif "." in token_id:
            continue  # empty node
        elif token_id.isdigit():
            if int(token_id) > skip_until:
                words.append(form)
        else:
            raise CorpusError(lineno, f"bad token id {token_id!r}")
    if words:
        yield words


def read_conllu(source: Union[str, Iterable[str]]) -> CorpusHandle:
    """Surface-form sentences from a CoNLL-U document.

    Multiword-token ranges contribute their surface form and the syntactic
    words they cover are skipped.  Errors surface during iteration.
    """
    return CorpusHandle(SourceKind.CONLLU, _conllu_sentences(source))


def _presegmented(source) -> Iterator[list[tuple[str, ...]]]:
    lines = _lines(source)
    header = next(lines, None)
    if header is None:
        return
    head = header.strip()
    if not head.startswith("#") or "delimiter:" not in head:
        raise CorpusError(1, "presegmented corpus must start with '# delimiter: <d>'")
    delimiter = head.split("delimiter:", 1)[1].strip()
    if not delimiter:
        raise CorpusError(1, "empty delimiter")
    for lineno, line in enumerate(lines, 2):
        sentence = []
        for word in normalize(line).split():
            pieces = tuple(word.split(delimiter))
            if not all(pieces):
                raise CorpusError(lineno, f"empty piece in {word!r}")
            sentence.append(pieces)
        yield sentence


def read_presegmented(source: Union[str, Iterable[str]]) -> CorpusHandle:
    """Externally segmented text (e.g. morphemes).

    The first line declares the piece delimiter, e.g. ``# delimiter: +``;
    words on the following lines are split on it.
    """
    return CorpusHandle(SourceKind.PRESEGMENTED, _presegmented(source))


def _parallel(src, tgt) -> Iterator[tuple[list[str], list[str]]]:
    src_lines, tgt_lines = _lines(src), _lines(tgt)
    lineno = 0
    sentinel = object()
    while True:
        a, b = next(src_lines, sentinel), next(tgt_lines, sentinel)
        lineno += 1
        if a is sentinel and b is sentinel:
            return
        if a is sentinel or b is sentinel:
            raise CorpusError(lineno, "parallel files have different line counts")
        yield normalize(a).split(), normalize(b).split()


def read_parallel(source: Union[str, Iterable[str]], target: Union[str, Iterable[str]]) -> CorpusHandle:
    return CorpusHandle(SourceKind.PARALLEL_PAIR, _parallel(source, target))


# -- segmentation pipeline -------------------------------------------------------

Segmenter = Callable[[str], SyllabifiedWord]


def _hyphenation_segmenter(word: str, patterns: PatternSet) -> SyllabifiedWord:
    if not all(is_word_char(g) for g in graphemes(word)):
        raise NotSyllabifiable(word, "non-letter characters")
    return hyphenate(word, patterns)


def _bpe_segmenter(word: str, model: BpeModel) -> SyllabifiedWord:
    return SyllabifiedWord(normalize(word), tuple(model.encode(word)), Method.FALLBACK_BPE)


def _char_segmenter(word: str) -> SyllabifiedWord:
    return apply_fallback(word, FallbackPolicy())


def make_segmenter(kind: str, *, profile: Optional[LanguageProfile] = None,
                   patterns: Optional[PatternSet] = None, bpe_model: Optional[BpeModel] = None,
                   lexicon=None) -> Segmenter:
    """Build a word segmenter: ``profile``, ``english``, ``hyphenation``, ``bpe`` or ``char``."""
    if kind == "profile":
        if profile is None:
            raise ValueError("profile segmenter needs a LanguageProfile")
        return functools.partial(syllabify, profile=profile)
    if kind == "english":
        return functools.partial(syllabify_english, lexicon=lexicon)
    if kind == "hyphenation":
        if patterns is None:
            raise ValueError("hyphenation segmenter needs a PatternSet")
        return functools.partial(_hyphenation_segmenter, patterns=patterns)
    if kind == "bpe":
        if bpe_model is None:
            raise ValueError("bpe segmenter needs a BpeModel")
        return functools.partial(_bpe_segmenter, model=bpe_model)
    if kind == "char":
        return _char_segmenter
    raise ValueError(f"unknown segmenter {kind!r}")


def segment_word(word: str, segmenter: Segmenter, policy: FallbackPolicy) -> SyllabifiedWord:
    try:
        return segmenter(word)
    except NotSyllabifiable:
        return apply_fallback(word, policy)


def segment_sentence(words: Sequence[str], segmenter: Segmenter, policy: FallbackPolicy) -> SegmentedSentence:
    return SegmentedSentence(tuple(segment_word(w, segmenter, policy) for w in words))


def _chunks(it: Iterable, size: int) -> Iterator[list]:
    it = iter(it)
    while chunk := list(islice(it, size)):
        yield chunk


def iter_segmented(handle: CorpusHandle, segmenter: Segmenter, policy: FallbackPolicy,
                   threads: int = 1) -> Iterator[SegmentedSentence]:
    """Segment every sentence of ``handle`` in order.

    Presegmented corpora pass through unchanged.  With ``threads > 1``
    sentences are processed concurrently; output order is unaffected.
    """
    if handle.kind is SourceKind.PARALLEL_PAIR:
        raise ValueError("segment the two sides of a parallel corpus separately")
    if handle.kind is SourceKind.PRESEGMENTED:
        for sentence in handle:
            yield SegmentedSentence(tuple(sentence))
        return
    work = functools.partial(segment_sentence, segmenter=segmenter, policy=policy)
    if threads <= 1:
        yield from map(work, handle)
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for chunk in _chunks(handle, 256 * threads):
            yield from pool.map(work, chunk)


def segment_corpus(handle: CorpusHandle, segmenter: Segmenter, policy: FallbackPolicy,
                   format_id: Union[Format, str], threads: int = 1) -> Iterator[str]:
    """Segment and serialize a corpus, one output line per sentence."""
    format_id = Format(format_id)
    for sentence in iter_segmented(handle, segmenter, policy, threads):
        yield encode_format(sentence, format_id)

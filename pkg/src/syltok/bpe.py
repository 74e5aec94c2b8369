"""Deterministic byte-pair encoding over grapheme clusters.

Training counts adjacent symbol pairs inside words (never across them),
merges the most frequent pair and repeats.  Ties go to the
lexicographically smallest ``(left, right)`` pair, so a given word-frequency
table always produces the same merge list regardless of its iteration order.
"""

from __future__ import annotations

import heapq
import os
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Collection, Iterable, Mapping, Optional, Sequence, Union

from syltok._text import graphemes, normalize

END_OF_WORD = "</w>"
MODEL_VERSION = "syltok-bpe 1"

Pair = tuple[str, str]


class BpeModelError(ValueError):
    pass


@dataclass(frozen=True)
class BpeModel:
    merges: tuple[Pair, ...]
    alphabet: frozenset[str]
    end_of_word_marker: str = END_OF_WORD
    vocabulary: frozenset[str] = field(init=False)
    _ranks: dict = field(init=False, repr=False, compare=False)
    _cache: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        merges = tuple((str(a), str(b)) for a, b in self.merges)
        object.__setattr__(self, "merges", merges)
        object.__setattr__(self, "alphabet", frozenset(self.alphabet))
        if self.end_of_word_marker in self.alphabet:
            raise BpeModelError(f"end-of-word marker {self.end_of_word_marker!r} is in the alphabet")
        vocab = set(self.alphabet)
        for i, (a, b) in enumerate(merges, 1):
            for operand in (a, b):
                if operand not in vocab:
                    raise BpeModelError(f"merge {i} ({a} {b}): operand {operand!r} is not known yet")
            if a + b in vocab:
                raise BpeModelError(f"merge {i} ({a} {b}): piece {a + b!r} already exists")
            vocab.add(a + b)
        object.__setattr__(self, "vocabulary", frozenset(vocab))
        object.__setattr__(self, "_ranks", {pair: i for i, pair in enumerate(merges)})
        object.__setattr__(self, "_cache", {})

    def __len__(self):
        return len(self.vocabulary)

    def encode(self, word: str, with_marker: bool = False) -> list[str]:
        """Segment one word by replaying the merges in training order.

        Graphemes the model has never seen pass through as single pieces.
        """
        if not word:
            raise ValueError("cannot encode an empty word")
        pieces = self._cache.get(word)
        if pieces is None:
            pieces = self._apply(graphemes(word))
            if len(self._cache) < 100_000:
                self._cache[word] = pieces
        pieces = list(pieces)
        if with_marker:
            pieces.append(self.end_of_word_marker)
        return pieces

    def _apply(self, symbols: list[str]) -> tuple[str, ...]:
        ranks = self._ranks
        while len(symbols) > 1:
            best = min(range(len(symbols) - 1),
                       key=lambda i: ranks.get((symbols[i], symbols[i + 1]), len(ranks)))
            pair = (symbols[best], symbols[best + 1])
            if pair not in ranks:
                break
            symbols = _merge_pair(symbols, pair)
        return tuple(symbols)

    def decode(self, pieces: Sequence[str]) -> str:
        return decode(pieces, self.end_of_word_marker)

    def dumps(self) -> str:
        header = "\t".join([
            f"#version: {MODEL_VERSION}",
            f"marker={self.end_of_word_marker}",
            "normalization=NFC",
            "case=preserved",
            "alphabet=" + " ".join(sorted(self.alphabet)),
        ])
        return "".join([header, "\n", *(f"{a} {b}\n" for a, b in self.merges)])

    def save(self, path: Union[str, os.PathLike]) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8", newline="\n")

    @classmethod
    def loads(cls, text: str) -> "BpeModel":
        lines = text.split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        if not lines or not lines[0].startswith("#version:"):
            raise BpeModelError("line 1: missing '#version:' header")
        fields = lines[0].split("\t")
        if fields[0] != f"#version: {MODEL_VERSION}":
            raise BpeModelError(f"line 1: unsupported model version {fields[0]!r}")
        meta = dict(f.split("=", 1) for f in fields[1:] if "=" in f)
        if "marker" not in meta:
            raise BpeModelError("line 1: header lacks marker=")
        alphabet = set(meta.get("alphabet", "").split())
        merges = []
        for lineno, line in enumerate(lines[1:], 2):
            parts = line.split(" ")
            if len(parts) != 2 or not all(parts):
                raise BpeModelError(f"line {lineno}: expected two space-separated pieces")
            merges.append((parts[0], parts[1]))
        if "alphabet" not in meta:
            # older files: recover single-grapheme operands
            for a, b in merges:
                alphabet.update(p for p in (a, b) if len(graphemes(p)) == 1)
        return cls(tuple(merges), frozenset(alphabet), meta["marker"])

    @classmethod
    def load(cls, path: Union[str, os.PathLike]) -> "BpeModel":
        return cls.loads(Path(path).read_text(encoding="utf-8"))


def decode(pieces: Sequence[str], marker: str = END_OF_WORD) -> str:
    """Join pieces back into the word, dropping end-of-word markers."""
    out = []
    for piece in pieces:
        if piece == marker:
            continue
        if piece.endswith(marker):
            piece = piece[:-len(marker)]
        out.append(piece)
    return "".join(out)


def _merge_pair(symbols: list[str], pair: Pair) -> list[str]:
    a, b = pair
    out = []
    i = 0
    while i < len(symbols):
        if i + 1 < len(symbols) and symbols[i] == a and symbols[i + 1] == b:
            out.append(a + b)
            i += 2
        else:
            out.append(symbols[i])
            i += 1
    return out


def _pairs(symbols: Sequence[str]) -> dict[Pair, int]:
    counts: dict[Pair, int] = defaultdict(int)
    for pair in zip(symbols, symbols[1:]):
        counts[pair] += 1
    return counts


def train(corpus: Mapping[str, int], target_vocab: int, min_frequency: int = 2,
          end_of_word_marker: str = END_OF_WORD,
          progress: Optional[Callable[[int, Pair, int, int], None]] = None) -> BpeModel:
    """Learn merges until the vocabulary holds ``target_vocab`` pieces.

    ``corpus`` maps words to their frequencies.  Training stops early once
    no pair reaches ``min_frequency``.  Pairs whose concatenation is already
    a vocabulary piece are never merged, which keeps
    ``len(vocabulary) == len(alphabet) + len(merges)``.  ``progress`` is
    called after each merge with ``(step, pair, count, vocabulary_size)``.
    """
    words: list[list[str]] = []
    freqs: list[int] = []
    for word, freq in sorted(corpus.items()):
        if freq < 0:
            raise ValueError(f"negative frequency for {word!r}")
        word = normalize(word)
        if word and freq:
            words.append(graphemes(word))
            freqs.append(freq)
    if not words:
        raise ValueError("cannot train on an empty corpus")
    alphabet = frozenset(g for w in words for g in w)
    if end_of_word_marker in alphabet:
        raise ValueError(f"end-of-word marker {end_of_word_marker!r} occurs in the corpus")
    if target_vocab < len(alphabet):
        raise ValueError(f"target vocabulary {target_vocab} is below the alphabet size {len(alphabet)}")

    counts: dict[Pair, int] = defaultdict(int)
    where: dict[Pair, set[int]] = defaultdict(set)
    for idx, (symbols, freq) in enumerate(zip(words, freqs)):
        for pair, n in _pairs(symbols).items():
            counts[pair] += n * freq
            where[pair].add(idx)
    heap = [(-c, a, b) for (a, b), c in counts.items()]
    heapq.heapify(heap)

    vocab = set(alphabet)
    merges: list[Pair] = []
    while len(vocab) < target_vocab and heap:
        neg, a, b = heapq.heappop(heap)
        pair = (a, b)
        if -neg != counts.get(pair, 0) or a + b in vocab:
            continue
        if -neg < max(min_frequency, 1):
            break
        merges.append(pair)
        vocab.add(a + b)
        touched: set[Pair] = set()
        for idx in sorted(where.pop(pair, ())):
            old = words[idx]
            new = _merge_pair(old, pair)
            freq = freqs[idx]
            for p, n in _pairs(old).items():
                counts[p] -= n * freq
                touched.add(p)
            for p, n in _pairs(new).items():
                counts[p] += n * freq
                where[p].add(idx)
                touched.add(p)
            words[idx] = new
        for p in touched:
            c = counts.get(p, 0)
            if c > 0:
                heapq.heappush(heap, (-c, p[0], p[1]))
            else:
                counts.pop(p, None)
                where.pop(p, None)
        if progress is not None:
            progress(len(merges), pair, -neg, len(vocab))
    return BpeModel(tuple(merges), alphabet, end_of_word_marker)


def train_to_syllabary_size(corpus: Mapping[str, int], syllabary: Collection[str], **kwargs) -> BpeModel:
    """Train with the vocabulary size fixed to the number of syllable types."""
    return train(corpus, len(syllabary), **kwargs)


def word_frequencies(sentences: Iterable[Iterable[str]]) -> dict[str, int]:
    counts: dict[str, int] = defaultdict(int)
    for sentence in sentences:
        for word in sentence:
            counts[normalize(word)] += 1
    return dict(counts)

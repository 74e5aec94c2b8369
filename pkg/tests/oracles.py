"""Slow, obviously-correct reference implementations used by the tests.

None of these import the code under test.
"""

from __future__ import annotations

import math
import sys
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np


# -- syllabification ---------------------------------------------------------------


def leftmost_longest_nuclei(units: Sequence[str], vowels, nuclei) -> list[tuple[int, int]]:
    """Vowel spans chosen by taking, at the leftmost unassigned vowel, the longest legal nucleus."""
    spans = []
    pos = 0
    while pos < len(units):
        if units[pos] not in vowels:
            pos += 1
            continue
        width = max(w for w in (1, 2, 3)
                    if w == 1 or (pos + w <= len(units) and tuple(units[pos:pos + w]) in nuclei))
        spans.append((pos, pos + width))
        pos += width
    return spans


class SplitEnumerator:
    """Every legal syllabification of every unit string up to ``max_len``.

    Syllables are generated as onset + nucleus + coda from the tables, then
    strung together.  A string of syllables is kept only if its nuclei agree
    with the leftmost-longest vowel grouping.  Among the survivors for one
    word, the split with the earliest cut at every boundary (the longest
    onsets) wins.
    """

    def __init__(self, vowels, nuclei, onsets, codas, max_len: int):
        self.vowels = frozenset(vowels)
        self.nuclei = frozenset(tuple(n) for n in nuclei)
        self.best: dict[tuple[str, ...], tuple[int, ...]] = {}
        self.count: dict[tuple[str, ...], int] = {}
        syllables = []
        for o in onsets:
            for n in self.nuclei:
                for c in codas:
                    syl = tuple(o) + n + tuple(c)
                    syllables.append((syl, len(o), len(o) + len(n)))
        self._syllables = [s for s in syllables if len(s[0]) <= max_len]
        self._max = max_len
        self._walk((), (), ())

    def _walk(self, units, cuts, spans):
        if units:
            grouping = tuple(leftmost_longest_nuclei(units, self.vowels, self.nuclei))
            if grouping == spans:
                self.count[units] = self.count.get(units, 0) + 1
                prev = self.best.get(units)
                if prev is None or cuts < prev:
                    self.best[units] = cuts
            elif units[-1] not in self.vowels:
                # a consonant closes the vowel run, so later syllables cannot repair it
                return
        for syl, n0, n1 in self._syllables:
            if len(units) + len(syl) > self._max:
                continue
            start = len(units)
            self._walk(units + syl, cuts + ((start,) if start else ()),
                       spans + ((start + n0, start + n1),))

    def split(self, units: Sequence[str]) -> Optional[list[tuple[str, ...]]]:
        units = tuple(units)
        cuts = self.best.get(units)
        if cuts is None:
            return None
        bounds = [0, *cuts, len(units)]
        return [units[a:b] for a, b in zip(bounds, bounds[1:])]


# -- hyphenation -----------------------------------------------------------------------


def liang_breaks(word: str, patterns: Sequence[tuple[str, Sequence[int]]],
                 exceptions: dict, min_left: int, min_right: int) -> list[int]:
    """Break offsets by scanning every occurrence of every pattern.

    ``patterns`` is a list of (letters, weights); a later entry with the
    same letters replaces an earlier one.
    """
    table = {}
    for letters, weights in patterns:
        table[letters] = list(weights)
    word = word.lower()
    if word in exceptions:
        raw = list(exceptions[word])
    else:
        framed = "." + word + "."
        best = [0] * (len(framed) + 1)
        for letters, weights in table.items():
            at = framed.find(letters)
            while at != -1:
                for k, w in enumerate(weights):
                    best[at + k] = max(best[at + k], w)
                at = framed.find(letters, at + 1)
        # gap g of ``framed`` sits before framed[g]; the break after word[i-1] is gap i+1
        raw = [i for i in range(1, len(word)) if best[i + 1] % 2 == 1]
    return [i for i in raw if i >= min_left and len(word) - i >= min_right]


# -- chrF -------------------------------------------------------------------------------


def ngram_table(hyp: str, ref: str, max_order: int) -> list[tuple[int, int, int]]:
    """Per order: hypothesis n-grams, reference n-grams, and one-to-one matches."""
    rows = []
    for n in range(1, max_order + 1):
        hs = [hyp[i:i + n] for i in range(len(hyp) - n + 1)]
        rs = [ref[i:i + n] for i in range(len(ref) - n + 1)]
        used = [False] * len(rs)
        match = 0
        for g in hs:
            for j, r in enumerate(rs):
                if not used[j] and r == g:
                    used[j] = True
                    match += 1
                    break
        rows.append((len(hs), len(rs), match))
    return rows


def chrf_score(table: Iterable[tuple[int, int, int]], beta: float) -> float:
    ps, rs = [], []
    for h, r, m in table:
        if h == 0 and r == 0:
            continue
        ps.append(Fraction(m, h) if h else Fraction(0))
        rs.append(Fraction(m, r) if r else Fraction(0))
    if not ps:
        return 0.0
    p = sum(ps) / len(ps)
    r = sum(rs) / len(rs)
    b2 = Fraction(beta) ** 2
    if b2 * p + r == 0:
        return 0.0
    return float(100 * (1 + b2) * p * r / (b2 * p + r))


def corpus_chrf_oracle(hyps: Sequence[str], refs: Sequence[str], max_order: int = 6,
                       beta: float = 2.0) -> float:
    pooled = [[0, 0, 0] for _ in range(max_order)]
    for h, r in zip(hyps, refs):
        h = "".join(h.split())
        r = "".join(r.split())
        for k, row in enumerate(ngram_table(h, r, max_order)):
            for j in range(3):
                pooled[k][j] += row[j]
    return chrf_score(pooled, beta)


# -- significance ------------------------------------------------------------------------


def randomization_p(a: Sequence[float], b: Sequence[float], samples: int, seed: int,
                    chunk: int = 50_000) -> float:
    """Approximate randomization of the mean difference, by explicit swapping."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    observed = abs(a.mean() - b.mean())
    rng = np.random.RandomState(seed)
    hits = 0
    done = 0
    while done < samples:
        k = min(chunk, samples - done)
        swap = rng.randint(0, 2, size=(k, len(a))).astype(bool)
        left = np.where(swap, b, a).mean(axis=1)
        right = np.where(swap, a, b).mean(axis=1)
        hits += int(np.sum(np.abs(left - right) >= observed - 1e-9))
        done += k
    return (hits + 1) / (samples + 1)


# -- BPE -------------------------------------------------------------------------------------


def naive_bpe(corpus: dict[str, int], target_vocab: int, min_frequency: int) -> list[tuple[str, str]]:
    """Recount every pair from scratch at each step."""
    words = [(list(w), f) for w, f in corpus.items() if w and f]
    vocab = {c for w, _ in words for c in w}
    merges = []
    while len(vocab) < target_vocab:
        counts: dict[tuple[str, str], int] = {}
        for syms, f in words:
            for x, y in zip(syms, syms[1:]):
                counts[(x, y)] = counts.get((x, y), 0) + f
        candidates = [(c, p) for p, c in counts.items() if p[0] + p[1] not in vocab and c >= min_frequency]
        if not candidates:
            break
        top = max(c for c, _ in candidates)
        pair = min(p for c, p in candidates if c == top)
        merges.append(pair)
        vocab.add(pair[0] + pair[1])
        for k, (syms, f) in enumerate(words):
            out = []
            i = 0
            while i < len(syms):
                if i + 1 < len(syms) and (syms[i], syms[i + 1]) == pair:
                    out.append(syms[i] + syms[i + 1])
                    i += 2
                else:
                    out.append(syms[i])
                    i += 1
            words[k] = (out, f)
    return merges


def replay_merges(word: str, merges: Sequence[tuple[str, str]]) -> list[str]:
    """Apply each merge in training order, left to right."""
    syms = list(word)
    for a, b in merges:
        i = 0
        while i < len(syms) - 1:
            if syms[i] == a and syms[i + 1] == b:
                syms[i:i + 2] = [a + b]
            i += 1
    return syms


def char_ppl_oracle(cross_entropy: float, seg_len: int, char_len: int) -> float:
    exponent = math.fsum([cross_entropy] * (seg_len + 1)) / (char_len + 1)
    return math.inf if exponent > math.log(sys.float_info.max) else math.exp(exponent)

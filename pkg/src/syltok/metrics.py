"""Evaluation math: character-level perplexity, chrF, significance, corpus statistics."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from syltok._text import graphemes
from syltok.segio import CorpusHandle, Segmenter, SourceKind, iter_segmented
from syltok.syllabifier import FallbackPolicy

DEFAULT_SEED = 12345


# -- character-level perplexity --------------------------------------------------


@dataclass(frozen=True)
class PplRecord:
    """Per-sentence LM output.

    ``cross_entropy`` is the mean negative log-likelihood in nats per
    segmentation token, end-of-sequence event included.
    """

    cross_entropy: float
    seg_len: int
    char_len: int

    def __post_init__(self):
        if not self.cross_entropy >= 0 or math.isinf(self.cross_entropy):
            raise ValueError(f"cross_entropy must be finite and >= 0, got {self.cross_entropy}")
        if self.seg_len < 0 or self.char_len < 0:
            raise ValueError("lengths must be >= 0")

    @classmethod
    def from_line(cls, line: str) -> "PplRecord":
        fields = line.rstrip("\n").split("\t")
        if len(fields) != 3:
            raise ValueError(f"expected 3 tab-separated fields, found {len(fields)}")
        return cls(float(fields[0]), int(fields[1]), int(fields[2]))


def char_ppl(r: PplRecord) -> float:
    """Perplexity renormalized to character units.

    The sentence's total log-loss, ``cross_entropy * (seg_len + 1)``, is
    spread over ``char_len + 1`` positions; the extra unit is the
    end-of-sequence event on both sides.
    """
    return _exp(r.cross_entropy * (r.seg_len + 1) / (r.char_len + 1))


def _exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def corpus_char_ppl(records: Iterable[PplRecord]) -> float:
    """Character-level perplexity of a whole test set (total nats / total characters)."""
    nats = 0.0
    chars = 0
    for r in records:
        nats += r.cross_entropy * (r.seg_len + 1)
        chars += r.char_len + 1
    if chars == 0:
        raise ValueError("no records")
    return _exp(nats / chars)


def ppl_gap(char_ppl_value: float, syl_ppl_value: float) -> float:
    """Character minus syllable perplexity (positive when syllables help)."""
    return char_ppl_value - syl_ppl_value


# -- chrF ------------------------------------------------------------------------------


@dataclass(frozen=True)
class ChrfConfig:
    max_order: int = 6
    beta: float = 2.0
    include_whitespace: bool = False

    def __post_init__(self):
        if self.max_order < 1:
            raise ValueError("max_order must be >= 1")
        if not self.beta > 0:
            raise ValueError("beta must be > 0")

    @property
    def signature(self) -> str:
        return f"chrF{self.beta:g}+numchars.{self.max_order}+space.{str(self.include_whitespace).lower()}"


def _prepare(text: str, cfg: ChrfConfig) -> str:
    return text if cfg.include_whitespace else "".join(text.split())


def chrf_statistics(hypothesis: str, reference: str, cfg: ChrfConfig = ChrfConfig()) -> np.ndarray:
    """Sufficient statistics, shape ``(max_order, 3)``: hyp n-grams, ref n-grams, matches."""
    hyp, ref = _prepare(hypothesis, cfg), _prepare(reference, cfg)
    stats = np.zeros((cfg.max_order, 3), dtype=np.int64)
    for n in range(1, cfg.max_order + 1):
        h = Counter(hyp[i:i + n] for i in range(len(hyp) - n + 1))
        r = Counter(ref[i:i + n] for i in range(len(ref) - n + 1))
        stats[n - 1] = (sum(h.values()), sum(r.values()), sum((h & r).values()))
    return stats


def chrf_from_statistics(stats: np.ndarray, beta: float = 2.0) -> float:
    """F-score on the 0-100 scale.

    Orders with no n-grams on either side are left out of the averages; an
    order with n-grams on only one side counts as zero precision and recall.
    """
    precisions, recalls = [], []
    for hyp_n, ref_n, match in np.asarray(stats):
        if hyp_n == 0 and ref_n == 0:
            continue
        precisions.append(match / hyp_n if hyp_n else 0.0)
        recalls.append(match / ref_n if ref_n else 0.0)
    if not precisions:
        return 0.0
    p = sum(precisions) / len(precisions)
    r = sum(recalls) / len(recalls)
    b2 = beta * beta
    denom = b2 * p + r
    if denom == 0:
        return 0.0
    return 100.0 * (1 + b2) * p * r / denom


def chrf(hypothesis: str, reference: str, cfg: ChrfConfig = ChrfConfig()) -> float:
    return chrf_from_statistics(chrf_statistics(hypothesis, reference, cfg), cfg.beta)


def corpus_chrf(hypotheses: Sequence[str], references: Sequence[str], cfg: ChrfConfig = ChrfConfig()) -> float:
    """Corpus chrF from n-gram statistics pooled over all segment pairs."""
    if len(hypotheses) != len(references):
        raise ValueError(f"{len(hypotheses)} hypotheses vs {len(references)} references")
    total = np.zeros((cfg.max_order, 3), dtype=np.int64)
    for h, r in zip(hypotheses, references):
        total += chrf_statistics(h, r, cfg)
    return chrf_from_statistics(total, cfg.beta)


# -- significance ------------------------------------------------------------------------


def mean_statistic(per_segment: np.ndarray) -> float:
    return float(np.mean(per_segment))


def chrf_statistic(beta: float = 2.0) -> Callable[[np.ndarray], float]:
    """Corpus statistic over stacked per-segment chrF statistics (``n x order x 3``)."""
    def statistic(per_segment: np.ndarray) -> float:
        return chrf_from_statistics(per_segment.sum(axis=0), beta)
    return statistic


def permutation_deltas(scores_a: Sequence, scores_b: Sequence, iterations: int = 10_000,
                       seed: int = DEFAULT_SEED,
                       statistic: Optional[Callable[[np.ndarray], float]] = None) -> tuple[float, np.ndarray]:
    """Observed ``|statistic(A) - statistic(B)|`` and its value under ``iterations`` random swaps.

    Each trial swaps the A and B entries of every segment with probability
    1/2.  ``statistic`` defaults to the mean of scalar scores; pass
    :func:`chrf_statistic` with chrF sufficient statistics for corpus chrF.
    """
    a = np.asarray(scores_a, dtype=float)
    b = np.asarray(scores_b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"score shapes differ: {a.shape} vs {b.shape}")
    if len(a) == 0:
        raise ValueError("no segments")
    if iterations < 1000:
        raise ValueError("use at least 1000 iterations")
    rng = np.random.default_rng(seed)
    n = len(a)
    deltas = np.empty(iterations)

    if statistic is None:
        # the mean difference is linear in the per-segment differences
        diff = a - b
        observed = abs(float(diff.mean()))
        done = 0
        while done < iterations:
            k = min(10_000, iterations - done)
            signs = np.where(rng.random((k, n)) < 0.5, -1.0, 1.0)
            deltas[done:done + k] = np.abs(signs @ diff / n)
            done += k
    else:
        observed = abs(statistic(a) - statistic(b))
        shape = (n,) + (1,) * (a.ndim - 1)
        for i in range(iterations):
            mask = (rng.random(n) < 0.5).reshape(shape)
            deltas[i] = abs(statistic(np.where(mask, b, a)) - statistic(np.where(mask, a, b)))
    return observed, deltas


def p_value(observed: float, deltas: np.ndarray) -> float:
    """Add-one smoothed share of permuted differences reaching ``observed``."""
    # permuted sums are accumulated in a different order than the observed one
    slack = 1e-9 * max(1.0, observed)
    hits = int(np.count_nonzero(deltas >= observed - slack))
    return (hits + 1) / (len(deltas) + 1)


def paired_significance(scores_a: Sequence, scores_b: Sequence, iterations: int = 10_000,
                        seed: int = DEFAULT_SEED,
                        statistic: Optional[Callable[[np.ndarray], float]] = None) -> float:
    """Two-sided paired approximate randomization test; see :func:`permutation_deltas`."""
    return p_value(*permutation_deltas(scores_a, scores_b, iterations, seed, statistic))


# -- corpus statistics -------------------------------------------------------------------


@dataclass(frozen=True)
class CorpusStats:
    n_word: int = 0
    v_word: int = 0
    n_syl: int = 0
    v_syl: int = 0
    n_char: int = 0
    v_char: int = 0


def corpus_stats(handle: CorpusHandle, segmenter: Segmenter, policy: FallbackPolicy,
                 threads: int = 1) -> CorpusStats:
    """Token (N) and type (V) counts at word, syllable and character level.

    Characters are grapheme clusters; whitespace between words is not counted.
    """
    words: Counter = Counter()
    syls: Counter = Counter()
    chars: Counter = Counter()
    if handle.kind is SourceKind.PARALLEL_PAIR:
        raise ValueError("compute statistics for each side of a parallel corpus separately")
    for sentence in iter_segmented(handle, segmenter, policy, threads):
        for pieces in sentence.words:
            word = "".join(pieces)
            words[word] += 1
            syls.update(pieces)
            chars.update(graphemes(word))
    return CorpusStats(
        n_word=sum(words.values()), v_word=len(words),
        n_syl=sum(syls.values()), v_syl=len(syls),
        n_char=sum(chars.values()), v_char=len(chars),
    )


def growth_rates(stats: CorpusStats) -> tuple[float, float]:
    """Syllable and word type/token ratios: ``(V_syl / N_syl, V_word / N_word)``."""
    if stats.n_syl <= 0 or stats.n_word <= 0:
        raise ValueError("growth rates need at least one word and one syllable")
    return stats.v_syl / stats.n_syl, stats.v_word / stats.n_word

"""Command-line interface.

Every subcommand reads ``--input`` (default: stdin) and writes ``--output``
(default: stdout).  Exit status is 0 on success, 1 on invalid input or
usage, 2 on I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from contextlib import contextmanager
from importlib import resources
from typing import Iterator, Optional, Sequence

import numpy as np

from syltok import __version__
from syltok.bpe import BpeModel, train, train_to_syllabary_size, word_frequencies
from syltok.hyphenator import DEFAULT_MIN_LEFT, DEFAULT_MIN_RIGHT, load_patterns, parse_patterns
from syltok.metrics import (DEFAULT_SEED, ChrfConfig, PplRecord, char_ppl, chrf_from_statistics,
                            chrf_statistic, chrf_statistics, corpus_char_ppl, corpus_stats,
                            growth_rates, paired_significance)
from syltok.segio import (CorpusHandle, Format, decode_format, make_segmenter, read_conllu, read_plain,
                          read_presegmented, segment_corpus)
from syltok.syllabifier import (FallbackMode, FallbackPolicy, load_profile, load_shipped_profile)

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


# -- I/O helpers -------------------------------------------------------------------------


@contextmanager
def _open_in(path: Optional[str]):
    if path is None or path == "-":
        if not hasattr(sys.stdin, "buffer"):
            yield sys.stdin
            return
        fh = io.TextIOWrapper(sys.stdin.buffer, encoding="utf-8", newline="")
        try:
            yield fh
        finally:
            fh.detach()
    else:
        with open(path, encoding="utf-8", newline="") as fh:
            yield fh


@contextmanager
def _open_out(path: Optional[str]):
    if path is None or path == "-":
        if not hasattr(sys.stdout, "buffer"):
            yield sys.stdout
            return
        sys.stdout.flush()
        out = io.TextIOWrapper(sys.stdout.buffer, encoding="utf-8", newline="\n", write_through=True)
        try:
            yield out
        finally:
            out.flush()
            out.detach()
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _clean_lines(fh, crlf_tolerant: bool) -> Iterator[str]:
    for lineno, line in enumerate(fh, 1):
        line = line[:-1] if line.endswith("\n") else line
        if "\r" in line:
            if not crlf_tolerant:
                raise ValueError(f"line {lineno}: carriage return in input (use --crlf-tolerant)")
            line = line.replace("\r", "")
        yield line


def _read_lines(path: Optional[str], crlf_tolerant: bool) -> list[str]:
    with _open_in(path) as fh:
        return list(_clean_lines(fh, crlf_tolerant))


def _corpus(lines: Iterator[str], kind: str) -> CorpusHandle:
    if kind == "conllu":
        return read_conllu(lines)
    if kind == "presegmented":
        return read_presegmented(lines)
    return read_plain(lines)


# -- segmenter configuration -------------------------------------------------------------


def _fallback(args) -> FallbackPolicy:
    if args.fallback == "bpe":
        if not args.bpe_model:
            raise ValueError("--fallback bpe requires --bpe-model")
        return FallbackPolicy(FallbackMode.BPE_DELEGATE, BpeModel.load(args.bpe_model))
    return FallbackPolicy(FallbackMode.CHAR_SPLIT)


def _patterns(args):
    if args.patterns:
        return load_patterns(args.patterns, min_left=args.min_left, min_right=args.min_right)
    name = f"{args.lang or 'demo'}.pat"
    bundled = resources.files("syltok").joinpath("patterns").joinpath(name)
    if not bundled.is_file():
        raise ValueError(f"no bundled patterns named {name!r}; pass --patterns FILE")
    return parse_patterns(bundled.read_text(encoding="utf-8"), language_id=args.lang or "demo",
                          min_left=args.min_left, min_right=args.min_right)


def _lexicon(args):
    if not getattr(args, "lexicon", None):
        return None
    return {w.strip().lower() for w in _read_lines(args.lexicon, True) if w.strip()}


def _segmenter(args, kind: Optional[str] = None):
    kind = kind or args.segmenter
    if kind is None:
        if not args.lang and not args.profile:
            raise ValueError("choose a segmenter with --segmenter or --lang")
        kind = "english" if args.lang == "en" and not args.profile else "profile"
    if kind == "profile":
        if args.profile:
            profile = load_profile(args.profile)
        elif args.lang:
            try:
                profile = load_shipped_profile(args.lang)
            except FileNotFoundError:
                raise ValueError(f"no syllabification profile for {args.lang!r}; "
                                 "use the hyphenate subcommand for this language") from None
        else:
            raise ValueError("--segmenter profile needs --lang or --profile")
        return make_segmenter("profile", profile=profile)
    if kind == "english":
        return make_segmenter("english", lexicon=_lexicon(args))
    if kind == "hyphenation":
        return make_segmenter("hyphenation", patterns=_patterns(args))
    if kind == "bpe":
        if not args.bpe_model:
            raise ValueError("--segmenter bpe requires --bpe-model")
        return make_segmenter("bpe", bpe_model=BpeModel.load(args.bpe_model))
    return make_segmenter(kind)


def _write_segmented(args, segmenter) -> None:
    policy = _fallback(args)
    with _open_in(args.input) as fh, _open_out(args.output) as out:
        handle = _corpus(_clean_lines(fh, args.crlf_tolerant), args.input_kind)
        for line in segment_corpus(handle, segmenter, policy, args.format, threads=args.threads):
            out.write(line + "\n")


# -- subcommands -------------------------------------------------------------------------


def cmd_syllabify(args) -> None:
    _write_segmented(args, _segmenter(args))


def cmd_hyphenate(args) -> None:
    _write_segmented(args, _segmenter(args, "hyphenation"))


def cmd_segment(args) -> None:
    _write_segmented(args, _segmenter(args))


def cmd_bpe_train(args) -> None:
    with _open_in(args.input) as fh:
        handle = _corpus(_clean_lines(fh, args.crlf_tolerant), args.input_kind)
        corpus = word_frequencies(handle.words())
    if args.syllabary:
        syllabary = set()
        for line in _read_lines(args.syllabary, args.crlf_tolerant):
            for word in decode_format(line, args.syllabary_format).words:
                syllabary.update(word)
        model = train_to_syllabary_size(corpus, syllabary, min_frequency=args.min_frequency)
    else:
        model = train(corpus, args.vocab, min_frequency=args.min_frequency)
    with _open_out(args.output) as out:
        out.write(model.dumps())


def cmd_bpe_encode(args) -> None:
    args.bpe_model = args.model
    _write_segmented(args, _segmenter(args, "bpe"))


def cmd_stats(args) -> None:
    policy = _fallback(args)
    segmenter = _segmenter(args)
    inputs = args.inputs or [args.input or "-"]
    with _open_out(args.output) as out:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["corpus", "n_word", "v_word", "n_syl", "v_syl", "n_char", "v_char",
                         "v_syl_per_n_syl", "v_word_per_n_word"])
        for path in inputs:
            with _open_in(path) as fh:
                handle = _corpus(_clean_lines(fh, args.crlf_tolerant), args.input_kind)
                stats = corpus_stats(handle, segmenter, policy, threads=args.threads)
            if stats.n_word:
                syl_rate, word_rate = (f"{x:.6f}" for x in growth_rates(stats))
            else:
                syl_rate = word_rate = ""
            writer.writerow([path, stats.n_word, stats.v_word, stats.n_syl, stats.v_syl,
                             stats.n_char, stats.v_char, syl_rate, word_rate])


def cmd_ppl_convert(args) -> None:
    records = []
    with _open_in(args.input) as fh, _open_out(args.output) as out:
        for lineno, line in enumerate(_clean_lines(fh, args.crlf_tolerant), 1):
            if not line.strip():
                continue
            try:
                record = PplRecord.from_line(line)
            except ValueError as exc:
                raise ValueError(f"line {lineno}: {exc}") from None
            if args.aggregate:
                records.append(record)
            else:
                out.write(f"{char_ppl(record):.6f}\n")
        if args.aggregate:
            out.write(f"{corpus_char_ppl(records):.6f}\n")


def _chrf_config(args) -> ChrfConfig:
    return ChrfConfig(max_order=args.order, beta=args.beta, include_whitespace=args.include_whitespace)


def _segment_stats(hyp_path, ref_path, cfg, crlf_tolerant):
    hyps = _read_lines(hyp_path, crlf_tolerant)
    refs = _read_lines(ref_path, crlf_tolerant)
    if len(hyps) != len(refs):
        raise ValueError(f"{hyp_path} has {len(hyps)} lines but {ref_path} has {len(refs)}")
    if not hyps:
        return np.zeros((0, cfg.max_order, 3), dtype=np.int64)
    return np.stack([chrf_statistics(h, r, cfg) for h, r in zip(hyps, refs)])


def cmd_chrf(args) -> None:
    cfg = _chrf_config(args)
    stats = _segment_stats(args.hyp, args.ref, cfg, args.crlf_tolerant)
    score = chrf_from_statistics(stats.sum(axis=0), cfg.beta) if len(stats) else 0.0
    with _open_out(args.output) as out:
        out.write(f"{score:.2f}\n")
        if args.json:
            out.write(json.dumps({
                "name": "chrF", "score": round(score, 4), "signature": cfg.signature,
                "segments": int(len(stats)), "aggregation": "micro",
                "order_exclusion": "orders without n-grams on both sides are skipped",
            }, sort_keys=True) + "\n")


def _read_scores(path, crlf_tolerant) -> list[float]:
    return [float(x) for x in _read_lines(path, crlf_tolerant) if x.strip()]


def cmd_sigtest(args) -> None:
    if args.ref:
        if not (args.hyp_a and args.hyp_b):
            raise ValueError("--ref requires --hyp-a and --hyp-b")
        cfg = _chrf_config(args)
        a = _segment_stats(args.hyp_a, args.ref, cfg, args.crlf_tolerant)
        b = _segment_stats(args.hyp_b, args.ref, cfg, args.crlf_tolerant)
        statistic = chrf_statistic(cfg.beta)
    elif args.scores_a and args.scores_b:
        a = np.asarray(_read_scores(args.scores_a, args.crlf_tolerant))
        b = np.asarray(_read_scores(args.scores_b, args.crlf_tolerant))
        statistic = None
    else:
        raise ValueError("give either --ref/--hyp-a/--hyp-b or --scores-a/--scores-b")
    p = paired_significance(a, b, iterations=args.iterations, seed=args.seed, statistic=statistic)
    with _open_out(args.output) as out:
        out.write(f"{p:.6f}\n")
        if args.json:
            score_a = statistic(a) if statistic else float(np.mean(a))
            score_b = statistic(b) if statistic else float(np.mean(b))
            out.write(json.dumps({
                "p_value": p, "significant": p <= args.alpha, "alpha": args.alpha,
                "score_a": round(score_a, 4), "score_b": round(score_b, 4),
                "iterations": args.iterations, "seed": args.seed,
                "test": "paired approximate randomization",
            }, sort_keys=True) + "\n")


# -- parser --------------------------------------------------------------------------------


def _positive(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="syltok", description="Syllable-aware segmentation toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    common = _Parser(add_help=False)
    common.add_argument("--input", "-i", help="input file (default: stdin)")
    common.add_argument("--output", "-o", help="output file (default: stdout)")
    common.add_argument("--crlf-tolerant", action="store_true", help="strip carriage returns from input")
    common.add_argument("--threads", type=_positive, default=1, help="worker threads (output is unaffected)")

    seg = _Parser(add_help=False)
    seg.add_argument("--format", choices=[f.value for f in Format], default="boundary")
    seg.add_argument("--input-kind", choices=["plain", "conllu", "presegmented"], default="plain")
    seg.add_argument("--fallback", choices=["char", "bpe"], default="char",
                     help="segmentation for words the rules cannot split")
    seg.add_argument("--bpe-model", help="BPE model file for --fallback bpe / --segmenter bpe")

    rules = _Parser(add_help=False)
    rules.add_argument("--lang", help="language id (en uses English rules, others a profile)")
    rules.add_argument("--profile", help="profile file overriding the search path")
    rules.add_argument("--lexicon", help="word list for English compound splitting")
    rules.add_argument("--patterns", help="hyphenation pattern file")
    rules.add_argument("--min-left", type=_positive, default=DEFAULT_MIN_LEFT)
    rules.add_argument("--min-right", type=_positive, default=DEFAULT_MIN_RIGHT)

    p = sub.add_parser("syllabify", parents=[common, seg, rules], help="rule-based syllabification")
    p.set_defaults(func=cmd_syllabify, segmenter=None)

    p = sub.add_parser("hyphenate", parents=[common, seg, rules], help="pattern hyphenation")
    p.set_defaults(func=cmd_hyphenate, segmenter="hyphenation")

    p = sub.add_parser("segment", parents=[common, seg, rules], help="segment a corpus with any method")
    p.add_argument("--segmenter", choices=["profile", "english", "hyphenation", "bpe", "char"])
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("bpe-train", parents=[common], help="learn a BPE model")
    size = p.add_mutually_exclusive_group(required=True)
    size.add_argument("--vocab", type=int, help="target vocabulary size")
    size.add_argument("--syllabary", help="segmented file whose distinct pieces set the vocabulary size")
    p.add_argument("--syllabary-format", choices=[f.value for f in Format], default="boundary")
    p.add_argument("--min-frequency", type=_positive, default=2)
    p.add_argument("--input-kind", choices=["plain", "conllu", "presegmented"], default="plain")
    p.set_defaults(func=cmd_bpe_train)

    p = sub.add_parser("bpe-encode", parents=[common, seg], help="apply a BPE model")
    p.add_argument("--model", required=True)
    p.set_defaults(func=cmd_bpe_encode, fallback="char")

    p = sub.add_parser("stats", parents=[common, seg, rules], help="word/syllable/character counts as CSV")
    p.add_argument("inputs", nargs="*", help="corpus files, one CSV row each (default: stdin)")
    p.add_argument("--segmenter", choices=["profile", "english", "hyphenation", "bpe", "char"])
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("ppl-convert", parents=[common], help="LM log to character-level perplexity")
    p.add_argument("--aggregate", action="store_true", help="print one corpus-level value")
    p.set_defaults(func=cmd_ppl_convert)

    chrf_opts = _Parser(add_help=False)
    chrf_opts.add_argument("--order", type=_positive, default=6)
    chrf_opts.add_argument("--beta", type=float, default=2.0)
    chrf_opts.add_argument("--include-whitespace", action="store_true")
    chrf_opts.add_argument("--json", action="store_true", help="also print a JSON summary")

    p = sub.add_parser("chrf", parents=[common, chrf_opts], help="corpus chrF")
    p.add_argument("--hyp", required=True)
    p.add_argument("--ref", required=True)
    p.set_defaults(func=cmd_chrf)

    p = sub.add_parser("sigtest", parents=[common, chrf_opts], help="paired approximate randomization")
    p.add_argument("--ref")
    p.add_argument("--hyp-a")
    p.add_argument("--hyp-b")
    p.add_argument("--scores-a", help="per-segment scores of system A, one per line")
    p.add_argument("--scores-b")
    p.add_argument("--iterations", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--alpha", type=float, default=0.05)
    p.set_defaults(func=cmd_sigtest)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    try:
        args.func(args)
    except (OSError, UnicodeDecodeError) as exc:
        print(f"syltok {args.command}: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"syltok {args.command}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

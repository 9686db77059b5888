"""Command-line entry point: train, encode, decode, stats, compare, budget, energy.

Data goes to stdout, logs to stderr. Exit codes: 0 success, 2 usage error,
3 corpus/model/format error.
"""
from __future__ import annotations

import argparse
import logging
import sys

from . import analytics, budget
from .core import CLS, PAD, SEP, NormalizationConfig, assemble_sequence, encode_text, normalize
from .corpus import KEEP_ALL, count_words, filter_documents, ingest, turkish_heuristic
from .errors import FormatError, InvalidArgumentError, InvalidTokenError, MalformedInputError
from .lexical import BYTE_VOCAB_SIZE, byte_model, decode_byte_tokens, decode_lexical, encode_bytes, lexicon_load, train_morph, train_wordlevel
from .modeldir import load_model, save_model
from .subword import BPE_MIN_VOCAB, decode_subword, train_bpe, train_wordpiece

log = logging.getLogger("granul")

EXIT_USAGE = 2
EXIT_DATA = 3


class UsageError(Exception):
    pass


def _docs(args):
    docs = ingest(args.input, args.format)
    doc_filter = turkish_heuristic() if getattr(args, "filter", "none") == "turkish-heuristic" else KEEP_ALL
    return filter_documents(docs, doc_filter)


def cmd_train(args, out) -> int:
    if args.method == "char":
        if args.vocab_size is not None and args.vocab_size != BYTE_VOCAB_SIZE:
            raise UsageError(f"--method char has a fixed vocabulary of {BYTE_VOCAB_SIZE}")
        model = byte_model()
        save_model(model, args.out)
        print(f"vocab_size={len(model.vocab)}", file=out)
        return 0
    if args.input is None:
        raise UsageError(f"--input is required for --method {args.method}")
    if args.vocab_size is None:
        raise UsageError(f"--vocab-size is required for --method {args.method}")
    if args.method == "morph" and args.lexicon is None:
        raise UsageError("--method morph requires --lexicon")
    minimum = {"bpe": BPE_MIN_VOCAB, "word": 5, "morph": 5, "wordpiece": 5}[args.method]
    if args.vocab_size < minimum:
        raise UsageError(f"--vocab-size must be >= {minimum} for --method {args.method}")

    norm = NormalizationConfig()
    lexicon = lexicon_load(args.lexicon, norm) if args.method == "morph" else None
    stream = _docs(args)
    counts = count_words(stream, norm)
    log.info("counted %d distinct words (%d total)", len(counts), counts.total_words)
    try:
        if args.method == "bpe":
            model = train_bpe(counts, args.vocab_size, norm)
        elif args.method == "wordpiece":
            model = train_wordpiece(counts, args.vocab_size, norm)
        elif args.method == "word":
            model = train_wordlevel(counts, args.vocab_size, norm)
        else:
            model = train_morph(counts, lexicon, args.vocab_size, norm)
    except InvalidArgumentError as e:
        raise UsageError(str(e)) from None
    save_model(model, args.out)
    print(f"documents kept={stream.kept} dropped={stream.dropped}", file=out)
    print(f"vocab_size={len(model.vocab)}", file=out)
    return 0


def _encode_doc(model, text: str, wrap: bool, max_len: int):
    if model.method == "char":
        enc = encode_bytes(normalize(text, model.normalization), model)
    else:
        enc = encode_text(model, text)
    if wrap:
        enc = assemble_sequence(enc, model.vocab, max_len)
    return enc


def cmd_encode(args, out) -> int:
    if args.max_len < 2:
        raise UsageError("--max-len must be >= 2")
    model = load_model(args.model)
    for doc in ingest(args.input, args.format):
        enc = _encode_doc(model, doc.text, args.wrap, args.max_len)
        items = enc.ids if args.ids else enc.tokens
        print(" ".join(map(str, items)), file=out)
    return 0


def _decode_tokens(model, tokens):
    tokens = [t for t in tokens if t not in (CLS, SEP, PAD)]
    if model.method == "char":
        return decode_byte_tokens(tokens, model)
    if model.method in ("bpe", "wordpiece"):
        return decode_subword(model, tokens)
    return decode_lexical(model, tokens)


def cmd_decode(args, out) -> int:
    model = load_model(args.model)
    with open(args.input, encoding="utf-8") as f:
        for line in f:
            items = line.split()
            if args.ids:
                try:
                    items = [model.vocab.id_to_token(int(i)) for i in items]
                except ValueError:
                    raise InvalidTokenError(f"not an id sequence: {line.strip()!r}") from None
            print(_decode_tokens(model, items), file=out)
    return 0


def cmd_stats(args, out) -> int:
    model = load_model(args.model)
    stats = analytics.corpus_stats(model, ingest(args.input, args.format))
    if args.json:
        print(stats.to_json(), file=out)
    else:
        print(analytics.format_stats([stats], args.report), file=out)
    return 0


def cmd_compare(args, out) -> int:
    models = [load_model(d) for d in args.models]
    print(analytics.format_comparison(analytics.compare(models, args.sentence)), file=out)
    return 0


def cmd_budget(args, out) -> int:
    try:
        if args.total_params is not None:
            v = budget.vocab_size_total(args.total_params, args.ratio, args.hidden)
        else:
            v = budget.vocab_size_fixed_core(args.core_params, args.ratio, args.hidden)
    except InvalidArgumentError as e:
        raise UsageError(str(e)) from None
    print(f"{v} ({budget.format_k(v)})", file=out)
    return 0


def cmd_energy(args, out) -> int:
    try:
        report = analytics.energy(args.gpus, args.hours, args.watts, args.factor, args.scc_rate)
    except InvalidArgumentError as e:
        raise UsageError(str(e)) from None
    print(f"{report.kwh:.2f} kWh", file=out)
    if report.kg_co2 is not None:
        print(f"{report.kg_co2:.2f} kg CO2eq", file=out)
        print(f"${report.usd_scc:.2f} SCC", file=out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="granul", description="Train, apply and compare tokenizers.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def corpus_format(sp):
        sp.add_argument("--format", choices=("line", "blank"), default="line",
                        help="one document per line, or blank-line separated documents")

    t = sub.add_parser("train", help="train a tokenizer on a corpus")
    t.add_argument("--method", required=True, choices=("char", "bpe", "wordpiece", "morph", "word"))
    t.add_argument("--input")
    t.add_argument("--vocab-size", type=int)
    t.add_argument("--lexicon", help="segmentation lexicon TSV (morph)")
    t.add_argument("--filter", choices=("none", "turkish-heuristic"), default="none")
    t.add_argument("--out", required=True)
    corpus_format(t)
    t.set_defaults(func=cmd_train)

    e = sub.add_parser("encode", help="tokenize documents")
    e.add_argument("--model", required=True)
    e.add_argument("--input", required=True)
    e.add_argument("--max-len", type=int, default=514)
    e.add_argument("--wrap", action=argparse.BooleanOptionalAction, default=True)
    g = e.add_mutually_exclusive_group()
    g.add_argument("--ids", action="store_true")
    g.add_argument("--tokens", action="store_true")
    corpus_format(e)
    e.set_defaults(func=cmd_encode)

    d = sub.add_parser("decode", help="turn token lines back into text")
    d.add_argument("--model", required=True)
    d.add_argument("--input", required=True)
    d.add_argument("--ids", action="store_true", help="input lines hold ids instead of tokens")
    d.set_defaults(func=cmd_decode)

    s = sub.add_parser("stats", help="unknown-token ratio and fertility over a corpus")
    s.add_argument("--model", required=True)
    s.add_argument("--input", required=True)
    s.add_argument("--report", choices=("unk", "fertility", "all"), default="all")
    s.add_argument("--json", action="store_true")
    corpus_format(s)
    s.set_defaults(func=cmd_stats)

    c = sub.add_parser("compare", help="tokenize one sentence with several models")
    c.add_argument("--models", nargs="+", required=True)
    c.add_argument("--sentence", required=True)
    c.set_defaults(func=cmd_compare)

    b = sub.add_parser("budget", help="vocabulary size for a parameter budget")
    grp = b.add_mutually_exclusive_group(required=True)
    grp.add_argument("--total-params", type=int)
    grp.add_argument("--core-params", type=int)
    b.add_argument("--ratio", type=float, required=True)
    b.add_argument("--hidden", type=int, required=True)
    b.set_defaults(func=cmd_budget)

    en = sub.add_parser("energy", help="GPU energy, emissions and social carbon cost")
    en.add_argument("--gpus", type=int, required=True)
    en.add_argument("--hours", type=float, required=True)
    en.add_argument("--watts", type=float, default=analytics.DEFAULT_WATTS)
    en.add_argument("--factor", type=float, help="kg CO2-eq per kWh")
    en.add_argument("--scc-rate", type=float, default=analytics.DEFAULT_SCC_PER_TON, help="USD per ton CO2")
    en.set_defaults(func=cmd_energy)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="granul: %(message)s")
    try:
        return args.func(args, out)
    except UsageError as e:
        print(f"granul {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (FormatError, MalformedInputError, InvalidTokenError, InvalidArgumentError, OSError, UnicodeDecodeError) as e:
        print(f"granul {args.command}: {e}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())

"""On-disk model directories.

Layout::

    meta.txt      key=value lines: method, vocab_size, normalization settings
    vocab.txt     one token per line, id = line number
    merges.txt    BPE only
    lexicon.tsv   morph only, the segmentation lexicon the model was trained with
"""
from __future__ import annotations

from pathlib import Path

from .core import SPECIAL_TOKENS, NormalizationConfig, strip_continuation, vocab_load, vocab_save
from .errors import FormatError, InvalidArgumentError
from .lexical import LexicalModel, byte_model, lexicon_load, lexicon_save
from .subword import BPE_BASE, SubwordModel, bpe_vocab_tokens, merges_load, merges_save

META = "meta.txt"
VOCAB = "vocab.txt"
MERGES = "merges.txt"
LEXICON = "lexicon.tsv"
METHODS = ("char", "bpe", "wordpiece", "morph", "word")


def _meta_lines(model) -> list[str]:
    norm = model.normalization
    meta = {
        "method": model.method,
        "vocab_size": str(len(model.vocab)),
        "lowercase": "true" if norm.lowercase else "false",
        "unicode_form": norm.unicode_form,
        "locale": norm.locale,
    }
    if model.method == "morph":
        meta["lexicon"] = LEXICON
    return [f"{k}={v}" for k, v in meta.items()]


def save_model(model, directory) -> Path:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    for stale in (MERGES, LEXICON):
        (out / stale).unlink(missing_ok=True)
    (out / META).write_bytes(("\n".join(_meta_lines(model)) + "\n").encode("utf-8"))
    vocab_save(model.vocab, out / VOCAB)
    if model.method == "bpe":
        merges_save(model.merges, out / MERGES)
    elif model.method == "morph":
        lexicon_save(model.lexicon, out / LEXICON)
    return out


def read_meta(directory) -> dict[str, str]:
    path = Path(directory) / META
    if not path.is_file():
        raise FormatError("missing meta file", path=path)
    meta = {}
    for lineno, line in enumerate(path.read_bytes().decode("utf-8").split("\n"), 1):
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key:
            raise FormatError("expected key=value", line=lineno, path=path)
        meta[key] = value
    for key in ("method", "vocab_size", "lowercase"):
        if key not in meta:
            raise FormatError(f"missing key {key!r}", path=path)
    if meta["method"] not in METHODS:
        raise FormatError(f"unknown method {meta['method']!r}", path=path)
    return meta


def load_model(directory):
    """Load and validate a model directory written by :func:`save_model`."""
    d = Path(directory)
    meta = read_meta(d)
    method = meta["method"]
    try:
        norm = NormalizationConfig(
            lowercase=meta["lowercase"] == "true",
            unicode_form=meta.get("unicode_form", "NFC"),
            locale=meta.get("locale", "tr"),
        )
    except InvalidArgumentError as e:
        raise FormatError(str(e), path=d / META) from None
    has_merges = (d / MERGES).is_file()
    if has_merges != (method == "bpe"):
        raise FormatError(f"merges.txt {'present' if has_merges else 'missing'} for method {method}", path=d)
    vocab = vocab_load(d / VOCAB)
    if str(len(vocab)) != meta["vocab_size"]:
        raise FormatError(f"meta vocab_size {meta['vocab_size']} != {len(vocab)} tokens in vocab.txt", path=d)

    if method == "char":
        model: object = byte_model(norm)
        if model.vocab != vocab:
            raise FormatError("vocab.txt is not the byte-level vocabulary", path=d / VOCAB)
        return model
    if method == "bpe":
        merges = merges_load(d / MERGES)
        try:
            merges.validate(BPE_BASE)
        except InvalidArgumentError as e:
            raise FormatError(str(e), path=d / MERGES) from None
        if list(vocab) != bpe_vocab_tokens(merges):
            raise FormatError("vocab.txt does not match merges.txt", path=d / VOCAB)
        return SubwordModel("bpe", vocab, merges, frozenset(BPE_BASE), norm)
    if method == "wordpiece":
        alphabet = frozenset(t for t in vocab.tokens[len(SPECIAL_TOKENS):] if len(strip_continuation(t)) == 1)
        return SubwordModel("wordpiece", vocab, None, alphabet, norm)
    if method == "morph":
        lexicon = lexicon_load(d / LEXICON, norm)
        return LexicalModel("morph", vocab, lexicon, norm)
    return LexicalModel("word", vocab, None, norm)

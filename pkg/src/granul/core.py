"""Shared domain types, Turkish-aware normalization and sequence assembly."""
from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from itertools import groupby
from pathlib import Path
from typing import Iterable, Sequence

from .errors import FormatError, InvalidArgumentError, InvalidTokenError, MalformedInputError

PAD, UNK, CLS, SEP, MASK = "[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"
SPECIAL_TOKENS = (PAD, UNK, CLS, SEP, MASK)
PAD_ID, UNK_ID, CLS_ID, SEP_ID, MASK_ID = range(5)

CONTINUATION = "##"


def is_valid_token(text: str) -> bool:
    return bool(text) and not any(ch.isspace() for ch in text)


def strip_continuation(token: str) -> str:
    return token[2:] if token.startswith(CONTINUATION) else token


class Vocabulary:
    """Immutable bijection between token text and contiguous integer ids.

    The five special tokens always occupy ids 0..4.
    """

    __slots__ = ("_tokens", "_index")

    def __init__(self, tokens: Iterable[str]):
        tokens = tuple(tokens)
        if tokens[: len(SPECIAL_TOKENS)] != SPECIAL_TOKENS:
            raise InvalidArgumentError(f"vocabulary must start with {' '.join(SPECIAL_TOKENS)}")
        index: dict[str, int] = {}
        for i, tok in enumerate(tokens):
            if not is_valid_token(tok):
                raise InvalidTokenError(f"invalid token {tok!r} at id {i}")
            if tok in index:
                raise InvalidArgumentError(f"duplicate token {tok!r} at ids {index[tok]} and {i}")
            index[tok] = i
        self._tokens = tokens
        self._index = index

    @classmethod
    def from_body(cls, body: Iterable[str]) -> "Vocabulary":
        """Build a vocabulary of the special tokens followed by ``body``."""
        return cls(SPECIAL_TOKENS + tuple(body))

    @property
    def tokens(self) -> tuple[str, ...]:
        return self._tokens

    def token_to_id(self, token: str) -> int:
        try:
            return self._index[token]
        except KeyError:
            raise InvalidTokenError(f"token {token!r} not in vocabulary") from None

    def id_to_token(self, idx: int) -> str:
        if not 0 <= idx < len(self._tokens):
            raise InvalidTokenError(f"id {idx} out of range for vocabulary of size {len(self)}")
        return self._tokens[idx]

    def get(self, token: str, default: int | None = None) -> int | None:
        return self._index.get(token, default)

    def __len__(self) -> int:
        return len(self._tokens)

    def __iter__(self):
        return iter(self._tokens)

    def __contains__(self, token: object) -> bool:
        return token in self._index

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Vocabulary):
            return NotImplemented
        return self._tokens == other._tokens

    def __hash__(self) -> int:
        return hash(self._tokens)

    def __repr__(self) -> str:
        return f"Vocabulary(size={len(self)})"


@dataclass(frozen=True)
class NormalizationConfig:
    lowercase: bool = True
    unicode_form: str = "NFC"
    locale: str = "tr"

    def __post_init__(self):
        if self.unicode_form != "NFC":
            raise InvalidArgumentError(f"unsupported unicode form {self.unicode_form!r}; only NFC")
        if self.locale != "tr":
            raise InvalidArgumentError(f"unsupported locale {self.locale!r}; only tr")


@dataclass(frozen=True)
class Encoding:
    ids: tuple[int, ...] = ()
    tokens: tuple[str, ...] = ()
    word_spans: tuple[tuple[int, int], ...] = field(default=())

    def __len__(self) -> int:
        return len(self.ids)


def make_encoding(tokens: Sequence[str], vocab: Vocabulary, word_spans=()) -> Encoding:
    return Encoding(
        ids=tuple(vocab.token_to_id(t) for t in tokens),
        tokens=tuple(tokens),
        word_spans=tuple(tuple(s) for s in word_spans),
    )


def _decode_utf8(text: str | bytes) -> str:
    if isinstance(text, (bytes, bytearray)):
        try:
            return bytes(text).decode("utf-8")
        except UnicodeDecodeError as e:
            raise MalformedInputError("invalid UTF-8", e.start) from None
    try:
        text.encode("utf-8")
    except UnicodeEncodeError as e:
        # lone surrogates: report the offset the preceding text would occupy in UTF-8
        raise MalformedInputError("unencodable character", len(text[: e.start].encode("utf-8"))) from None
    return text


_TURKISH_UPPER = str.maketrans({"I": "\u0131", "\u0130": "i"})


def turkish_lower(text: str) -> str:
    # I + COMBINING DOT ABOVE is the decomposed form of İ
    text = text.replace("I\u0307", "i").translate(_TURKISH_UPPER)
    return text.lower()


def normalize(text: str | bytes, config: NormalizationConfig = NormalizationConfig()) -> str:
    """Lowercase with Turkish casing rules (if enabled), then compose to NFC.

    >>> normalize("İstanbul")
    'istanbul'
    >>> normalize("ISPARTA")
    'ısparta'
    """
    text = _decode_utf8(text)
    if config.lowercase:
        text = turkish_lower(text)
    text = unicodedata.normalize("NFC", text)
    if config.lowercase:
        # a handful of code points only reach their final lowercase form after composition
        while True:
            again = unicodedata.normalize("NFC", turkish_lower(text))
            if again == text:
                break
            text = again
    return text


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def pre_tokenize(text: str) -> list[str]:
    """Split on whitespace and isolate every maximal run of punctuation."""
    words = []
    for chunk in text.split():
        for _, group in groupby(chunk, _is_punct):
            words.append("".join(group))
    return words


def assemble_sequence(body: Encoding, vocab: Vocabulary, max_length: int = 514) -> Encoding:
    """Wrap ``body`` in [CLS] ... [SEP], truncating it to fit ``max_length``."""
    if max_length < 2:
        raise InvalidArgumentError(f"max_length must be >= 2, got {max_length}")
    keep = max_length - 2
    ids = (vocab.token_to_id(CLS),) + tuple(body.ids[:keep]) + (vocab.token_to_id(SEP),)
    tokens = (CLS,) + tuple(body.tokens[:keep]) + (SEP,)
    spans = []
    for start, end in body.word_spans:
        if start >= keep:
            break
        spans.append((start + 1, min(end, keep) + 1))
    return Encoding(ids=ids, tokens=tokens, word_spans=tuple(spans))


def encode_text(model, text: str | bytes) -> Encoding:
    """Normalize, pre-tokenize and encode ``text`` word by word with ``model``.

    ``model`` needs ``vocab``, ``normalization`` and ``encode_word``.
    """
    words = pre_tokenize(normalize(text, model.normalization))
    tokens: list[str] = []
    spans = []
    for word in words:
        pieces = model.encode_word(word)
        spans.append((len(tokens), len(tokens) + len(pieces)))
        tokens.extend(pieces)
    return make_encoding(tokens, model.vocab, spans)


# Byte <-> printable character table. Whitespace, control characters and '#'
# are moved to code points >= 256 so that byte tokens are valid single-line
# tokens and never collide with the continuation prefix.
def _build_byte_table() -> tuple[str, ...]:
    keep = [b for b in range(256) if chr(b).isprintable() and not chr(b).isspace() and b not in (0x23, 0xAD)]
    table = {}
    extra = 0
    for b in range(256):
        if b in keep:
            table[b] = chr(b)
        else:
            table[b] = chr(256 + extra)
            extra += 1
    return tuple(table[b] for b in range(256))


BYTE_TO_CHAR = _build_byte_table()
CHAR_TO_BYTE = {ch: b for b, ch in enumerate(BYTE_TO_CHAR)}


def bytes_to_symbols(data: bytes) -> list[str]:
    return [BYTE_TO_CHAR[b] for b in data]


def symbols_to_bytes(text: str) -> bytes:
    try:
        return bytes(CHAR_TO_BYTE[ch] for ch in text)
    except KeyError:
        raise InvalidTokenError(f"{text!r} is not a byte-level token") from None


def display_byte_token(token: str) -> str:
    """Render a byte-level token as readable text when its bytes form valid UTF-8."""
    prefix = CONTINUATION if token.startswith(CONTINUATION) else ""
    try:
        return prefix + symbols_to_bytes(strip_continuation(token)).decode("utf-8")
    except (InvalidTokenError, UnicodeDecodeError):
        return token


def vocab_save(vocab: Vocabulary, path) -> None:
    Path(path).write_bytes("".join(t + "\n" for t in vocab).encode("utf-8"))


def _read_lines(path) -> list[str]:
    raw = Path(path).read_bytes()
    if raw.startswith(b"\xef\xbb\xbf"):
        raise FormatError("byte order mark not allowed", line=1, path=path)
    text = _decode_utf8(raw)
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def vocab_load(path) -> Vocabulary:
    lines = _read_lines(path)
    seen: dict[str, int] = {}
    for lineno, tok in enumerate(lines, 1):
        if tok == "":
            raise FormatError("empty line", line=lineno, path=path)
        if not is_valid_token(tok):
            raise FormatError(f"token {tok!r} contains whitespace", line=lineno, path=path)
        if tok in seen:
            raise FormatError(f"duplicate token {tok!r} (first on line {seen[tok]})", line=lineno, path=path)
        seen[tok] = lineno
    for i, special in enumerate(SPECIAL_TOKENS):
        if i >= len(lines) or lines[i] != special:
            raise FormatError(f"missing special token {special}", line=i + 1, path=path)
    return Vocabulary(lines)

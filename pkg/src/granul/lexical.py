"""Byte-level, word-level and morphological tokenizers."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .core import (
    BYTE_TO_CHAR,
    CONTINUATION,
    SPECIAL_TOKENS,
    UNK,
    Encoding,
    NormalizationConfig,
    Vocabulary,
    bytes_to_symbols,
    make_encoding,
    normalize,
    strip_continuation,
)
from .corpus import WordCounts
from .errors import FormatError, InvalidArgumentError, InvalidTokenError, MalformedInputError

BYTE_VOCAB_SIZE = 384
BYTE_OFFSET = len(SPECIAL_TOKENS)
N_RESERVED = BYTE_VOCAB_SIZE - BYTE_OFFSET - 256
_ASCII_SPACE = frozenset(b" \t\n\r\x0b\x0c")


@dataclass(frozen=True)
class ByteModel:
    """ByT5-style tokenizer: one token per UTF-8 byte, id = 5 + byte value.

    The trailing 123 ``[RESERVED_n]`` ids only pad the vocabulary to 384
    entries and are never produced.
    """

    vocab: Vocabulary
    normalization: NormalizationConfig = NormalizationConfig()
    method: str = "char"

    def encode_word(self, word: str) -> list[str]:
        return bytes_to_symbols(word.encode("utf-8"))


def byte_model(normalization: NormalizationConfig = NormalizationConfig()) -> ByteModel:
    reserved = [f"[RESERVED_{i}]" for i in range(N_RESERVED)]
    return ByteModel(Vocabulary.from_body(list(BYTE_TO_CHAR) + reserved), normalization)


def encode_bytes(text: str, model: ByteModel | None = None) -> Encoding:
    """Encode every UTF-8 byte of ``text``, whitespace included.

    Each whitespace-separated chunk, together with the whitespace after it,
    forms one word span.
    """
    if model is None:
        model = byte_model()
    try:
        data = text.encode("utf-8")
    except UnicodeEncodeError as e:
        raise MalformedInputError("unencodable character", len(text[: e.start].encode("utf-8"))) from None
    tokens = bytes_to_symbols(data)
    spans = []
    start = 0
    for i in range(1, len(data) + 1):
        # a span ends where whitespace is followed by non-whitespace
        if i == len(data) or (data[i - 1] in _ASCII_SPACE and data[i] not in _ASCII_SPACE):
            spans.append((start, i))
            start = i
    return make_encoding(tokens, model.vocab, spans)


def decode_bytes(encoding: Encoding | Sequence[int], model: ByteModel | None = None) -> str:
    ids = encoding.ids if isinstance(encoding, Encoding) else encoding
    out = bytearray()
    for i in ids:
        if not BYTE_OFFSET <= i < BYTE_OFFSET + 256:
            raise InvalidTokenError(f"id {i} is not a byte token")
        out.append(i - BYTE_OFFSET)
    try:
        return out.decode("utf-8")
    except UnicodeDecodeError as e:
        raise InvalidTokenError(f"byte sequence is not valid UTF-8 at offset {e.start}") from None


def decode_byte_tokens(tokens: Sequence[str], model: ByteModel | None = None) -> str:
    if model is None:
        model = byte_model()
    return decode_bytes([model.vocab.token_to_id(t) for t in tokens], model)


class SegmentationLexicon(Mapping[str, tuple[str, ...]]):
    """Surface word -> ordered units (stem, then ``##``-prefixed suffixes)."""

    __slots__ = ("_entries",)

    def __init__(self, entries: Mapping[str, Sequence[str]] | Iterable[tuple[str, Sequence[str]]] = ()):
        items = entries.items() if isinstance(entries, Mapping) else entries
        self._entries: dict[str, tuple[str, ...]] = {}
        for surface, units in items:
            units = tuple(units)
            check_segmentation(surface, units)
            self._entries[surface] = units

    def __getitem__(self, word: str) -> tuple[str, ...]:
        return self._entries[word]

    def __iter__(self):
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def segment(self, word: str) -> tuple[str, ...]:
        """Units for ``word``; unknown words are a single stem."""
        return self._entries.get(word, (word,))


def check_segmentation(surface: str, units: Sequence[str]) -> None:
    if not units:
        raise InvalidArgumentError(f"{surface!r}: no units")
    for i, unit in enumerate(units):
        body = strip_continuation(unit) if i else unit
        if not body or (i and not unit.startswith(CONTINUATION)) or (i == 0 and unit.startswith(CONTINUATION)):
            raise InvalidArgumentError(f"{surface!r}: bad unit {unit!r} at position {i}")
        if any(ch.isspace() for ch in unit):
            raise InvalidArgumentError(f"{surface!r}: unit {unit!r} contains whitespace")
    rebuilt = units[0] + "".join(strip_continuation(u) for u in units[1:])
    if rebuilt != surface:
        raise InvalidArgumentError(f"units {' '.join(units)!r} rebuild {rebuilt!r}, not {surface!r}")


def lexicon_load(path, norm: NormalizationConfig | None = NormalizationConfig()) -> SegmentationLexicon:
    """Read a ``surface<TAB>unit unit ...`` file.

    Surfaces and units are normalized with ``norm`` (pass None to keep them
    verbatim) and checked again afterwards.
    """
    raw = Path(path).read_bytes()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as e:
        raise MalformedInputError(f"{path}: invalid UTF-8", e.start) from None
    entries: dict[str, tuple[str, ...]] = {}
    for lineno, line in enumerate(text.split("\n"), 1):
        line = line.rstrip("\r")
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise FormatError("expected surface<TAB>units", line=lineno, path=path)
        surface, units = parts[0], tuple(parts[1].split())
        try:
            check_segmentation(surface, units)
            if norm is not None:
                surface = normalize(surface, norm)
                units = tuple(normalize(u, norm) for u in units)
                check_segmentation(surface, units)
        except InvalidArgumentError as e:
            raise FormatError(str(e), line=lineno, path=path) from None
        if surface in entries:
            raise FormatError(f"duplicate surface form {surface!r}", line=lineno, path=path)
        entries[surface] = units
    return SegmentationLexicon(entries)


def lexicon_save(lexicon: SegmentationLexicon, path) -> None:
    lines = [f"{w}\t{' '.join(units)}\n" for w, units in lexicon.items()]
    Path(path).write_bytes("".join(lines).encode("utf-8"))


@dataclass(frozen=True)
class LexicalModel:
    method: str  # "word" | "morph"
    vocab: Vocabulary
    lexicon: SegmentationLexicon | None = None
    normalization: NormalizationConfig = NormalizationConfig()

    def __post_init__(self):
        if self.method not in ("word", "morph"):
            raise InvalidArgumentError(f"unknown lexical method {self.method!r}")
        if self.method == "morph" and self.lexicon is None:
            object.__setattr__(self, "lexicon", SegmentationLexicon())

    def encode_word(self, word: str) -> list[str]:
        if self.method == "word":
            return [word if _is_content(word, self.vocab) else UNK]
        return [u if _is_content(u, self.vocab) else UNK for u in self.lexicon.segment(word)]


def _is_content(token: str, vocab: Vocabulary) -> bool:
    return token in vocab and token not in SPECIAL_TOKENS


def _top_units(freq: Counter, slots: int) -> list[str]:
    ranked = sorted(((u, c) for u, c in freq.items() if u not in SPECIAL_TOKENS), key=lambda kv: (-kv[1], kv[0]))
    return [u for u, _ in ranked[:slots]]


def _check_size(vocab_size: int) -> None:
    if vocab_size < len(SPECIAL_TOKENS):
        raise InvalidArgumentError(f"vocab_size must be >= {len(SPECIAL_TOKENS)}, got {vocab_size}")


def train_wordlevel(counts: WordCounts, vocab_size: int, normalization: NormalizationConfig = NormalizationConfig()) -> LexicalModel:
    _check_size(vocab_size)
    body = _top_units(Counter(dict(counts.items())), vocab_size - len(SPECIAL_TOKENS))
    return LexicalModel("word", Vocabulary.from_body(body), None, normalization)


def morph_unit_counts(counts: WordCounts, lexicon: SegmentationLexicon) -> Counter:
    freq: Counter[str] = Counter()
    for word, c in counts.items():
        for unit in lexicon.segment(word):
            freq[unit] += c
    return freq


def train_morph(
    counts: WordCounts,
    lexicon: SegmentationLexicon,
    vocab_size: int,
    normalization: NormalizationConfig = NormalizationConfig(),
) -> LexicalModel:
    _check_size(vocab_size)
    body = _top_units(morph_unit_counts(counts, lexicon), vocab_size - len(SPECIAL_TOKENS))
    return LexicalModel("morph", Vocabulary.from_body(body), lexicon, normalization)


def encode_lexical(model: LexicalModel, word: str) -> list[str]:
    return model.encode_word(word)


def decode_lexical(model: LexicalModel, tokens: Sequence[str]) -> str:
    words: list[str] = []
    for tok in tokens:
        if not _is_content(tok, model.vocab):
            raise InvalidTokenError(f"cannot decode token {tok!r}")
        if words and tok.startswith(CONTINUATION):
            words[-1] += strip_continuation(tok)
        else:
            words.append(tok)
    return " ".join(words)

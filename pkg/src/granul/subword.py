"""BPE and WordPiece training, encoding and decoding.

Both trainers start from the unique words of a corpus, spell each word as a
sequence of base symbols (continuation symbols carry a ``##`` prefix) and
repeatedly merge one adjacent symbol pair. They differ only in how the pair
is chosen:

* BPE takes the most frequent pair, over a byte alphabet;
* WordPiece takes the pair maximizing ``count(ab) / (count(a) * count(b))``,
  over the characters seen in training.

Ties go to the lexicographically smaller left symbol, then right symbol.
Merging stops when the vocabulary is full or no pair occurs twice.
"""
from __future__ import annotations

import heapq
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .core import (
    BYTE_TO_CHAR,
    CONTINUATION,
    SPECIAL_TOKENS,
    UNK,
    NormalizationConfig,
    Vocabulary,
    bytes_to_symbols,
    strip_continuation,
    symbols_to_bytes,
)
from .corpus import WordCounts
from .errors import FormatError, InvalidArgumentError, InvalidTokenError

MERGES_HEADER = "#granul merges v1"
MIN_PAIR_COUNT = 2

BYTE_INITIAL = tuple(BYTE_TO_CHAR)
BYTE_CONTINUATION = tuple(CONTINUATION + ch for ch in BYTE_TO_CHAR)
BPE_BASE = BYTE_INITIAL + BYTE_CONTINUATION
BPE_MIN_VOCAB = len(SPECIAL_TOKENS) + len(BPE_BASE)

Pair = tuple[str, str]


def merge_product(left: str, right: str) -> str:
    return left + strip_continuation(right)


def spell(units: Sequence[str]) -> list[str]:
    """Prefix every unit after the first with the continuation marker."""
    return [u if i == 0 else CONTINUATION + u for i, u in enumerate(units)]


def bpe_symbols(word: str) -> list[str]:
    return spell(bytes_to_symbols(word.encode("utf-8")))


def char_symbols(word: str) -> list[str]:
    return spell(list(word))


def apply_merge(symbols: list[str], pair: Pair) -> list[str]:
    """Replace every occurrence of ``pair`` in ``symbols``, scanning left to right."""
    left, right = pair
    out = []
    i = 0
    n = len(symbols)
    while i < n:
        if i + 1 < n and symbols[i] == left and symbols[i + 1] == right:
            out.append(merge_product(left, right))
            i += 2
        else:
            out.append(symbols[i])
            i += 1
    return out


class MergeTable:
    """Ordered merges; a merge's rank is its position."""

    __slots__ = ("pairs", "ranks")

    def __init__(self, pairs: Iterable[Pair] = ()):
        self.pairs: tuple[Pair, ...] = tuple((a, b) for a, b in pairs)
        self.ranks = {p: r for r, p in enumerate(self.pairs)}
        if len(self.ranks) != len(self.pairs):
            raise InvalidArgumentError("merge table contains a duplicate pair")

    def validate(self, base: Iterable[str]) -> None:
        """Check that every merge only uses base symbols or earlier products."""
        known = set(base)
        for rank, (a, b) in enumerate(self.pairs):
            for sym in (a, b):
                if sym not in known:
                    raise InvalidArgumentError(f"merge {rank} ({a} {b}) uses unknown symbol {sym!r}")
            known.add(merge_product(a, b))

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __eq__(self, other):
        return isinstance(other, MergeTable) and self.pairs == other.pairs

    def __hash__(self):
        return hash(self.pairs)

    def __repr__(self):
        return f"MergeTable({len(self)} merges)"


def merges_save(merges: MergeTable, path) -> None:
    lines = [MERGES_HEADER] + [f"{a} {b}" for a, b in merges]
    Path(path).write_bytes(("\n".join(lines) + "\n").encode("utf-8"))


def merges_load(path) -> MergeTable:
    try:
        text = Path(path).read_bytes().decode("utf-8")
    except UnicodeDecodeError as e:
        raise FormatError(f"invalid UTF-8 at byte offset {e.start}", path=path) from None
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != MERGES_HEADER:
        raise FormatError(f"missing header {MERGES_HEADER!r}", line=1, path=path)
    pairs = []
    seen = {}
    for lineno, line in enumerate(lines[1:], 2):
        parts = line.split(" ")
        if len(parts) != 2 or not all(parts):
            raise FormatError("expected 'left right'", line=lineno, path=path)
        pair = (parts[0], parts[1])
        if pair in seen:
            raise FormatError(f"duplicate merge (first on line {seen[pair]})", line=lineno, path=path)
        seen[pair] = lineno
        pairs.append(pair)
    return MergeTable(pairs)


@dataclass(frozen=True, eq=False)
class SubwordModel:
    method: str  # "bpe" | "wordpiece"
    vocab: Vocabulary
    merges: MergeTable | None
    base_alphabet: frozenset[str]
    normalization: NormalizationConfig = NormalizationConfig()
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.method not in ("bpe", "wordpiece"):
            raise InvalidArgumentError(f"unknown subword method {self.method!r}")
        if self.method == "bpe" and self.merges is None:
            raise InvalidArgumentError("a BPE model needs a merge table")

    def __eq__(self, other):
        if not isinstance(other, SubwordModel):
            return NotImplemented
        # WordPiece merges are training history only; encoding needs just the vocabulary
        same_merges = self.method != "bpe" or self.merges == other.merges
        return same_merges and (self.method, self.vocab, self.base_alphabet, self.normalization) == (
            other.method, other.vocab, other.base_alphabet, other.normalization)

    __hash__ = None

    def encode_word(self, word: str) -> list[str]:
        cached = self._cache.get(word)
        if cached is None:
            if self.method == "bpe":
                cached = _bpe_encode(self.merges, word)
            else:
                cached = _wordpiece_encode(self.vocab, word)
            if len(self._cache) < 100_000:
                self._cache[word] = cached
        return list(cached)


class _PairStats:
    """Incrementally maintained pair and symbol counts over the training words."""

    def __init__(self, counts: WordCounts, speller):
        words = sorted(counts)
        self.words = [speller(w) for w in words]
        self.freqs = [counts[w] for w in words]
        self.pairs: dict[Pair, int] = defaultdict(int)
        self.where: dict[Pair, set[int]] = defaultdict(set)
        self.symbols: dict[str, int] = defaultdict(int)
        self.touched: set[Pair] = set()
        for idx, (syms, f) in enumerate(zip(self.words, self.freqs)):
            self._add(idx, syms, f)
        self.touched.clear()

    def _add(self, idx, syms, f):
        for s in syms:
            self.symbols[s] += f
        for p in zip(syms, syms[1:]):
            self.pairs[p] += f
            self.where[p].add(idx)
            self.touched.add(p)

    def _remove(self, idx, syms, f):
        for s in syms:
            self.symbols[s] -= f
            if not self.symbols[s]:
                del self.symbols[s]
        for p in zip(syms, syms[1:]):
            self.pairs[p] -= f
            self.where[p].discard(idx)
            self.touched.add(p)
            if not self.pairs[p]:
                del self.pairs[p]
                del self.where[p]

    def merge(self, pair: Pair) -> None:
        for idx in sorted(self.where.get(pair, ())):
            syms, f = self.words[idx], self.freqs[idx]
            self._remove(idx, syms, f)
            syms = apply_merge(syms, pair)
            self.words[idx] = syms
            self._add(idx, syms, f)


def _check_vocab_size(vocab_size: int, minimum: int) -> None:
    if vocab_size < minimum:
        raise InvalidArgumentError(f"vocab_size must be >= {minimum}, got {vocab_size}")


def train_bpe(counts: WordCounts, vocab_size: int, normalization: NormalizationConfig = NormalizationConfig()) -> SubwordModel:
    _check_vocab_size(vocab_size, BPE_MIN_VOCAB)
    stats = _PairStats(counts, bpe_symbols)
    tokens = list(SPECIAL_TOKENS + BPE_BASE)
    known = set(tokens)
    merges: list[Pair] = []
    heap = [(-c, a, b) for (a, b), c in stats.pairs.items()]
    heapq.heapify(heap)
    while len(tokens) < vocab_size and heap:
        neg, a, b = heapq.heappop(heap)
        if stats.pairs.get((a, b)) != -neg:
            continue  # stale entry
        if -neg < MIN_PAIR_COUNT:
            break
        merges.append((a, b))
        stats.merge((a, b))
        product = merge_product(a, b)
        # different merge paths can reach the same text
        if product not in known:
            known.add(product)
            tokens.append(product)
        for p in stats.touched:
            c = stats.pairs.get(p)
            if c:
                heapq.heappush(heap, (-c, p[0], p[1]))
        stats.touched.clear()
    return SubwordModel("bpe", Vocabulary(tokens), MergeTable(merges), frozenset(BPE_BASE), normalization)


def bpe_vocab_tokens(merges: MergeTable) -> list[str]:
    """Specials, the byte alphabet, then each new merge product in rank order."""
    tokens = list(SPECIAL_TOKENS + BPE_BASE)
    known = set(tokens)
    for a, b in merges:
        product = merge_product(a, b)
        if product not in known:
            known.add(product)
            tokens.append(product)
    return tokens


def bpe_from_merges(merges: MergeTable, normalization: NormalizationConfig = NormalizationConfig()) -> SubwordModel:
    merges.validate(BPE_BASE)
    return SubwordModel("bpe", Vocabulary(bpe_vocab_tokens(merges)), merges, frozenset(BPE_BASE), normalization)


def wordpiece_alphabet(counts: Iterable[str]) -> list[str]:
    initial, inner = set(), set()
    for word in counts:
        initial.add(word[0])
        inner.update(word[1:])
    return sorted(initial) + [CONTINUATION + ch for ch in sorted(inner)]


def train_wordpiece(
    counts: WordCounts, vocab_size: int, normalization: NormalizationConfig = NormalizationConfig()
) -> SubwordModel:
    alphabet = wordpiece_alphabet(counts)
    _check_vocab_size(vocab_size, len(SPECIAL_TOKENS) + len(alphabet))
    stats = _PairStats(counts, char_symbols)
    tokens = list(SPECIAL_TOKENS) + alphabet
    known = set(tokens)
    merges: list[Pair] = []
    while len(tokens) < vocab_size:
        best = None
        best_num = best_den = 0
        for pair, c in stats.pairs.items():
            if c < MIN_PAIR_COUNT:
                continue
            den = stats.symbols[pair[0]] * stats.symbols[pair[1]]
            # exact comparison of c/den against best_num/best_den
            lhs, rhs = c * best_den, best_num * den
            if best is None or lhs > rhs or (lhs == rhs and pair < best):
                best, best_num, best_den = pair, c, den
        if best is None:
            break
        merges.append(best)
        stats.merge(best)
        product = merge_product(*best)
        if product not in known:
            known.add(product)
            tokens.append(product)
    return SubwordModel("wordpiece", Vocabulary(tokens), MergeTable(merges), frozenset(alphabet), normalization)


def _bpe_encode(merges: MergeTable, word: str) -> tuple[str, ...]:
    syms = bpe_symbols(word)
    ranks = merges.ranks
    while len(syms) > 1:
        best_rank, best = None, None
        for p in zip(syms, syms[1:]):
            r = ranks.get(p)
            if r is not None and (best_rank is None or r < best_rank):
                best_rank, best = r, p
        if best is None:
            break
        syms = apply_merge(syms, best)
    return tuple(syms)


def _wordpiece_encode(vocab: Vocabulary, word: str) -> tuple[str, ...]:
    pieces = []
    start = 0
    while start < len(word):
        for end in range(len(word), start, -1):
            piece = word[start:end] if start == 0 else CONTINUATION + word[start:end]
            if piece in vocab and piece not in SPECIAL_TOKENS:
                pieces.append(piece)
                start = end
                break
        else:
            return (UNK,)
    return tuple(pieces)


def encode_subword(model: SubwordModel, word: str) -> list[str]:
    return model.encode_word(word)


def decode_subword(model: SubwordModel, tokens: Sequence[str]) -> str:
    """Join tokens back into space-separated words.

    Raises InvalidTokenError for special tokens and tokens missing from the vocabulary.
    """
    words: list[list[str]] = []
    for tok in tokens:
        if tok in SPECIAL_TOKENS or tok not in model.vocab:
            raise InvalidTokenError(f"cannot decode token {tok!r}")
        if words and tok.startswith(CONTINUATION):
            words[-1].append(strip_continuation(tok))
        else:
            words.append([strip_continuation(tok)])
    if model.method == "wordpiece":
        return " ".join("".join(w) for w in words)
    out = []
    for w in words:
        data = b"".join(symbols_to_bytes(piece) for piece in w)
        try:
            out.append(data.decode("utf-8"))
        except UnicodeDecodeError:
            raise InvalidTokenError(f"tokens {w!r} do not form valid UTF-8") from None
    return " ".join(out)

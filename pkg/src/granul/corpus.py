"""Streaming corpus ingestion, document filtering and word counting."""
from __future__ import annotations

import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import islice
from pathlib import Path
from typing import Callable, Iterable, Iterator, Mapping

from .core import NormalizationConfig, normalize, pre_tokenize
from .errors import FormatError, InvalidArgumentError, MalformedInputError

THREADS_ENV = "GRANUL_THREADS"
SHARD_SIZE = 2048


@dataclass(frozen=True)
class Document:
    id: int
    text: str


def resolve_threads(threads: int | None = None) -> int:
    """Thread count from the argument, else ``GRANUL_THREADS``; 0 means one per CPU."""
    if threads is None:
        raw = os.environ.get(THREADS_ENV, "0")
        try:
            threads = int(raw)
        except ValueError:
            raise InvalidArgumentError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if threads < 0:
        raise InvalidArgumentError(f"thread count must be >= 0, got {threads}")
    return threads or (os.cpu_count() or 1)


def _iter_lines(path) -> Iterator[str]:
    offset = 0
    with open(path, "rb") as f:
        for raw in f:
            try:
                line = raw.decode("utf-8")
            except UnicodeDecodeError as e:
                raise MalformedInputError(f"{path}: invalid UTF-8", offset + e.start) from None
            offset += len(raw)
            yield line.rstrip("\r\n")


def ingest(path, format: str = "line") -> Iterator[Document]:
    """Yield documents from a UTF-8 text file, in file order.

    ``format`` is ``"line"`` (one document per non-blank line) or ``"blank"``
    (paragraphs separated by blank lines).
    """
    if format not in ("line", "blank"):
        raise InvalidArgumentError(f"unknown corpus format {format!r}")
    if not Path(path).is_file():
        raise FileNotFoundError(f"corpus not readable: {path}")
    return _ingest(path, format)


def _ingest(path, format: str) -> Iterator[Document]:
    n = 0
    if format == "line":
        for line in _iter_lines(path):
            if line.strip():
                yield Document(n, line)
                n += 1
        return
    block: list[str] = []
    for line in _iter_lines(path):
        if line.strip():
            block.append(line)
        elif block:
            yield Document(n, "\n".join(block))
            n += 1
            block = []
    if block:
        yield Document(n, "\n".join(block))


@dataclass(frozen=True)
class DocumentFilter:
    name: str
    predicate: Callable[[Document], bool]

    def __call__(self, doc: Document) -> bool:
        return bool(self.predicate(doc))


KEEP_ALL = DocumentFilter("none", lambda doc: True)

TURKISH_LETTERS = frozenset("abcçdefgğhıijklmnoöprsştuüvyz" "ABCÇDEFGĞHIİJKLMNOÖPRSŞTUÜVYZ")


def turkish_letter_fraction(text: str) -> float:
    letters = [ch for ch in text if ch.isalpha()]
    if not letters:
        return 0.0
    return sum(ch in TURKISH_LETTERS for ch in letters) / len(letters)


def turkish_heuristic(threshold: float = 0.9) -> DocumentFilter:
    """Keep documents whose alphabetic characters are mostly Turkish letters.

    A stand-in for a proper language detector; documents without letters are dropped.
    """
    if not 0.0 <= threshold <= 1.0:
        raise InvalidArgumentError(f"threshold must lie in [0, 1], got {threshold}")

    def keep(doc: Document) -> bool:
        return turkish_letter_fraction(doc.text) >= threshold

    return DocumentFilter("turkish-heuristic", keep)


class FilteredStream:
    """Iterator over the documents a filter keeps.

    ``kept`` and ``dropped`` are running totals; they are final once the
    stream is exhausted.
    """

    def __init__(self, docs: Iterable[Document], doc_filter: DocumentFilter):
        self._docs = iter(docs)
        self.filter = doc_filter
        self.kept = 0
        self.dropped = 0

    def __iter__(self):
        return self

    def __next__(self) -> Document:
        for doc in self._docs:
            if self.filter(doc):
                self.kept += 1
                return doc
            self.dropped += 1
        raise StopIteration


def filter_documents(docs: Iterable[Document], doc_filter: DocumentFilter = KEEP_ALL) -> FilteredStream:
    return FilteredStream(docs, doc_filter)


class WordCounts(Mapping[str, int]):
    """Immutable word -> count table.

    Iteration follows the canonical order: descending count, then word.
    """

    __slots__ = ("_counts", "total_words")

    def __init__(self, counts: Mapping[str, int] | Iterable[tuple[str, int]] = ()):
        items = counts.items() if isinstance(counts, Mapping) else counts
        merged: Counter[str] = Counter()
        for word, count in items:
            if count < 1:
                raise InvalidArgumentError(f"count for {word!r} must be >= 1, got {count}")
            merged[word] += count
        self._counts = dict(sorted(merged.items(), key=lambda kv: (-kv[1], kv[0])))
        self.total_words = sum(self._counts.values())

    def __getitem__(self, word: str) -> int:
        return self._counts[word]

    def __iter__(self):
        return iter(self._counts)

    def __len__(self) -> int:
        return len(self._counts)

    def __eq__(self, other):
        if isinstance(other, WordCounts):
            return self._counts == other._counts
        return super().__eq__(other)

    def __hash__(self):
        return hash(tuple(self._counts.items()))

    def __repr__(self) -> str:
        return f"WordCounts({len(self)} words, total={self.total_words})"


def _count_shard(texts: list[str], norm: NormalizationConfig) -> Counter:
    c: Counter[str] = Counter()
    for text in texts:
        c.update(pre_tokenize(normalize(text, norm)))
    return c


def shard_texts(docs: Iterable[Document | str], size: int) -> Iterator[list[str]]:
    it = iter(docs)
    while True:
        chunk = [d.text if isinstance(d, Document) else d for d in islice(it, size)]
        if not chunk:
            return
        yield chunk


def count_words(
    docs: Iterable[Document | str],
    norm: NormalizationConfig = NormalizationConfig(),
    threads: int | None = None,
) -> WordCounts:
    """Count normalized, pre-tokenized words over a document stream.

    Shards of documents are counted independently and summed, so the result
    does not depend on document order or thread count. At most ``2 * threads``
    shards are held in memory at a time.
    """
    threads = resolve_threads(threads)
    total: Counter[str] = Counter()
    if threads == 1:
        for shard in shard_texts(docs, SHARD_SIZE):
            total.update(_count_shard(shard, norm))
        return WordCounts(total)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        pending = []
        for shard in shard_texts(docs, SHARD_SIZE):
            pending.append(pool.submit(_count_shard, shard, norm))
            if len(pending) >= 2 * threads:
                total.update(pending.pop(0).result())
        for fut in pending:
            total.update(fut.result())
    return WordCounts(total)


def save_counts(counts: WordCounts, path) -> None:
    """Write ``word<TAB>count`` lines in canonical order."""
    Path(path).write_bytes("".join(f"{w}\t{c}\n" for w, c in counts.items()).encode("utf-8"))


def load_counts(path) -> WordCounts:
    items = []
    seen = set()
    for lineno, line in enumerate(_iter_lines(path), 1):
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise FormatError("expected word<TAB>count", line=lineno, path=path)
        word, raw = parts
        if not word or word in seen:
            raise FormatError(f"empty or duplicate word {word!r}", line=lineno, path=path)
        try:
            count = int(raw)
        except ValueError:
            raise FormatError(f"bad count {raw!r}", line=lineno, path=path) from None
        if count < 1:
            raise FormatError(f"count must be >= 1, got {count}", line=lineno, path=path)
        seen.add(word)
        items.append((word, count))
    return WordCounts(items)

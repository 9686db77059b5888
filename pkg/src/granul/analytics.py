"""Corpus diagnostics: unknown-token ratio, fertility, tokenizer comparison, energy."""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np

from .core import UNK, assemble_sequence, encode_text, normalize, display_byte_token
from .corpus import Document, shard_texts, resolve_threads
from .errors import InvalidArgumentError

METHOD_NAMES = {
    "char": "Character-level",
    "bpe": "BPE",
    "wordpiece": "WordPiece",
    "morph": "Morphological-level",
    "word": "Word-level",
}

JSON_KEYS = (
    "method", "vocab_size", "unk_ratio", "fertility", "seq_mean", "seq_p50",
    "seq_p95", "seq_max", "token_count", "unk_count", "word_count",
)


@dataclass(frozen=True)
class CorpusStats:
    method: str
    vocab_size: int
    token_count: int
    unk_count: int
    word_count: int
    seq_mean: float
    seq_p50: float
    seq_p95: float
    seq_max: int

    @property
    def unk_ratio(self) -> float:
        return self.unk_count / self.token_count if self.token_count else 0.0

    @property
    def fertility(self) -> float:
        return self.token_count / self.word_count if self.word_count else 0.0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["unk_ratio"] = self.unk_ratio
        d["fertility"] = self.fertility
        return {k: d[k] for k in JSON_KEYS}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, sort_keys=False)


def _shard_stats(model, texts: list[str]):
    tokens = unks = words = 0
    lengths = []
    for text in texts:
        enc = encode_text(model, text)
        tokens += len(enc.tokens)
        unks += sum(t == UNK for t in enc.tokens)
        words += len(enc.word_spans)
        lengths.append(len(enc.tokens))
    return tokens, unks, words, lengths


def corpus_stats(model, docs: Iterable[Document | str], threads: int | None = None) -> CorpusStats:
    """Tokenize every document without [CLS]/[SEP] and aggregate the counts.

    Shards are merged in input order, so results do not depend on ``threads``.
    """
    threads = resolve_threads(threads)
    parts = []
    if threads == 1:
        parts = [_shard_stats(model, s) for s in shard_texts(docs, 1024)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda s: _shard_stats(model, s), shard_texts(docs, 1024)))
    tokens = sum(p[0] for p in parts)
    unks = sum(p[1] for p in parts)
    words = sum(p[2] for p in parts)
    lengths = np.array([n for p in parts for n in p[3]], dtype=np.int64)
    if lengths.size:
        mean, p50, p95 = float(lengths.mean()), float(np.percentile(lengths, 50)), float(np.percentile(lengths, 95))
        longest = int(lengths.max())
    else:
        mean = p50 = p95 = 0.0
        longest = 0
    return CorpusStats(
        method=model.method,
        vocab_size=len(model.vocab),
        token_count=tokens,
        unk_count=unks,
        word_count=words,
        seq_mean=mean,
        seq_p50=p50,
        seq_p95=p95,
        seq_max=longest,
    )


# both reports come from the same pass
unk_ratio = corpus_stats
fertility = corpus_stats


def format_stats(stats: Sequence[CorpusStats], report: str = "all") -> str:
    """Aligned plain-text table, one row per model."""
    cols = {
        "unk": ["method", "vocab_size", "token_count", "unk_count", "unk_ratio"],
        "fertility": ["method", "vocab_size", "word_count", "token_count", "fertility",
                      "seq_mean", "seq_p50", "seq_p95", "seq_max"],
    }
    if report == "all":
        keys = list(JSON_KEYS)
    elif report in cols:
        keys = cols[report]
    else:
        raise InvalidArgumentError(f"unknown report {report!r}")

    def fmt(v):
        if isinstance(v, float):
            return f"{v:.6g}"
        return str(v)

    rows = [keys] + [[fmt(s.to_dict()[k]) for k in keys] for s in stats]
    widths = [max(len(r[i]) for r in rows) for i in range(len(keys))]
    return "\n".join("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows)


@dataclass(frozen=True)
class ComparisonRow:
    method: str
    tokens: tuple[str, ...]


def compare(models: Sequence, sentence: str, max_length: int = 514) -> list[ComparisonRow]:
    """Tokenize ``sentence`` with each model, in the layout of a side-by-side table.

    The byte model lists the characters of the normalized sentence, spaces
    included and without special tokens; the others are wrapped in [CLS]/[SEP].
    Byte-level BPE tokens are shown as readable text.
    """
    rows = []
    for model in models:
        name = METHOD_NAMES.get(model.method, model.method)
        if model.method == "char":
            toks = tuple(normalize(sentence, model.normalization))
        else:
            toks = assemble_sequence(encode_text(model, sentence), model.vocab, max_length).tokens
            if model.method == "bpe":
                toks = tuple(display_byte_token(t) for t in toks)
        rows.append(ComparisonRow(name, tuple(toks)))
    return rows


def format_comparison(rows: Sequence[ComparisonRow]) -> str:
    width = max((len(r.method) for r in rows), default=0)
    return "\n".join(
        f"{r.method.ljust(width)}  " + ", ".join(json.dumps(t, ensure_ascii=False) for t in r.tokens)
        for r in rows
    )


DEFAULT_WATTS = 250.0
DEFAULT_SCC_PER_TON = 300.0


@dataclass(frozen=True)
class EnergyReport:
    gpu_count: int
    hours: float
    watts_per_gpu: float = DEFAULT_WATTS
    kg_co2: float | None = None
    usd_scc: float | None = None

    @property
    def kwh(self) -> float:
        return self.gpu_count * self.hours * self.watts_per_gpu / 1000


def _nonneg(**values):
    for name, v in values.items():
        if v is None:
            continue
        if v < 0:
            raise InvalidArgumentError(f"{name} must be nonnegative, got {v}")


def ghg(kwh: float, factor: float) -> float:
    """kg CO2-eq for ``kwh`` at ``factor`` kg per kWh."""
    _nonneg(kwh=kwh, factor=factor)
    return kwh * factor


def scc(kg_co2: float, usd_per_ton: float = DEFAULT_SCC_PER_TON) -> float:
    """Social carbon cost in USD."""
    _nonneg(kg_co2=kg_co2, usd_per_ton=usd_per_ton)
    return kg_co2 / 1000 * usd_per_ton


def energy(
    gpu_count: int,
    hours: float,
    watts: float = DEFAULT_WATTS,
    factor: float | None = None,
    usd_per_ton: float = DEFAULT_SCC_PER_TON,
) -> EnergyReport:
    """GPU energy assuming every GPU draws ``watts`` for the whole run.

    CPU power and hardware manufacturing are not counted. Emissions and cost
    are only filled in when a grid ``factor`` is given.
    """
    _nonneg(gpu_count=gpu_count, hours=hours, watts=watts, factor=factor, usd_per_ton=usd_per_ton)
    report = EnergyReport(gpu_count, hours, watts)
    if factor is None:
        return report
    kg = ghg(report.kwh, factor)
    return EnergyReport(gpu_count, hours, watts, kg, scc(kg, usd_per_ton))

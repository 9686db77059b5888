"""Tokenizers at five granularities (byte, BPE, WordPiece, morphological, word)
with Turkish-aware normalization, vocabulary budgeting and corpus diagnostics."""
from .analytics import CorpusStats, EnergyReport, compare, corpus_stats, energy, fertility, ghg, scc, unk_ratio
from .budget import BudgetSpec, embedding_params, embedding_ratio, format_k, vocab_size_fixed_core, vocab_size_total
from .core import (
    SPECIAL_TOKENS,
    Encoding,
    NormalizationConfig,
    Vocabulary,
    assemble_sequence,
    encode_text,
    normalize,
    pre_tokenize,
    vocab_load,
    vocab_save,
)
from .corpus import Document, DocumentFilter, WordCounts, count_words, filter_documents, ingest, turkish_heuristic
from .errors import FormatError, GranulError, InvalidArgumentError, InvalidTokenError, MalformedInputError
from .lexical import (
    ByteModel,
    LexicalModel,
    SegmentationLexicon,
    byte_model,
    decode_bytes,
    encode_bytes,
    encode_lexical,
    lexicon_load,
    train_morph,
    train_wordlevel,
)
from .modeldir import load_model, save_model
from .subword import MergeTable, SubwordModel, decode_subword, encode_subword, merges_load, merges_save, train_bpe, train_wordpiece

__all__ = [
    "CorpusStats",
    "EnergyReport",
    "compare",
    "corpus_stats",
    "energy",
    "fertility",
    "ghg",
    "scc",
    "unk_ratio",
    "BudgetSpec",
    "embedding_params",
    "embedding_ratio",
    "format_k",
    "vocab_size_fixed_core",
    "vocab_size_total",
    "SPECIAL_TOKENS",
    "Encoding",
    "NormalizationConfig",
    "Vocabulary",
    "assemble_sequence",
    "encode_text",
    "normalize",
    "pre_tokenize",
    "vocab_load",
    "vocab_save",
    "Document",
    "DocumentFilter",
    "WordCounts",
    "count_words",
    "filter_documents",
    "ingest",
    "turkish_heuristic",
    "FormatError",
    "GranulError",
    "InvalidArgumentError",
    "InvalidTokenError",
    "MalformedInputError",
    "ByteModel",
    "LexicalModel",
    "SegmentationLexicon",
    "byte_model",
    "decode_bytes",
    "encode_bytes",
    "encode_lexical",
    "lexicon_load",
    "train_morph",
    "train_wordlevel",
    "load_model",
    "save_model",
    "MergeTable",
    "SubwordModel",
    "decode_subword",
    "encode_subword",
    "merges_load",
    "merges_save",
    "train_bpe",
    "train_wordpiece",
]

__version__ = "0.1.0"

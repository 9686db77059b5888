import unicodedata

import pytest
from hypothesis import given, strategies as st

from granul.core import (
    CLS,
    SEP,
    SPECIAL_TOKENS,
    CHAR_TO_BYTE,
    BYTE_TO_CHAR,
    Encoding,
    NormalizationConfig,
    Vocabulary,
    assemble_sequence,
    make_encoding,
    normalize,
    pre_tokenize,
    vocab_load,
    vocab_save,
)
from granul.errors import FormatError, InvalidArgumentError, MalformedInputError


@pytest.mark.parametrize(
    "raw, expected",
    [
        ("İstanbul", "istanbul"),
        ("ISPARTA", "ısparta"),
        ("ş", "ş"),
        ("İzmir", "izmir"),
        ("ÇĞÖŞÜ", "çğöşü"),
    ],
)
def test_normalize_examples(raw, expected):
    assert normalize(raw) == expected


def test_normalize_without_lowercase_only_composes():
    cfg = NormalizationConfig(lowercase=False)
    assert normalize("İş", cfg) == "İş"


def test_normalize_rejects_invalid_utf8_with_offset():
    with pytest.raises(MalformedInputError) as exc:
        normalize(b"ab\xffcd")
    assert exc.value.offset == 2
    assert "byte offset 2" in str(exc.value)


def test_normalize_rejects_lone_surrogate():
    with pytest.raises(MalformedInputError) as exc:
        normalize("ş\ud800")
    assert exc.value.offset == 2


def test_only_nfc_supported():
    with pytest.raises(InvalidArgumentError):
        NormalizationConfig(unicode_form="NFKC")


@given(st.text())
def test_normalize_idempotent_nfc_and_no_capital_i(text):
    out = normalize(text)
    assert normalize(out) == out
    assert unicodedata.is_normalized("NFC", out)
    assert "I" not in out and "İ" not in out


@pytest.mark.parametrize(
    "text, words",
    [
        ("toplumsal barış sağlanır", ["toplumsal", "barış", "sağlanır"]),
        ("", []),
        ("evet,hayır", ["evet", ",", "hayır"]),
        ("  a\tb　c  ", ["a", "b", "c"]),
        ("ne?!.. dedi", ["ne", "?!..", "dedi"]),
    ],
)
def test_pre_tokenize(text, words):
    assert pre_tokenize(text) == words


@given(st.text())
def test_pre_tokenize_words_are_valid_tokens(text):
    words = pre_tokenize(text)
    assert all(w and not any(c.isspace() for c in w) for w in words)
    assert "".join(words) == "".join(text.split())


def _vocab(*body):
    return Vocabulary.from_body(body)


def test_vocabulary_specials_and_bijection():
    v = _vocab("barış", "##ın")
    assert v.tokens[:5] == SPECIAL_TOKENS
    assert [v.token_to_id(t) for t in SPECIAL_TOKENS] == [0, 1, 2, 3, 4]
    for i in range(len(v)):
        assert v.token_to_id(v.id_to_token(i)) == i


@pytest.mark.parametrize("body", [["a", "a"], ["a b"], [""]])
def test_vocabulary_rejects_bad_entries(body):
    with pytest.raises(ValueError):
        _vocab(*body)


def test_vocabulary_requires_specials_first():
    with pytest.raises(InvalidArgumentError):
        Vocabulary(["a", "[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"])


def test_vocab_roundtrip(tmp_path):
    v = Vocabulary(SPECIAL_TOKENS)
    vocab_save(v, tmp_path / "v.txt")
    assert vocab_load(tmp_path / "v.txt") == v
    v2 = _vocab("barış", "##ın", "ğ")
    vocab_save(v2, tmp_path / "v2.txt")
    assert vocab_load(tmp_path / "v2.txt") == v2


def _write(tmp_path, lines):
    p = tmp_path / "vocab.txt"
    p.write_bytes(("\n".join(lines) + "\n").encode("utf-8"))
    return p


def test_vocab_load_duplicate_names_second_line(tmp_path):
    p = _write(tmp_path, list(SPECIAL_TOKENS) + ["barış", "ev", "barış"])
    with pytest.raises(FormatError) as exc:
        vocab_load(p)
    assert exc.value.line == 8


def test_vocab_load_missing_special(tmp_path):
    p = _write(tmp_path, ["[PAD]", "[CLS]", "[SEP]", "[MASK]", "barış"])
    with pytest.raises(FormatError, match="missing special token"):
        vocab_load(p)


def test_vocab_load_empty_line(tmp_path):
    p = _write(tmp_path, list(SPECIAL_TOKENS) + ["", "ev"])
    with pytest.raises(FormatError) as exc:
        vocab_load(p)
    assert exc.value.line == 6


def test_vocab_load_rejects_bom_and_crlf(tmp_path):
    p = tmp_path / "bom.txt"
    p.write_bytes(b"\xef\xbb\xbf" + "\n".join(SPECIAL_TOKENS).encode())
    with pytest.raises(FormatError):
        vocab_load(p)
    p.write_bytes("\r\n".join(SPECIAL_TOKENS).encode())
    with pytest.raises(FormatError):
        vocab_load(p)


def test_assemble_wraps_body():
    v = _vocab("barış")
    body = make_encoding(["barış"], v, [(0, 1)])
    out = assemble_sequence(body, v, 514)
    assert out.tokens == (CLS, "barış", SEP)
    assert out.ids == (2, 5, 3)
    assert out.word_spans == ((1, 2),)


def test_assemble_empty_body():
    v = _vocab()
    assert assemble_sequence(Encoding(), v, 2).tokens == (CLS, SEP)


def test_assemble_truncates_to_max_length():
    v = _vocab("a")
    body = make_encoding(["a"] * 600, v, [(i, i + 1) for i in range(600)])
    out = assemble_sequence(body, v, 514)
    assert len(out) == 514
    assert out.tokens.count("a") == 512
    assert out.word_spans[-1] == (512, 513)
    assert len(out.word_spans) == 512


def test_assemble_clips_partial_word():
    v = _vocab("a", "##a")
    body = make_encoding(["a", "##a", "##a"], v, [(0, 3)])
    out = assemble_sequence(body, v, 4)
    assert out.tokens == (CLS, "a", "##a", SEP)
    assert out.word_spans == ((1, 3),)


def test_assemble_rejects_short_max_length():
    with pytest.raises(InvalidArgumentError):
        assemble_sequence(Encoding(), _vocab(), 1)


@given(st.lists(st.integers(0, 3), max_size=40), st.integers(2, 50))
def test_assemble_length_and_framing(word_lengths, max_length):
    v = _vocab("x")
    tokens, spans = [], []
    for n in word_lengths:
        if n:
            spans.append((len(tokens), len(tokens) + n))
            tokens += ["x"] * n
    out = assemble_sequence(make_encoding(tokens, v, spans), v, max_length)
    assert len(out) <= max_length
    assert out.ids[0] == 2 and out.ids[-1] == 3
    covered = [i for s, e in out.word_spans for i in range(s, e)]
    assert covered == list(range(1, len(out) - 1))


def test_byte_table_is_printable_bijection():
    assert len(set(BYTE_TO_CHAR)) == 256
    assert all(ch.isprintable() and not ch.isspace() and ch != "#" for ch in BYTE_TO_CHAR)
    assert all(CHAR_TO_BYTE[BYTE_TO_CHAR[b]] == b for b in range(256))
    assert BYTE_TO_CHAR[ord("a")] == "a"

import io
import subprocess
import sys

import pytest

from granul.cli import main
from granul.core import normalize, pre_tokenize
from granul.modeldir import load_model, read_meta
from granul.subword import BPE_MIN_VOCAB

from conftest import SAMPLE_SENTENCE, make_corpus


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out=out)
    return code, out.getvalue()


def test_train_char_needs_no_corpus(tmp_path):
    code, out = run("train", "--method", "char", "--out", tmp_path / "m")
    assert code == 0 and out == "vocab_size=384\n"
    assert len(load_model(tmp_path / "m").vocab) == 384


def test_train_char_rejects_other_sizes(tmp_path):
    assert run("train", "--method", "char", "--vocab-size", "500", "--out", tmp_path / "m")[0] == 2


@pytest.mark.parametrize(
    "extra",
    [
        ["--method", "word", "--vocab-size", "4"],
        ["--method", "bpe", "--vocab-size", str(BPE_MIN_VOCAB - 1)],
        ["--method", "morph", "--vocab-size", "50"],
        ["--method", "word"],
        ["--method", "dance", "--vocab-size", "50"],
    ],
)
def test_train_usage_errors(tmp_path, small_corpus, extra):
    assert run("train", "--input", small_corpus, "--out", tmp_path / "m", *extra)[0] == 2


def test_train_reports_counts(tmp_path, small_corpus):
    code, out = run("train", "--method", "word", "--vocab-size", "30", "--input", small_corpus,
                    "--out", tmp_path / "m")
    assert code == 0
    assert out.splitlines() == ["documents kept=60 dropped=0", "vocab_size=30"]


def test_train_with_filter(tmp_path):
    p = tmp_path / "c.txt"
    p.write_text("Bugün hava çok güzel\nwww example xyz\n", encoding="utf-8")
    code, out = run("train", "--method", "word", "--vocab-size", "10", "--input", p,
                    "--filter", "turkish-heuristic", "--out", tmp_path / "m")
    assert code == 0
    assert out.splitlines()[0] == "documents kept=1 dropped=1"


def test_train_bpe_size_accounting(tmp_path):
    p = tmp_path / "c.txt"
    p.write_text("güneş güneşin güneşe\n" * 3, encoding="utf-8")
    code, out = run("train", "--method", "bpe", "--vocab-size", "530", "--input", p, "--out", tmp_path / "m")
    assert code == 0
    m = load_model(tmp_path / "m")
    assert len(m.vocab) <= 530
    assert len(m.vocab) - BPE_MIN_VOCAB <= len(m.merges)


@pytest.mark.parametrize("method", ["char", "bpe", "wordpiece", "morph", "word"])
def test_load_after_train(tmp_path, small_corpus, morph_lexicon_file, method):
    args = ["train", "--method", method, "--out", tmp_path / "m"]
    if method != "char":
        args += ["--input", small_corpus, "--vocab-size", {"bpe": 600}.get(method, 60)]
    if method == "morph":
        args += ["--lexicon", morph_lexicon_file]
    assert run(*args)[0] == 0
    m = load_model(tmp_path / "m")
    meta = read_meta(tmp_path / "m")
    assert meta["method"] == method and int(meta["vocab_size"]) == len(m.vocab)
    assert (tmp_path / "m" / "merges.txt").exists() == (method == "bpe")


def test_data_errors_exit_3(tmp_path, small_corpus):
    bad = tmp_path / "bad.txt"
    bad.write_bytes(b"ok\n\xff\n")
    assert run("train", "--method", "word", "--vocab-size", "10", "--input", bad, "--out", tmp_path / "m")[0] == 3
    assert run("train", "--method", "word", "--vocab-size", "10", "--input", tmp_path / "missing.txt",
               "--out", tmp_path / "m")[0] == 3
    lex = tmp_path / "lex.tsv"
    lex.write_text("evin\tev ##de\n", encoding="utf-8")
    assert run("train", "--method", "morph", "--vocab-size", "10", "--input", small_corpus,
               "--lexicon", lex, "--out", tmp_path / "m")[0] == 3
    assert run("encode", "--model", tmp_path / "nowhere", "--input", small_corpus)[0] == 3


def test_corrupt_model_exit_3(tmp_path, small_corpus):
    run("train", "--method", "bpe", "--vocab-size", "600", "--input", small_corpus, "--out", tmp_path / "m")
    (tmp_path / "m" / "merges.txt").unlink()
    assert run("encode", "--model", tmp_path / "m", "--input", small_corpus)[0] == 3


@pytest.fixture
def word_model(tmp_path):
    p = tmp_path / "c.txt"
    p.write_text("barış\n", encoding="utf-8")
    run("train", "--method", "word", "--vocab-size", "6", "--input", p, "--out", tmp_path / "word")
    return tmp_path / "word"


def test_encode_sample_word_row(tmp_path, word_model):
    p = tmp_path / "s.txt"
    p.write_text(SAMPLE_SENTENCE + "\n", encoding="utf-8")
    code, out = run("encode", "--model", word_model, "--input", p)
    assert code == 0 and out == "[CLS] [UNK] barış [UNK] [SEP]\n"
    code, ids = run("encode", "--model", word_model, "--input", p, "--ids")
    assert ids == "2 1 5 1 3\n"
    code, out = run("encode", "--model", word_model, "--input", p, "--no-wrap")
    assert out == "[UNK] barış [UNK]\n"


def test_encode_empty_input(tmp_path, word_model):
    p = tmp_path / "empty.txt"
    p.write_bytes(b"")
    assert run("encode", "--model", word_model, "--input", p) == (0, "")
    assert run("decode", "--model", word_model, "--input", p) == (0, "")


def test_encode_max_len(tmp_path, word_model):
    p = tmp_path / "s.txt"
    p.write_text("barış " * 20 + "\n", encoding="utf-8")
    code, out = run("encode", "--model", word_model, "--input", p, "--max-len", "5")
    assert out.split() == ["[CLS]", "barış", "barış", "barış", "[SEP]"]
    assert run("encode", "--model", word_model, "--input", p, "--max-len", "1")[0] == 2


@pytest.mark.parametrize("method", ["char", "bpe"])
def test_encode_decode_pipe(tmp_path, small_corpus, method):
    args = ["train", "--method", method, "--out", tmp_path / "m"]
    if method == "bpe":
        args += ["--input", small_corpus, "--vocab-size", "650"]
    run(*args)
    docs = make_corpus(40, seed=99) + ["Işık İzmir'de ŞİMDİ", "日本語 🙂"]
    src = tmp_path / "in.txt"
    src.write_text("\n".join(docs) + "\n", encoding="utf-8")
    for flag in ([], ["--ids"]):
        code, encoded = run("encode", "--model", tmp_path / "m", "--input", src, *flag)
        assert code == 0
        enc_file = tmp_path / "enc.txt"
        enc_file.write_text(encoded, encoding="utf-8")
        code, decoded = run("decode", "--model", tmp_path / "m", "--input", enc_file, *flag)
        assert code == 0
        if method == "char":
            expected = [normalize(d) for d in docs]
        else:
            expected = [" ".join(pre_tokenize(normalize(d))) for d in docs]
        assert decoded.splitlines() == expected


def test_decode_unknown_token_exit_3(tmp_path, word_model):
    p = tmp_path / "t.txt"
    p.write_text("barış yok\n", encoding="utf-8")
    assert run("decode", "--model", word_model, "--input", p)[0] == 3
    p.write_text("5 999\n", encoding="utf-8")
    assert run("decode", "--model", word_model, "--input", p, "--ids")[0] == 3


def test_stats_json(tmp_path, word_model):
    import json
    p = tmp_path / "s.txt"
    p.write_text("barış ve barış\n", encoding="utf-8")
    code, out = run("stats", "--model", word_model, "--input", p, "--json")
    d = json.loads(out)
    assert code == 0 and d["unk_count"] == 1 and d["token_count"] == 3
    code, out = run("stats", "--model", word_model, "--input", p, "--report", "unk")
    assert code == 0 and "unk_ratio" in out.splitlines()[0]


def test_compare_five_models(tmp_path, sample_models):
    from granul.modeldir import save_model
    dirs = []
    for i, m in enumerate(sample_models):
        save_model(m, tmp_path / f"m{i}")
        dirs.append(tmp_path / f"m{i}")
    code, out = run("compare", "--models", *dirs, "--sentence", SAMPLE_SENTENCE)
    lines = out.splitlines()
    assert code == 0 and len(lines) == 5
    assert lines[0].startswith("Character-level")
    assert lines[3].split(None, 1)[1] == '"[CLS]", "toplum", "##sal", "barış", "sağ", "##lanır", "[SEP]"'
    assert run("compare", "--models", *dirs, "--sentence", SAMPLE_SENTENCE)[1] == out


def test_budget_command():
    assert run("budget", "--total-params", "42690000", "--ratio", "0.2", "--hidden", "512") == (0, "16675 (16k)\n")
    assert run("budget", "--core-params", "34152400", "--ratio", "0.1", "--hidden", "512") == (0, "7411 (7k)\n")
    assert run("budget", "--total-params", "100", "--ratio", "1.0", "--hidden", "512")[0] == 2
    assert run("budget", "--ratio", "0.2", "--hidden", "512")[0] == 2


def test_energy_command():
    assert run("energy", "--gpus", "2", "--hours", "40", "--watts", "250") == (0, "20.00 kWh\n")
    code, out = run("energy", "--gpus", "2", "--hours", "40", "--factor", "0.5")
    assert out.splitlines() == ["20.00 kWh", "10.00 kg CO2eq", "$3.00 SCC"]
    assert run("energy", "--gpus", "-1", "--hours", "1")[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "granul", "budget", "--total-params", "42690000",
                           "--ratio", "0.2", "--hidden", "512"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "16675 (16k)\n"
    proc = subprocess.run([sys.executable, "-m", "granul"], capture_output=True, text=True)
    assert proc.returncode == 2 and proc.stdout == ""

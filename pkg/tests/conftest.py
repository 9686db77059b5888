import random
from pathlib import Path

import pytest

from granul import byte_model
from granul.core import Vocabulary, bytes_to_symbols
from granul.lexical import LexicalModel, SegmentationLexicon
from granul.subword import MergeTable, SubwordModel, bpe_from_merges, spell, wordpiece_alphabet

DATA = Path(__file__).parent / "data"

SAMPLE_SENTENCE = "Toplumsal barış sağlanır"
MORPH_SENTENCE = "İstanbullular güneşin tadını çıkarabildiler"

STEMS = ["ev", "göz", "kitap", "okul", "güneş", "yol", "barış", "toplum", "şehir", "çiçek", "ağaç", "kuş"]
SUFFIXES = ["", "ler", "lar", "de", "da", "in", "ın", "e", "a", "den", "sal", "im"]


def make_corpus(n_lines: int, seed: int = 0) -> list[str]:
    rng = random.Random(seed)
    lines = []
    for _ in range(n_lines):
        words = [rng.choice(STEMS) + rng.choice(SUFFIXES) for _ in range(rng.randint(1, 8))]
        if rng.random() < 0.3:
            words[0] = words[0].capitalize()
        lines.append(" ".join(words) + rng.choice(["", ".", ",", "!"]))
    return lines


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def small_corpus(tmp_path):
    path = tmp_path / "corpus.txt"
    path.write_text("\n".join(make_corpus(60, seed=1)) + "\n", encoding="utf-8")
    return path


@pytest.fixture(scope="session")
def morph_lexicon_file(tmp_path_factory):
    """Segmentations for every stem+suffix combination of the fixture corpus."""
    path = tmp_path_factory.mktemp("lex") / "lexicon.tsv"
    rows = []
    for stem in STEMS:
        for suf in SUFFIXES:
            if suf:
                rows.append(f"{stem}{suf}\t{stem} ##{suf}")
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")
    return path


def chain_merges(pieces_per_word):
    """Merges which build each given piece left to right, and nothing else."""
    merges = []
    for pieces in pieces_per_word:
        for i, piece in enumerate(pieces):
            syms = spell(bytes_to_symbols(piece.encode("utf-8")))
            if i:
                syms[0] = "##" + syms[0]
            acc = syms[0]
            for s in syms[1:]:
                pair = (acc, s)
                if pair not in merges:
                    merges.append(pair)
                acc = acc + s[2:]
    return MergeTable(merges)


@pytest.fixture(scope="session")
def sample_models():
    """Five models whose vocabularies hold the tokens shown for each method in the comparison table."""
    char = byte_model()
    bpe = bpe_from_merges(chain_merges([["toplumsal"], ["barış"], ["sağ", "lanır"]]))
    words = ["toplumsal", "barış", "sağlanır"]
    alphabet = wordpiece_alphabet(words)
    wp = SubwordModel(
        "wordpiece",
        Vocabulary.from_body(alphabet + ["toplumsal", "barış", "sağlan", "##ır"]),
        None,
        frozenset(alphabet),
    )
    lexicon = SegmentationLexicon({"toplumsal": ["toplum", "##sal"], "sağlanır": ["sağ", "##lanır"]})
    morph = LexicalModel("morph", Vocabulary.from_body(["toplum", "##sal", "barış", "sağ", "##lanır"]), lexicon)
    word = LexicalModel("word", Vocabulary.from_body(["barış"]))
    return [char, bpe, wp, morph, word]


_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ACCEPTANCE[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, outcome in _ACCEPTANCE.items():
        name = nodeid.split("::")[-1]
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")

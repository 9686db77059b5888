"""
Byte, word and morphological tokenizers
=======================================

The byte model needs no training. The word model keeps the most frequent
words. The morphological model counts stems and suffixes taken from a
segmentation lexicon, so frequent suffixes earn vocabulary slots of their own.
"""

import random
import tempfile
from pathlib import Path

from granul import (
    byte_model,
    count_words,
    encode_bytes,
    encode_lexical,
    lexicon_load,
    train_morph,
    train_wordlevel,
    unk_ratio,
)

text = "güneşin tadı"
enc = encode_bytes(text)
print(len(text), "characters,", len(enc), "byte tokens:", list(enc.ids))
print(len(byte_model().vocab), "entries in the byte vocabulary")

stems = ["ev", "yol", "kuş", "güneş", "göz"]
suffixes = ["de", "da", "in", "ler", "lar", "e"]
lexicon_rows = "".join(f"{s}{x}\t{s} ##{x}\n" for s in stems for x in suffixes)
tmp = Path(tempfile.mkdtemp()) / "lexicon.tsv"
tmp.write_text(lexicon_rows, encoding="utf-8")
lexicon = lexicon_load(tmp)

# every stem takes every suffix, so whole words are spread thin
rng = random.Random(3)
docs = [" ".join(rng.choice(stems) + rng.choice(suffixes) for _ in range(6)) for _ in range(200)]
counts = count_words(docs)
word = train_wordlevel(counts, 20)
morph = train_morph(counts, lexicon, 20)
print("word vocab: ", word.vocab.tokens[5:])
print("morph vocab:", morph.vocab.tokens[5:])

for w in ["evler", "güneşin"]:
    print(f"{w:10s} word={encode_lexical(word, w)}  morph={encode_lexical(morph, w)}")

print("unk ratio  word=%.3f  morph=%.3f" % (unk_ratio(word, docs).unk_ratio, unk_ratio(morph, docs).unk_ratio))

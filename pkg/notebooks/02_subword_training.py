"""
Training BPE and WordPiece
==========================

Both trainers start from single symbols and merge adjacent pairs. BPE picks
the most frequent pair, WordPiece the pair with the highest
count(ab) / (count(a) count(b)). On this toy corpus they disagree on the
first merge.
"""

from granul import WordCounts, count_words, encode_subword, train_bpe, train_wordpiece
from granul.core import display_byte_token
from granul.subword import BPE_MIN_VOCAB


def show(tokens):
    # BPE symbols stand for bytes; print them as text
    return [display_byte_token(t) for t in tokens]

counts = WordCounts({"ab": 2, "cd": 3, "ad": 1})
bpe = train_bpe(counts, BPE_MIN_VOCAB + 1)
wp = train_wordpiece(counts, 10)
print("BPE first merge:      ", bpe.merges.pairs[0])
print("WordPiece first merge:", wp.merges.pairs[0])

# a slightly larger corpus of Turkish-looking words
lines = [
    "evlerde kitaplar okunur",
    "okulda kitaplar var",
    "evde kuşlar ötüyor",
    "kuşlar ağaçlarda",
] * 20
counts = count_words(lines)
bpe = train_bpe(counts, BPE_MIN_VOCAB + 40)
wp = train_wordpiece(counts, 80)
print(len(bpe.merges), "BPE merges,", len(bpe.vocab), "tokens")
for word in ["kitaplar", "ağaçlarda", "evlerimizde"]:
    print(f"{word:12s} bpe={show(encode_subword(bpe, word))}  wordpiece={encode_subword(wp, word)}")

# BPE works on UTF-8 bytes, so it never needs [UNK]; WordPiece gives up on unseen letters
print(show(encode_subword(bpe, "qwx")), encode_subword(wp, "qwx"))

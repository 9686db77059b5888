"""
Comparing tokenizers on one corpus
==================================

Train every method on the same synthetic corpus and compare unknown-token
ratio, fertility (tokens per word) and sequence length.
"""

import random

from granul import byte_model, corpus_stats, count_words, train_bpe, train_wordlevel, train_wordpiece
from granul.analytics import format_stats

rng = random.Random(0)
stems = ["ev", "göz", "kitap", "okul", "güneş", "yol", "barış", "şehir"]
suffixes = ["", "ler", "lar", "de", "da", "in", "ın", "e", "den"]
docs = [" ".join(rng.choice(stems) + rng.choice(suffixes) for _ in range(rng.randint(3, 9))) for _ in range(400)]
train, held_out = docs[:300], docs[300:]
counts = count_words(train)

models = [
    byte_model(),
    train_bpe(counts, 600),
    train_wordpiece(counts, 100),
    train_wordlevel(counts, 40),
]
print(format_stats([corpus_stats(m, held_out) for m in models], "all"))

"""
Turkish-aware normalization
===========================

Dotted and dotless i are separate letters in Turkish, so plain ``str.lower``
gets "ISPARTA" wrong. The normalizer lowercases with Turkish rules, then
composes to NFC.
"""

from granul import normalize, pre_tokenize

for word in ["ISPARTA", "İstanbul", "IŞIK", "Irmak"]:
    print(f"{word:10s} str.lower -> {word.lower():10s} normalize -> {normalize(word)}")

# a decomposed s + combining cedilla comes out as the single precomposed letter
decomposed = "ş"
print(len(decomposed), "->", len(normalize(decomposed)))

# pre-tokenization splits on whitespace and isolates punctuation runs
print(pre_tokenize(normalize("Evet, yarın İzmir'e gidiyoruz!..")))

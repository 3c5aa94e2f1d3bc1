"""Text normalization, tokenization, and the numbered cleanup strategies.

Strategy 1 (the default everywhere) only rewrites URLs/mentions and
lowercases; emoji, stopwords and punctuation survive as their own tokens.
Strategies 3-9 remove digits/punctuation/stopwords in all combinations.
"""

from tweetsift.preprocess import (
    length_percentiles,
    normalize,
    strategy_config,
    preprocess,
    tokenize,
)

raw = "Feeling hopeless?? Call 1-800-273-8255 NOW — I did, and I'm still here 🙏 https://t.co/xyz @friend"
print("raw:       ", raw)
print("normalized:", normalize(raw))
print("tokens:    ", tokenize(normalize(raw)))
print()

for number in (1, 3, 4, 5, 9):
    tokens = preprocess(raw, strategy_config(number))
    print(f"strategy {number}: {tokens}")
print()

# Corpus length statistics drive the truncation limit (80 tokens by default).
corpus = [tokenize(normalize(text)) for text in [
    "short one",
    "a slightly longer posting with more words in it than the first",
    raw,
    "medium length text with roughly ten tokens or so",
]]
stats = length_percentiles(corpus, [0.95, 0.99])
print(f"mean length {stats['mean']:.1f}, p95 {stats[0.95]}, p99 {stats[0.99]}")

"""Text normalization and tokenization for short social-media postings.

The normalization pipeline substitutes URLs with the marker ``http`` and
user mentions with ``@user``, then lowercases. Tokenization keeps emoji,
stopwords and punctuation, splitting each punctuation character and each
emoji into its own token; alphanumeric runs with interior apostrophes or
hyphens (don't, 1-800-273-8255) stay whole.
"""

from __future__ import annotations

import bisect
import math
import re
from dataclasses import dataclass, field
from importlib import resources

# URL before mention before lowercase, so a mixed-case URL collapses to the
# literal marker instead of being case-mangled first.
_URL_RE = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)
_MENTION_RE = re.compile(r"@\w+")

URL_MARKER = "http"
MENTION_MARKER = "@user"

# Extended_Pictographic codepoints (emoji bases). Ranges are merged across
# the reserved gaps the property also covers, so the table stays compact.
_PICTOGRAPHIC_RANGES = (
    (0x00A9, 0x00A9), (0x00AE, 0x00AE), (0x203C, 0x203C), (0x2049, 0x2049),
    (0x2122, 0x2122), (0x2139, 0x2139), (0x2194, 0x2199), (0x21A9, 0x21AA),
    (0x231A, 0x231B), (0x2328, 0x2328), (0x2388, 0x2388), (0x23CF, 0x23CF),
    (0x23E9, 0x23F3), (0x23F8, 0x23FA), (0x24C2, 0x24C2), (0x25AA, 0x25AB),
    (0x25B6, 0x25B6), (0x25C0, 0x25C0), (0x25FB, 0x25FE), (0x2600, 0x2605),
    (0x2607, 0x2612), (0x2614, 0x2685), (0x2690, 0x2705), (0x2708, 0x2712),
    (0x2714, 0x2714), (0x2716, 0x2716), (0x271D, 0x271D), (0x2721, 0x2721),
    (0x2728, 0x2728), (0x2733, 0x2734), (0x2744, 0x2744), (0x2747, 0x2747),
    (0x274C, 0x274C), (0x274E, 0x274E), (0x2753, 0x2755), (0x2757, 0x2757),
    (0x2763, 0x2767), (0x2795, 0x2797), (0x27A1, 0x27A1), (0x27B0, 0x27B0),
    (0x27BF, 0x27BF), (0x2934, 0x2935), (0x2B05, 0x2B07), (0x2B1B, 0x2B1C),
    (0x2B50, 0x2B50), (0x2B55, 0x2B55), (0x3030, 0x3030), (0x303D, 0x303D),
    (0x3297, 0x3297), (0x3299, 0x3299), (0x1F000, 0x1F0FF), (0x1F10D, 0x1F10F),
    (0x1F12F, 0x1F12F), (0x1F16C, 0x1F171), (0x1F17E, 0x1F17F), (0x1F18E, 0x1F18E),
    (0x1F191, 0x1F19A), (0x1F1AD, 0x1F1E5), (0x1F201, 0x1F20F), (0x1F21A, 0x1F21A),
    (0x1F22F, 0x1F22F), (0x1F232, 0x1F23A), (0x1F23C, 0x1F23F), (0x1F249, 0x1F3FA),
    (0x1F400, 0x1F64F), (0x1F680, 0x1F6FF), (0x1F700, 0x1F7FF), (0x1F80C, 0x1F8FF),
    (0x1F90C, 0x1F93A), (0x1F93C, 0x1F945), (0x1F947, 0x1FAFF), (0x1FC00, 0x1FFFD),
)

_EMOJI_MODIFIERS = (0x1F3FB, 0x1F3FF)  # skin tones
_VARIATION_SELECTOR = 0xFE0F
_ZWJ = 0x200D

_WORD_RE = re.compile(r"\w+(?:['’-]\w+)*")


_RANGE_STARTS = [lo for lo, _ in _PICTOGRAPHIC_RANGES]


def is_pictographic(ch: str) -> bool:
    cp = ord(ch)
    idx = bisect.bisect_right(_RANGE_STARTS, cp) - 1
    return idx >= 0 and cp <= _PICTOGRAPHIC_RANGES[idx][1]


def is_emoji_token(token: str) -> bool:
    return bool(token) and is_pictographic(token[0])


def normalize(text: str) -> str:
    """Replace URLs and mentions with marker tokens and lowercase.

    Idempotent: markers survive a second pass unchanged.
    """
    text = _URL_RE.sub(URL_MARKER, text)
    text = _MENTION_RE.sub(MENTION_MARKER, text)
    return text.lower()


def _emoji_span(text: str, start: int) -> int:
    """End index of the emoji sequence starting at ``start``."""
    i = start + 1
    n = len(text)
    while i < n:
        cp = ord(text[i])
        if cp == _VARIATION_SELECTOR or _EMOJI_MODIFIERS[0] <= cp <= _EMOJI_MODIFIERS[1]:
            i += 1
        elif cp == _ZWJ and i + 1 < n and is_pictographic(text[i + 1]):
            i += 2
        else:
            break
    return i


def tokenize(text: str) -> list[str]:
    """Split normalized text into tokens.

    Whitespace separates chunks; within a chunk, word runs (with interior
    apostrophes/hyphens), the ``@user`` marker, emoji sequences, and single
    punctuation characters each become one token.
    """
    tokens: list[str] = []
    for chunk in text.split():
        i = 0
        n = len(chunk)
        while i < n:
            if chunk.startswith(MENTION_MARKER, i):
                tokens.append(MENTION_MARKER)
                i += len(MENTION_MARKER)
                continue
            m = _WORD_RE.match(chunk, i)
            if m:
                tokens.append(m.group())
                i = m.end()
                continue
            if is_pictographic(chunk[i]):
                end = _emoji_span(chunk, i)
                tokens.append(chunk[i:end])
                i = end
                continue
            tokens.append(chunk[i])
            i += 1
    return tokens


def _load_default_stopwords() -> frozenset[str]:
    data = resources.files("tweetsift.data").joinpath("stopwords_en.txt").read_text("utf-8")
    return frozenset(line.strip() for line in data.splitlines() if line.strip())


_DEFAULT_STOPWORDS: frozenset[str] | None = None


def default_stopwords() -> frozenset[str]:
    global _DEFAULT_STOPWORDS
    if _DEFAULT_STOPWORDS is None:
        _DEFAULT_STOPWORDS = _load_default_stopwords()
    return _DEFAULT_STOPWORDS


@dataclass(frozen=True)
class PreprocessConfig:
    """Switches for the optional cleanup steps applied after tokenization.

    All flags off is the basic strategy used for the main pipeline; the
    other strategies exist for ablations.
    """

    remove_digits: bool = False
    remove_punctuation: bool = False
    remove_stopwords: bool = False
    lemma_table: dict[str, str] | None = None
    max_tokens: int = 80
    stopwords: frozenset[str] = field(default_factory=default_stopwords)

    def __post_init__(self):
        if self.max_tokens < 1:
            raise ValueError("max_tokens must be >= 1")


# Numbered cleanup strategies: 1 = basic, 2 = lemmatization (needs a lemma
# table), 3-9 = permutations of digit/punctuation/stopword removal.
_STRATEGY_FLAGS = {
    1: (False, False, False),
    3: (True, False, False),
    4: (False, True, False),
    5: (False, False, True),
    6: (True, True, False),
    7: (True, False, True),
    8: (False, True, True),
    9: (True, True, True),
}


def strategy_config(number: int, lemma_table: dict[str, str] | None = None,
                    max_tokens: int = 80) -> PreprocessConfig:
    if number == 2:
        if lemma_table is None:
            raise ValueError("strategy 2 requires a lemma table")
        return PreprocessConfig(lemma_table=lemma_table, max_tokens=max_tokens)
    try:
        digits, punct, stop = _STRATEGY_FLAGS[number]
    except KeyError:
        raise ValueError(f"unknown preprocessing strategy {number}") from None
    return PreprocessConfig(remove_digits=digits, remove_punctuation=punct,
                            remove_stopwords=stop, lemma_table=lemma_table,
                            max_tokens=max_tokens)


_ALL_DIGITS_RE = re.compile(r"\d+")


def _is_all_digits(token: str) -> bool:
    return _ALL_DIGITS_RE.fullmatch(token) is not None


def _is_pure_punctuation(token: str) -> bool:
    if is_emoji_token(token):
        return False
    return not any(ch.isalnum() or ch == "_" for ch in token)


def apply_strategy(tokens: list[str], config: PreprocessConfig) -> list[str]:
    """Drop/replace tokens per config; order preserved.

    Digit removal drops only all-digit tokens, so mixed tokens such as
    phone numbers with hyphens survive.
    """
    out = []
    for tok in tokens:
        if config.remove_digits and _is_all_digits(tok):
            continue
        if config.remove_punctuation and _is_pure_punctuation(tok):
            continue
        if config.remove_stopwords and tok in config.stopwords:
            continue
        if config.lemma_table is not None:
            tok = config.lemma_table.get(tok, tok)
        out.append(tok)
    return out


def truncate(tokens: list[str], max_tokens: int) -> list[str]:
    if max_tokens < 1:
        raise ValueError("max_tokens must be >= 1")
    return tokens[:max_tokens]


def preprocess(text: str, config: PreprocessConfig | None = None) -> list[str]:
    """normalize -> tokenize -> apply_strategy -> truncate in one call."""
    config = config or PreprocessConfig()
    tokens = apply_strategy(tokenize(normalize(text)), config)
    return truncate(tokens, config.max_tokens)


def length_percentiles(corpus: list[list[str]], percentiles: list[float]) -> dict:
    """Nearest-rank percentiles of token counts, plus the mean.

    Returns ``{"mean": m, p: length, ...}`` with one entry per requested
    percentile fraction.
    """
    if not corpus:
        raise ValueError("corpus is empty")
    lengths = sorted(len(seq) for seq in corpus)
    n = len(lengths)
    result: dict = {"mean": sum(lengths) / n}
    for p in percentiles:
        if not 0 < p <= 1:
            raise ValueError(f"percentile must be in (0, 1], got {p}")
        rank = math.ceil(p * n)
        result[p] = lengths[rank - 1]
    return result


def load_lemma_table(path) -> dict[str, str]:
    """Read a token<TAB>lemma file, one pair per line."""
    table = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0] or not parts[1]:
                raise ValueError(f"{path}:{lineno}: expected 'token<TAB>lemma'")
            table[parts[0]] = parts[1]
    return table

"""N-gram vocabularies and smoothed TF-IDF vectors.

The weight of term t in document d is ``tf(t, d) * ln((N + 1) / (df + 1))``
with raw in-document counts, corpus size N and document frequency df. The
+1 smoothing means a term present in every document weighs exactly zero;
there is no +1 inside or after the logarithm and no length normalization.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

FORMAT_NAME = "tweetsift-tfidf"
FORMAT_VERSION = 1


@dataclass
class SparseVector:
    """Strictly increasing column indices with nonzero values."""

    indices: np.ndarray
    values: np.ndarray

    @property
    def pairs(self) -> list[tuple[int, float]]:
        return list(zip(self.indices.tolist(), self.values.tolist()))

    def __len__(self):
        return len(self.indices)


def _ngrams(tokens: list[str], ngram_max: int):
    yield from tokens
    if ngram_max >= 2:
        for i in range(len(tokens) - 1):
            yield tokens[i] + " " + tokens[i + 1]


@dataclass
class TfIdfModel:
    vocab: dict[str, int]
    df: dict[str, int]
    n_docs: int
    ngram_max: int = 1
    top_n: int | None = None
    _idf: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        idf = np.zeros(len(self.vocab))
        for term, col in self.vocab.items():
            idf[col] = math.log((self.n_docs + 1) / (self.df[term] + 1))
        self._idf = idf

    @property
    def n_features(self) -> int:
        return len(self.vocab)

    def vector(self, tokens: list[str]) -> SparseVector:
        return tfidf_vector(tokens, self)

    def to_dict(self) -> dict:
        return {
            "format": FORMAT_NAME,
            "version": FORMAT_VERSION,
            "ngram_max": self.ngram_max,
            "top_n": self.top_n,
            "n_docs": self.n_docs,
            "vocab": self.vocab,
            "df": self.df,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TfIdfModel":
        if data.get("format") != FORMAT_NAME:
            raise ValueError(f"not a {FORMAT_NAME} payload")
        if data.get("version") != FORMAT_VERSION:
            raise ValueError(f"unsupported format version {data.get('version')}")
        return cls(vocab=data["vocab"], df=data["df"], n_docs=data["n_docs"],
                   ngram_max=data["ngram_max"], top_n=data["top_n"])

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, ensure_ascii=False)

    @classmethod
    def load(cls, path) -> "TfIdfModel":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def build_vocab(corpus: list[list[str]], ngram_max: int = 1,
                top_n: int | None = None) -> TfIdfModel:
    """Collect n-grams of order <= ngram_max with document frequencies.

    With ``top_n`` set, only the top_n n-grams by total term frequency are
    retained (ties broken lexicographically). Column indices are assigned
    in lexicographic term order.
    """
    if not corpus:
        raise ValueError("corpus is empty")
    if ngram_max not in (1, 2):
        raise ValueError(f"ngram_max must be 1 or 2, got {ngram_max}")
    if top_n is not None and top_n < 1:
        raise ValueError("top_n must be positive")

    tf: Counter = Counter()
    df: Counter = Counter()
    for tokens in corpus:
        grams = list(_ngrams(tokens, ngram_max))
        tf.update(grams)
        df.update(set(grams))

    terms = sorted(tf, key=lambda t: (-tf[t], t))
    if top_n is not None:
        terms = terms[:top_n]
    vocab = {term: col for col, term in enumerate(sorted(terms))}
    return TfIdfModel(vocab=vocab, df={t: df[t] for t in vocab},
                      n_docs=len(corpus), ngram_max=ngram_max, top_n=top_n)


def tfidf_vector(tokens: list[str], model: TfIdfModel) -> SparseVector:
    """Weight the document's in-vocabulary n-grams; exact zeros are dropped."""
    counts: Counter = Counter(g for g in _ngrams(tokens, model.ngram_max)
                              if g in model.vocab)
    cols = []
    vals = []
    for term, count in counts.items():
        col = model.vocab[term]
        weight = count * model._idf[col]
        if weight != 0.0:
            cols.append(col)
            vals.append(weight)
    order = np.argsort(np.asarray(cols, dtype=np.int64)) if cols else []
    indices = np.asarray(cols, dtype=np.int64)[order] if cols else np.empty(0, dtype=np.int64)
    values = np.asarray(vals, dtype=np.float64)[order] if cols else np.empty(0, dtype=np.float64)
    return SparseVector(indices=indices, values=values)


def vectorize_corpus(corpus: list[list[str]], model: TfIdfModel) -> list[SparseVector]:
    return [tfidf_vector(tokens, model) for tokens in corpus]

"""Classifier training and application: majority baseline, one-vs-one
linear SVM over TF-IDF features, hyperparameter grid search, stratified
cross-validation, and an adapter for externally produced prediction files.
"""

from __future__ import annotations

import csv
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from collections import Counter
from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from . import eval as evalmod
from .corpus import LabeledSet, _largest_remainder_counts
from .features import SparseVector, TfIdfModel, build_vocab, vectorize_corpus
from .solver import LinearModel, train_binary_svm

log = logging.getLogger(__name__)

MODEL_FORMAT = "tweetsift-ovo-svm"
MODEL_FORMAT_VERSION = 1


@dataclass(frozen=True)
class SvmConfig:
    """One grid point: regularization, class weighting, feature settings."""

    C: float = 1.0
    class_weight: str = "balanced"  # balanced | none
    ngram_max: int = 2
    top_n: int | None = 10000

    def __post_init__(self):
        if self.C <= 0:
            raise ValueError("C must be positive")
        if self.class_weight not in ("balanced", "none"):
            raise ValueError(f"class_weight must be 'balanced' or 'none', got {self.class_weight!r}")


@dataclass
class MajorityModel:
    """Constant classifier returning the most frequent training label."""

    label: str
    classes: tuple[str, ...]

    def predict(self, tokens) -> str:
        return self.label

    def predict_many(self, docs) -> list[str]:
        return [self.label] * len(docs)


def train_majority(labels, classes=None) -> MajorityModel:
    labels = list(labels)
    if not labels:
        raise ValueError("no labels")
    if classes is None:
        classes = tuple(sorted(set(labels)))
    counts = Counter(labels)
    best = max(classes, key=lambda c: (counts.get(c, 0), -classes.index(c)))
    return MajorityModel(label=best, classes=tuple(classes))


def balanced_weights(labels, classes=None) -> dict[str, float]:
    """weight(c) = n / (k * n_c), inversely proportional to class frequency."""
    labels = list(labels)
    if not labels:
        raise ValueError("no labels")
    counts = Counter(labels)
    if classes is None:
        classes = sorted(counts)
    n = len(labels)
    k = len(classes)
    weights = {}
    for c in classes:
        if counts.get(c, 0) == 0:
            raise ValueError(f"class {c!r} has zero count")
        weights[c] = n / (k * counts[c])
    return weights


@dataclass
class OvOModel:
    """One binary model per unordered class pair, combined by voting."""

    classes: tuple[str, ...]
    binaries: dict[tuple[str, str], LinearModel]
    feature_model: TfIdfModel
    config: SvmConfig

    def __post_init__(self):
        k = len(self.classes)
        if len(self.binaries) != k * (k - 1) // 2:
            raise ValueError("expected one binary model per class pair")

    def decision_values(self, x: SparseVector) -> dict[tuple[str, str], float]:
        return {pair: m.decision(x) for pair, m in self.binaries.items()}

    def predict_vector(self, x: SparseVector) -> str:
        votes = {c: 0 for c in self.classes}
        scores = {c: 0.0 for c in self.classes}
        for (a, b), model in self.binaries.items():
            d = model.decision(x)
            if d > 0:
                votes[a] += 1
            else:
                votes[b] += 1
            scores[a] += d
            scores[b] -= d
        top = max(votes.values())
        tied = [c for c in self.classes if votes[c] == top]
        if len(tied) == 1:
            return tied[0]
        # Tie: larger summed signed decision value, then class order.
        best_score = max(scores[c] for c in tied)
        for c in tied:
            if scores[c] == best_score:
                return c
        raise AssertionError("unreachable")

    def predict(self, tokens) -> str:
        return self.predict_vector(self.feature_model.vector(tokens))

    def predict_many(self, docs) -> list[str]:
        return [self.predict(tokens) for tokens in docs]


def train_ovo_from_vectors(vectors: list[SparseVector], labels: list[str],
                           config: SvmConfig, classes: tuple[str, ...],
                           n_features: int, seed: int = 0,
                           tol: float = 1e-3, max_epochs: int = 1000) -> dict:
    """Pairwise binary models over pre-built vectors; positive side of
    pair (a, b) is a. Balanced weights are recomputed per pair sub-sample."""
    by_class: dict[str, list[int]] = {c: [] for c in classes}
    for i, label in enumerate(labels):
        by_class[label].append(i)

    binaries = {}
    for pair_index, (a, b) in enumerate(combinations(classes, 2)):
        if not by_class[a] or not by_class[b]:
            raise ValueError(f"class pair ({a}, {b}) is missing examples")
        ids = by_class[a] + by_class[b]
        X = [vectors[i] for i in ids]
        y = np.array([1.0 if labels[i] == a else -1.0 for i in ids])
        if config.class_weight == "balanced":
            pair_weights = balanced_weights([labels[i] for i in ids], classes=[a, b])
            weights = {1: pair_weights[a], -1: pair_weights[b]}
        else:
            weights = None
        binaries[(a, b)] = train_binary_svm(
            X, y, C=config.C, class_weights=weights,
            n_features=n_features,
            tol=tol, max_epochs=max_epochs, seed=seed + pair_index,
            positive_class=a, negative_class=b,
        )
    return binaries


def train_ovo(corpus: list[list[str]], labels: list[str], config: SvmConfig,
              classes: tuple[str, ...] | None = None, seed: int = 0,
              tol: float = 1e-3, max_epochs: int = 1000) -> OvOModel:
    """Train one SVM per class pair on the pair's examples only."""
    if len(corpus) != len(labels):
        raise ValueError("corpus and labels length mismatch")
    if classes is None:
        classes = tuple(sorted(set(labels)))
    present = set(labels)
    if len(present) < 2:
        raise ValueError("need at least two classes present")
    missing = present - set(classes)
    if missing:
        raise ValueError(f"labels outside declared classes: {sorted(missing)}")

    feature_model = build_vocab(corpus, ngram_max=config.ngram_max, top_n=config.top_n)
    vectors = vectorize_corpus(corpus, feature_model)
    binaries = train_ovo_from_vectors(vectors, labels, config, classes,
                                      feature_model.n_features, seed=seed,
                                      tol=tol, max_epochs=max_epochs)
    return OvOModel(classes=classes, binaries=binaries,
                    feature_model=feature_model, config=config)


def save_model(path, model: OvOModel) -> None:
    payload = {
        "format": MODEL_FORMAT,
        "version": MODEL_FORMAT_VERSION,
        "classes": list(model.classes),
        "config": {
            "C": model.config.C,
            "class_weight": model.config.class_weight,
            "ngram_max": model.config.ngram_max,
            "top_n": model.config.top_n,
        },
        "features": model.feature_model.to_dict(),
        "binaries": [
            {
                "positive": a,
                "negative": b,
                "bias": m.bias,
                "weights": m.weights.tolist(),
            }
            for (a, b), m in sorted(model.binaries.items())
        ],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)


def load_model(path) -> OvOModel:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("format") != MODEL_FORMAT:
        raise ValueError(f"not a {MODEL_FORMAT} file")
    if payload.get("version") != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model version {payload.get('version')}")
    feature_model = TfIdfModel.from_dict(payload["features"])
    config = SvmConfig(**payload["config"])
    binaries = {}
    for entry in payload["binaries"]:
        binaries[(entry["positive"], entry["negative"])] = LinearModel(
            weights=np.asarray(entry["weights"], dtype=np.float64),
            bias=entry["bias"],
            positive_class=entry["positive"],
            negative_class=entry["negative"],
        )
    return OvOModel(classes=tuple(payload["classes"]), binaries=binaries,
                    feature_model=feature_model, config=config)


DEFAULT_GRID_C = (0.01, 0.05, 0.1, 0.2, 0.46, 0.5, 0.82, 1.0)


def default_grid() -> list[SvmConfig]:
    """ngram x feature-cap x C x class-weight lattice; linear kernel only."""
    grid = []
    for ngram_max, top_n, C, cw in product((1, 2), (10000, 25000, 50000, None),
                                           DEFAULT_GRID_C, ("balanced", "none")):
        grid.append(SvmConfig(C=C, class_weight=cw, ngram_max=ngram_max, top_n=top_n))
    return grid


@dataclass
class GridResult:
    config: SvmConfig
    macro_f1: float | None
    report: "evalmod.MetricsReport | None" = None
    error: str | None = None


def _evaluate_config(args) -> GridResult:
    config, train_corpus, train_labels, val_corpus, val_labels, classes, seed = args
    try:
        model = train_ovo(train_corpus, train_labels, config, classes=classes, seed=seed)
        predictions = model.predict_many(val_corpus)
        report = evalmod.evaluate(val_labels, predictions, classes=classes,
                                  metadata={"model": "tfidf-svm", "kernel": "linear",
                                            "config": repr(config)})
        return GridResult(config=config, macro_f1=report.macro_f1, report=report)
    except Exception as exc:  # keep searching past one bad config
        log.warning("grid config %r failed: %s", config, exc)
        return GridResult(config=config, macro_f1=None, error=str(exc))


def grid_search(train_corpus, train_labels, val_corpus, val_labels,
                grid: list[SvmConfig] | None = None,
                classes: tuple[str, ...] | None = None,
                seed: int = 0, workers: int = 1) -> list[GridResult]:
    """Train each config, rank by validation macro-F1 (descending).

    Failed configs are kept at the end with their error message. Results
    are ordered deterministically regardless of worker count.
    """
    if grid is None:
        grid = default_grid()
    if not grid:
        raise ValueError("empty grid")
    if classes is None:
        classes = tuple(sorted(set(train_labels)))
    jobs = [(config, train_corpus, train_labels, val_corpus, val_labels, classes, seed)
            for config in grid]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_evaluate_config, jobs))
    else:
        results = [_evaluate_config(job) for job in jobs]
    order = sorted(range(len(results)),
                   key=lambda i: (results[i].macro_f1 is None,
                                  -(results[i].macro_f1 or 0.0), i))
    return [results[i] for i in order]


def stratified_folds(labels: list[str], k: int, seed: int = 0) -> list[list[int]]:
    """Index folds with per-class proportions preserved; deterministic."""
    by_class: dict[str, list[int]] = {}
    for i, label in enumerate(labels):
        by_class.setdefault(label, []).append(i)
    for cls, members in by_class.items():
        if len(members) < k:
            raise ValueError(f"class {cls!r} has {len(members)} members; need >= {k}")
    import random as _random
    rng = _random.Random(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    for cls in sorted(by_class):
        members = by_class[cls][:]
        rng.shuffle(members)
        counts = _largest_remainder_counts(len(members), tuple(1.0 / k for _ in range(k)))
        pos = 0
        for f, count in enumerate(counts):
            folds[f].extend(members[pos:pos + count])
            pos += count
    return folds


def cross_validate(corpus: list[list[str]], labels: list[str], config: SvmConfig,
                   k: int = 5, classes: tuple[str, ...] | None = None,
                   seed: int = 0) -> tuple[list["evalmod.MetricsReport"], "evalmod.MetricsReport"]:
    """Hold each stratified fold out once; returns per-fold reports + mean."""
    if classes is None:
        classes = tuple(sorted(set(labels)))
    if len(classes) < 2:
        raise ValueError("need at least two classes")
    folds = stratified_folds(labels, k, seed=seed)
    reports = []
    for f, holdout in enumerate(folds):
        holdout_set = set(holdout)
        train_idx = [i for i in range(len(labels)) if i not in holdout_set]
        model = train_ovo([corpus[i] for i in train_idx],
                          [labels[i] for i in train_idx],
                          config, classes=classes, seed=seed)
        predictions = [model.predict(corpus[i]) for i in holdout]
        truth = [labels[i] for i in holdout]
        reports.append(evalmod.evaluate(truth, predictions, classes=classes,
                                        metadata={"fold": f, "k": k, "seed": seed}))
    mean = evalmod.mean_report(reports, metadata={"k": k, "seed": seed, "mean_of": k})
    return reports, mean


@dataclass
class PredictionSet:
    """Model predictions keyed by tweet id, at one taxonomy level."""

    name: str
    labels: dict[str, str]
    level: int

    def __len__(self):
        return len(self.labels)


def load_external_predictions(path, level: int) -> PredictionSet:
    """Read a CSV of ``id,label`` rows produced by an external model."""
    from .taxonomy import classes_for_level

    allowed = set(classes_for_level(level))
    labels: dict[str, str] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames[:2]] != ["id", "label"]:
            raise ValueError(f"{path}: expected CSV header 'id,label'")
        for rownum, row in enumerate(reader, 2):
            tweet_id = row["id"]
            label = row["label"]
            if label not in allowed:
                raise ValueError(f"{path}: row {rownum}: unknown label {label!r} "
                                 f"for level {level}")
            if tweet_id in labels:
                raise ValueError(f"{path}: row {rownum}: duplicate id {tweet_id!r}")
            labels[tweet_id] = label
    return PredictionSet(name=str(path), labels=labels, level=level)


def write_predictions(path, predictions: dict[str, str]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "label"])
        for tweet_id, label in predictions.items():
            writer.writerow([tweet_id, label])


def predict_labeled_set(model, labeled: LabeledSet, preprocess_fn,
                        task: int | None = None) -> dict[str, str]:
    """Predict every tweet in a labeled set; labels stay at model level."""
    out = {}
    for entry in labeled:
        out[entry.tweet.id] = model.predict(preprocess_fn(entry.tweet.text))
    return out

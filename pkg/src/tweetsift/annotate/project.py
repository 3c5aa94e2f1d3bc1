"""Round-based labeling workflow over a tweet pool.

A round samples tweets from the pool by one of three strategies
(per-category keywords, model predictions with hidden labels, or uniformly
at random), assigns coders, and tracks their progress. Agreement
statistics and labeled-set export read from the shared label store.
"""

from __future__ import annotations

import json
import logging
import random
import threading
from dataclasses import dataclass
from pathlib import Path

from .. import taxonomy as tax
from ..corpus import FilterConfig, LabeledExample, LabeledSet, Tweet, matches_keywords
from ..eval import KappaResult, cohens_kappa
from .rules import DimensionAnnotation, adjudication_hints, derive_category
from .store import LabelRecord, LabelStore

log = logging.getLogger(__name__)

STRATEGIES = ("keyword_seeded", "model_seeded", "random")


@dataclass
class Round:
    id: str
    strategy: str
    targets: dict[str, int] | int
    tweet_ids: list[str]
    coders: list[str]
    seed: int
    status: str = "open"

    def to_dict(self) -> dict:
        return {
            "id": self.id, "strategy": self.strategy, "targets": self.targets,
            "tweet_ids": self.tweet_ids, "coders": self.coders,
            "seed": self.seed, "status": self.status,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Round":
        return cls(**data)


class AnnotationProject:
    """Tweet pool + rounds + label store behind one lock."""

    def __init__(self, pool, store: LabelStore | None = None,
                 rounds_path: str | Path | None = None):
        self.pool: dict[str, Tweet] = {t.id: t for t in pool}
        self.store = store if store is not None else LabelStore()
        self.rounds: dict[str, Round] = {}
        self._rounds_path = Path(rounds_path) if rounds_path else None
        self._lock = threading.Lock()
        if self._rounds_path and self._rounds_path.exists():
            with open(self._rounds_path, encoding="utf-8") as fh:
                for line in fh:
                    if line.strip():
                        rnd = Round.from_dict(json.loads(line))
                        self.rounds[rnd.id] = rnd

    def _persist_rounds(self) -> None:
        if not self._rounds_path:
            return
        with open(self._rounds_path, "w", encoding="utf-8") as fh:
            for rnd in self.rounds.values():
                fh.write(json.dumps(rnd.to_dict(), ensure_ascii=False) + "\n")

    def _used_ids(self) -> set[str]:
        used = set()
        for rnd in self.rounds.values():
            used.update(rnd.tweet_ids)
        return used

    def create_round(self, strategy: str, targets, coders: list[str], seed: int = 0,
                     predictions: dict[str, str] | None = None,
                     category_keywords: dict[str, list[str]] | None = None,
                     round_id: str | None = None) -> Round:
        """Sample a deterministic batch of unseen pool tweets.

        model_seeded draws up to the per-label target from the supplied
        predictions; the predicted labels are not stored with the round, so
        coders never see them. A pool too small for the targets yields a
        partial round with a warning.
        """
        if strategy not in STRATEGIES:
            raise ValueError(f"strategy must be one of {STRATEGIES}, got {strategy!r}")
        if not self.pool:
            raise ValueError("tweet pool is empty")
        if not coders:
            raise ValueError("a round needs at least one coder")
        with self._lock:
            available = [tid for tid in self.pool if tid not in self._used_ids()]
            rng = random.Random(seed)

            if strategy == "random":
                if not isinstance(targets, int) or targets < 1:
                    raise ValueError("random rounds take a positive integer target")
                rng.shuffle(available)
                sampled = available[:targets]
                if len(sampled) < targets:
                    log.warning("pool exhausted: sampled %d of %d requested",
                                len(sampled), targets)
            elif strategy == "model_seeded":
                if predictions is None:
                    raise ValueError("model_seeded rounds need a prediction set")
                if not isinstance(targets, dict):
                    raise ValueError("model_seeded rounds take per-label targets")
                sampled = []
                for label in sorted(targets):
                    want = targets[label]
                    candidates = [tid for tid in available
                                  if predictions.get(tid) == label and tid not in sampled]
                    rng.shuffle(candidates)
                    got = candidates[:want]
                    if len(got) < want:
                        log.warning("label %r: only %d of %d requested predictions available",
                                    label, len(got), want)
                    sampled.extend(got)
            else:  # keyword_seeded
                if category_keywords is None:
                    raise ValueError("keyword_seeded rounds need per-category keyword lists")
                if not isinstance(targets, dict):
                    raise ValueError("keyword_seeded rounds take per-category targets")
                sampled = []
                taken = set()
                for category in sorted(targets):
                    want = targets[category]
                    terms = category_keywords.get(category)
                    if not terms:
                        raise ValueError(f"no keywords supplied for category {category!r}")
                    config = FilterConfig(keywords=tuple(t.lower() for t in terms),
                                          exclusions=())
                    candidates = [tid for tid in available
                                  if tid not in taken
                                  and matches_keywords(self.pool[tid].text, config)]
                    rng.shuffle(candidates)
                    got = candidates[:want]
                    if len(got) < want:
                        log.warning("category %r: only %d of %d keyword matches available",
                                    category, len(got), want)
                    sampled.extend(got)
                    taken.update(got)

            rid = round_id or f"round-{len(self.rounds) + 1:03d}"
            if rid in self.rounds:
                raise ValueError(f"round id {rid!r} already exists")
            rnd = Round(id=rid, strategy=strategy, targets=targets,
                        tweet_ids=list(sampled), coders=list(coders), seed=seed)
            self.rounds[rid] = rnd
            self._persist_rounds()
            return rnd

    def _get_round(self, round_id: str) -> Round:
        try:
            return self.rounds[round_id]
        except KeyError:
            raise ValueError(f"unknown round {round_id!r}") from None

    def _check_coder(self, rnd: Round, coder: str) -> None:
        if coder not in rnd.coders:
            raise ValueError(f"coder {coder!r} is not assigned to round {rnd.id!r}")

    def next_task(self, round_id: str, coder: str) -> Tweet | None:
        """First round tweet this coder has not labeled yet, in round order."""
        rnd = self._get_round(round_id)
        self._check_coder(rnd, coder)
        done = {tweet_id for (rid, tweet_id, c) in self.store.current(round_id)
                if c == coder}
        for tid in rnd.tweet_ids:
            if tid not in done:
                return self.pool[tid]
        return None

    def progress(self, round_id: str) -> dict[str, dict]:
        rnd = self._get_round(round_id)
        current = self.store.current(round_id)
        out = {}
        for coder in rnd.coders:
            done = sum(1 for (_, tid, c) in current
                       if c == coder and tid in set(rnd.tweet_ids))
            out[coder] = {"done": done, "total": len(rnd.tweet_ids)}
        return out

    def submit_label(self, round_id: str, coder: str, tweet_id: str,
                     dims: DimensionAnnotation, client_key: str | None = None) -> LabelRecord:
        rnd = self._get_round(round_id)
        self._check_coder(rnd, coder)
        if tweet_id not in rnd.tweet_ids:
            raise ValueError(f"tweet {tweet_id!r} is not part of round {round_id!r}")
        category = derive_category(dims)  # raises InvalidAnnotation with field detail
        hints = tuple(adjudication_hints(dims))
        return self.store.append(round_id, tweet_id, coder, category, dims=dims,
                                 hints=hints, client_key=client_key)

    def submit_override(self, round_id: str, adjudicator: str, tweet_id: str,
                        category: str) -> LabelRecord:
        """Direct category assignment by an adjudicator, recorded as such."""
        rnd = self._get_round(round_id)
        if tweet_id not in rnd.tweet_ids:
            raise ValueError(f"tweet {tweet_id!r} is not part of round {round_id!r}")
        if category not in tax.FINE_CATEGORIES:
            raise ValueError(f"unknown category {category!r}")
        return self.store.append(round_id, tweet_id, adjudicator, category,
                                 dims=None, is_override=True)

    def _labels_by_coder(self, round_id: str) -> dict[str, dict[str, str]]:
        """coder -> tweet id -> current fine category (overrides excluded)."""
        out: dict[str, dict[str, str]] = {}
        for (rid, tweet_id, coder), record in self.store.current(round_id).items():
            if record.is_override:
                continue
            out.setdefault(coder, {})[tweet_id] = record.category
        return out

    def disagreements(self, round_id: str, level: int = 12) -> list[dict]:
        """Tweets whose current labels differ across coders at the level.

        Tweets with an adjudicator override are settled and drop out.
        """
        rnd = self._get_round(round_id)
        by_coder = self._labels_by_coder(round_id)
        if len(by_coder) < 2:
            return []
        coders = sorted(by_coder)
        covered = [set(by_coder[c]) for c in coders]
        overlap = set.union(*(a & b for a in covered for b in covered if a is not b)) \
            if len(covered) > 1 else set()
        if not overlap:
            log.warning("round %s: no overlapping coverage between coders", round_id)
            return []
        adjudicated = {record.tweet_id
                       for record in self.store.current(round_id).values()
                       if record.is_override}
        out = []
        for tid in rnd.tweet_ids:
            if tid in adjudicated:
                continue
            seen = {c: tax.map_to_level(by_coder[c][tid], level)
                    for c in coders if tid in by_coder[c]}
            if len(seen) >= 2 and len(set(seen.values())) > 1:
                out.append({"tweet_id": tid, "text": self.pool[tid].text,
                            "labels": seen})
        return out

    def live_kappa(self, round_id: str, level: int = 6,
                   exclude: str | None = None,
                   coders: tuple[str, str] | None = None) -> KappaResult:
        """Agreement between two coders on their jointly labeled subset.

        With ``exclude`` set, items either coder placed in that class (at
        the requested level) are dropped first.
        """
        self._get_round(round_id)
        by_coder = self._labels_by_coder(round_id)
        if coders is None:
            have = sorted(by_coder)
            if len(have) != 2:
                raise ValueError(f"round has {len(have)} coders with labels; "
                                 "name the pair to compare")
            coders = (have[0], have[1])
        a_labels, b_labels = (by_coder.get(c, {}) for c in coders)
        joint = sorted(set(a_labels) & set(b_labels))
        pairs = [(tax.map_to_level(a_labels[t], level), tax.map_to_level(b_labels[t], level))
                 for t in joint]
        if exclude is not None:
            pairs = [(x, y) for x, y in pairs if x != exclude and y != exclude]
        if len(pairs) < 2:
            raise ValueError("need at least two jointly labeled tweets")
        classes = tuple(c for c in tax.classes_for_level(level) if c != exclude)
        return cohens_kappa([p[0] for p in pairs], [p[1] for p in pairs], classes=classes)

    def export_labeled(self, round_ids: list[str] | None = None,
                       resolution: str = "latest") -> LabeledSet:
        """One fine label per tweet across the chosen rounds.

        ``latest`` takes the newest current record per tweet. ``adjudicated``
        requires coder agreement or an adjudicator override and errors with
        the list of unresolved tweets otherwise.
        """
        if resolution not in ("latest", "adjudicated"):
            raise ValueError(f"resolution must be 'latest' or 'adjudicated', got {resolution!r}")
        if round_ids is None:
            round_ids = sorted(self.rounds)
        current = [r for r in self.store.current().values() if r.round_id in round_ids]
        strategy_by_round = {rid: self.rounds[rid].strategy for rid in round_ids
                             if rid in self.rounds}

        per_tweet: dict[str, list[LabelRecord]] = {}
        for record in current:
            per_tweet.setdefault(record.tweet_id, []).append(record)

        entries = []
        unresolved = []
        for tweet_id in sorted(per_tweet):
            records = sorted(per_tweet[tweet_id], key=lambda r: r.seq)
            overrides = [r for r in records if r.is_override]
            plain = [r for r in records if not r.is_override]
            if resolution == "latest":
                chosen = records[-1]
            else:
                if overrides:
                    chosen = overrides[-1]
                elif len({r.category for r in plain}) == 1:
                    chosen = plain[-1]
                else:
                    unresolved.append(tweet_id)
                    continue
            entries.append(LabeledExample(
                tweet=self.pool[tweet_id], label=chosen.category,
                provenance=strategy_by_round.get(chosen.round_id, "unspecified"),
            ))
        if unresolved:
            raise ValueError("unresolved disagreements for tweets: "
                             + ", ".join(unresolved))
        return LabeledSet(entries)

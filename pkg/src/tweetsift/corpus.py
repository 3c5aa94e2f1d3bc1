"""Posting ingestion and filtering: keyword inclusion, exclusion terms,
retweet removal, duplicate collapsing, and stratified dataset splits.
"""

from __future__ import annotations

import json
import logging
import random
import re
from dataclasses import dataclass
from datetime import datetime, timezone
from importlib import resources

from . import preprocess

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Tweet:
    """One posting record."""

    id: str
    text: str
    timestamp: datetime | None = None
    is_retweet_flagged: bool = False

    def __post_init__(self):
        if not self.id:
            raise ValueError("tweet id must be non-empty")
        if not self.text:
            raise ValueError("tweet text must be non-empty")


@dataclass
class TweetSet:
    tweets: list[Tweet]
    skipped: int = 0

    def __len__(self):
        return len(self.tweets)

    def __iter__(self):
        return iter(self.tweets)


@dataclass(frozen=True)
class FilterConfig:
    """Keyword inclusion phrases and exclusion patterns (all lowercase).

    Exclusion patterns ending in ``*`` match word-token prefixes; all other
    patterns and every keyword match as substrings after whitespace
    collapsing.
    """

    keywords: tuple[str, ...]
    exclusions: tuple[str, ...]

    def __post_init__(self):
        for term in self.keywords:
            if not term:
                raise ValueError("empty keyword")
            if "*" in term:
                raise ValueError(f"keywords do not support wildcards: {term!r}")
        for term in self.exclusions:
            if not term:
                raise ValueError("empty exclusion term")
            star = term.find("*")
            if star != -1 and star != len(term) - 1:
                raise ValueError(f"wildcard only allowed as final character: {term!r}")
            if term == "*":
                raise ValueError("bare wildcard exclusion")


def _read_term_file(path) -> tuple[str, ...]:
    terms = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                terms.append(line.lower())
    return tuple(terms)


def load_filter_config(keywords_path, exclusions_path) -> FilterConfig:
    """Read keyword/exclusion lists from one-term-per-line text files."""
    return FilterConfig(keywords=_read_term_file(keywords_path),
                        exclusions=_read_term_file(exclusions_path))


def default_filter_config() -> FilterConfig:
    """The packaged suicide-related search terms and exclusion terms."""
    pkg = resources.files("tweetsift.data")
    with resources.as_file(pkg.joinpath("keywords.txt")) as kw, \
            resources.as_file(pkg.joinpath("exclusions.txt")) as ex:
        return load_filter_config(kw, ex)


_WS_RE = re.compile(r"\s+")


def _collapse(text: str) -> str:
    return _WS_RE.sub(" ", text.lower()).strip()


_TOKEN_RE = re.compile(r"\w+")


def matches_keywords(text: str, config: FilterConfig) -> bool:
    haystack = _collapse(text)
    return any(kw in haystack for kw in config.keywords)


def is_excluded(text: str, config: FilterConfig) -> bool:
    haystack = _collapse(text)
    words = None
    for term in config.exclusions:
        if term.endswith("*"):
            prefix = term[:-1]
            if words is None:
                words = _TOKEN_RE.findall(haystack)
            if any(w.startswith(prefix) for w in words):
                return True
        elif term in haystack:
            return True
    return False


# Manual retweet/modified-tweet markers: a standalone RT or MT token
# directly followed by a mention. Case-sensitive so "the ART of" is safe.
_RT_RE = re.compile(r"\b(?:RT|MT)\s+@")


def is_retweet(tweet: Tweet) -> bool:
    return tweet.is_retweet_flagged or _RT_RE.search(tweet.text) is not None


def dedupe(tweets: TweetSet | list[Tweet]) -> TweetSet:
    """Keep the first occurrence per normalized text.

    URLs and mentions collapse to markers first, so re-shared variants that
    differ only in links or tags count as duplicates.
    """
    seen: set[str] = set()
    kept = []
    for tweet in tweets:
        key = preprocess.normalize(tweet.text)
        if key not in seen:
            seen.add(key)
            kept.append(tweet)
    return TweetSet(kept)


def _parse_timestamp(raw) -> datetime | None:
    if raw is None:
        return None
    dt = datetime.fromisoformat(str(raw).replace("Z", "+00:00"))
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


def load_tweets(path) -> TweetSet:
    """Read a JSON-lines file of posting records.

    Each line needs ``id`` and ``text``; ``created_at`` (ISO-8601) and
    ``retweet`` are optional. Malformed lines are skipped with a warning
    and counted in the result.
    """
    tweets = []
    skipped = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                tweet = Tweet(
                    id=str(record["id"]),
                    text=record["text"],
                    timestamp=_parse_timestamp(record.get("created_at")),
                    is_retweet_flagged=bool(record.get("retweet", False)),
                )
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                log.warning("%s:%d: skipping malformed line (%s)", path, lineno, exc)
                skipped += 1
                continue
            tweets.append(tweet)
    return TweetSet(tweets, skipped=skipped)


def write_tweets(path, tweets) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for t in tweets:
            record = {"id": t.id, "text": t.text}
            if t.timestamp is not None:
                record["created_at"] = t.timestamp.isoformat().replace("+00:00", "Z")
            if t.is_retweet_flagged:
                record["retweet"] = True
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


@dataclass
class FilterStats:
    input: int = 0
    after_keywords: int = 0
    after_exclusions: int = 0
    after_retweets: int = 0
    after_dedupe: int = 0


def filter_pipeline(tweets: TweetSet | list[Tweet], config: FilterConfig,
                    keep_retweets: bool = False,
                    since: datetime | None = None,
                    until: datetime | None = None) -> tuple[TweetSet, FilterStats]:
    """keywords -> exclusions -> (retweets) -> duplicates, with stage counts.

    The optional date window is applied first and is off by default.
    """
    stats = FilterStats()
    pool = list(tweets)
    if since is not None or until is not None:
        pool = [t for t in pool
                if t.timestamp is not None
                and (since is None or t.timestamp >= since)
                and (until is None or t.timestamp <= until)]
    stats.input = len(pool)
    pool = [t for t in pool if matches_keywords(t.text, config)]
    stats.after_keywords = len(pool)
    pool = [t for t in pool if not is_excluded(t.text, config)]
    stats.after_exclusions = len(pool)
    if not keep_retweets:
        pool = [t for t in pool if not is_retweet(t)]
    stats.after_retweets = len(pool)
    result = dedupe(pool)
    stats.after_dedupe = len(result)
    return result, stats


@dataclass(frozen=True)
class LabeledExample:
    tweet: Tweet
    label: str
    provenance: str = "unspecified"


@dataclass
class LabeledSet:
    """Tweets with one fine-category label each; ids unique."""

    entries: list[LabeledExample]

    def __post_init__(self):
        ids = [e.tweet.id for e in self.entries]
        if len(ids) != len(set(ids)):
            raise ValueError("duplicate tweet ids in labeled set")

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def labels(self) -> list[str]:
        return [e.label for e in self.entries]


def load_labeled(path) -> LabeledSet:
    """Read labeled postings from JSONL with ``label`` next to the tweet fields."""
    entries = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            record = json.loads(line)
            try:
                tweet = Tweet(
                    id=str(record["id"]),
                    text=record["text"],
                    timestamp=_parse_timestamp(record.get("created_at")),
                    is_retweet_flagged=bool(record.get("retweet", False)),
                )
                entries.append(LabeledExample(tweet, record["label"],
                                              record.get("provenance", "unspecified")))
            except (KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"{path}:{lineno}: bad labeled record ({exc})") from exc
    return LabeledSet(entries)


def write_labeled(path, labeled: LabeledSet) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for e in labeled:
            record = {"id": e.tweet.id, "text": e.tweet.text, "label": e.label}
            if e.tweet.timestamp is not None:
                record["created_at"] = e.tweet.timestamp.isoformat().replace("+00:00", "Z")
            if e.provenance != "unspecified":
                record["provenance"] = e.provenance
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


@dataclass
class SplitSet:
    train: LabeledSet
    validation: LabeledSet
    test: LabeledSet
    ratios: tuple[float, float, float]
    seed: int


def _largest_remainder_counts(n: int, ratios: tuple[float, ...]) -> list[int]:
    """Apportion n items to parts by quota floors + largest remainders.

    Remainder ties go to the earlier part, so the training split wins them.
    """
    quotas = [n * r for r in ratios]
    counts = [int(q) for q in quotas]
    leftover = n - sum(counts)
    order = sorted(range(len(ratios)), key=lambda i: (-(quotas[i] - counts[i]), i))
    for i in order[:leftover]:
        counts[i] += 1
    return counts


def stratified_split(labeled: LabeledSet,
                     ratios: tuple[float, float, float] = (0.64, 0.16, 0.20),
                     seed: int = 0) -> SplitSet:
    """Split per class with largest-remainder rounding; deterministic by seed."""
    if len(ratios) != 3 or any(r <= 0 for r in ratios):
        raise ValueError("need three positive ratios")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError(f"ratios must sum to 1, got {sum(ratios)}")

    by_class: dict[str, list[LabeledExample]] = {}
    for entry in labeled:
        by_class.setdefault(entry.label, []).append(entry)
    for cls, members in by_class.items():
        if len(members) < 3:
            raise ValueError(f"class {cls!r} has only {len(members)} members; need >= 3")

    rng = random.Random(seed)
    parts: tuple[list, list, list] = ([], [], [])
    for cls in sorted(by_class):
        members = by_class[cls][:]
        rng.shuffle(members)
        n_train, n_val, _ = _largest_remainder_counts(len(members), ratios)
        parts[0].extend(members[:n_train])
        parts[1].extend(members[n_train:n_train + n_val])
        parts[2].extend(members[n_train + n_val:])
    return SplitSet(
        train=LabeledSet(parts[0]),
        validation=LabeledSet(parts[1]),
        test=LabeledSet(parts[2]),
        ratios=ratios,
        seed=seed,
    )

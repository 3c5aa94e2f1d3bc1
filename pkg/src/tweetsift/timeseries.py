"""Daily category volumes, recall-adjusted prevalence estimates, and peak
reports for face-validity inspection of model predictions.
"""

from __future__ import annotations

import csv
import logging
from collections import Counter
from dataclasses import dataclass
from datetime import date

log = logging.getLogger(__name__)


@dataclass
class DailyRow:
    day: date
    total: int
    counts: dict[str, int]
    shares: dict[str, float]  # percent, sums to 100


@dataclass
class DailySeries:
    categories: tuple[str, ...]
    rows: list[DailyRow]  # ascending by date, zero-tweet days omitted

    def share_series(self, category: str) -> list[tuple[date, float]]:
        if category not in self.categories:
            raise ValueError(f"unknown category {category!r}")
        return [(row.day, row.shares.get(category, 0.0)) for row in self.rows]

    def write_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["date", "total", *self.categories])
            for row in self.rows:
                writer.writerow([row.day.isoformat(), row.total,
                                 *(repr(row.shares.get(c, 0.0)) for c in self.categories)])


def daily_shares(labels_by_id: dict[str, str], dates_by_id: dict[str, date],
                 categories=None) -> DailySeries:
    """Group predictions by UTC calendar date and compute percent shares."""
    per_day: dict[date, Counter] = {}
    for tweet_id, label in labels_by_id.items():
        if tweet_id not in dates_by_id or dates_by_id[tweet_id] is None:
            raise ValueError(f"no date for id {tweet_id!r}")
        day = dates_by_id[tweet_id]
        per_day.setdefault(day, Counter())[label] += 1
    if categories is None:
        categories = tuple(sorted({label for label in labels_by_id.values()}))
    else:
        categories = tuple(categories)
    rows = []
    for day in sorted(per_day):
        counts = per_day[day]
        total = sum(counts.values())
        shares = {c: 100.0 * counts.get(c, 0) / total for c in categories}
        rows.append(DailyRow(day=day, total=total, counts=dict(counts), shares=shares))
    return DailySeries(categories=categories, rows=rows)


@dataclass
class PrevalenceEstimate:
    """Raw and recall-adjusted category shares, in percent."""

    raw: dict[str, float]
    recalls: dict[str, float]
    adjusted: dict[str, float]
    residual_irrelevant: float
    clamped: bool = False  # adjusted shares exceeded 100; residual clamped to 0


def recall_adjust(raw_shares: dict[str, float], recalls: dict[str, float]) -> PrevalenceEstimate:
    """Divide each relevant category's share by the model's recall.

    The leftover share is attributed to the irrelevant remainder; if the
    adjusted shares exceed 100 the residual is clamped at 0 and flagged.
    """
    adjusted = {}
    for category, share in raw_shares.items():
        if share < 0:
            raise ValueError(f"negative share for {category!r}")
        if category not in recalls:
            raise ValueError(f"no recall supplied for {category!r}")
        recall = recalls[category]
        if not 0.0 < recall <= 1.0:
            raise ValueError(f"recall for {category!r} must be in (0, 1], got {recall}")
        adjusted[category] = share / recall
    residual = 100.0 - sum(adjusted.values())
    clamped = False
    if residual < 0:
        log.warning("adjusted shares sum to %.2f%%; clamping residual to 0",
                    sum(adjusted.values()))
        residual = 0.0
        clamped = True
    return PrevalenceEstimate(raw=dict(raw_shares), recalls=dict(recalls),
                              adjusted=adjusted, residual_irrelevant=residual,
                              clamped=clamped)


@dataclass
class Peak:
    category: str
    day: date
    share: float
    rank: int


def detect_peaks(series: DailySeries, category: str, k: int = 5,
                 min_separation: int = 7) -> list[Peak]:
    """Top-k strict local maxima of a category's share, greedily thinned.

    A boundary day counts as a local maximum when strictly above its single
    neighbor. Selected peaks are pairwise at least ``min_separation`` days
    apart; fewer than k peaks may qualify.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    points = series.share_series(category)
    if not points:
        raise ValueError("series has no rows")
    candidates = []
    for i, (day, share) in enumerate(points):
        left_ok = i == 0 or share > points[i - 1][1]
        right_ok = i == len(points) - 1 or share > points[i + 1][1]
        if (left_ok and right_ok) and len(points) > 1:
            candidates.append((day, share))
    candidates.sort(key=lambda p: (-p[1], p[0]))
    chosen: list[tuple[date, float]] = []
    for day, share in candidates:
        if len(chosen) == k:
            break
        if all(abs((day - other).days) >= min_separation for other, _ in chosen):
            chosen.append((day, share))
    return [Peak(category=category, day=day, share=share, rank=rank)
            for rank, (day, share) in enumerate(chosen, 1)]


def write_peaks_csv(path, peaks: list[Peak]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["category", "date", "share", "rank"])
        for p in peaks:
            writer.writerow([p.category, p.day.isoformat(), repr(p.share), p.rank])


def category_frequencies(labels, level: int | None = None) -> dict[str, float]:
    """Percent of items per category, optionally collapsed to a taxonomy level."""
    labels = list(labels)
    if not labels:
        raise ValueError("no labels")
    if level is not None:
        from .taxonomy import map_to_level
        labels = [map_to_level(label, level) for label in labels]
    counts = Counter(labels)
    n = len(labels)
    return {c: 100.0 * counts[c] / n for c in sorted(counts)}

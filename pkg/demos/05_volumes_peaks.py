"""Daily category volumes, recall-adjusted prevalence, and peak detection.

Synthesizes two years of daily predictions with planted events, then prints
the detected peaks per category and the recall-adjusted overall shares.
"""

from datetime import date, timedelta

import numpy as np

from tweetsift.timeseries import daily_shares, detect_peaks, recall_adjust

rng = np.random.default_rng(42)
categories = ["coping", "prevention", "suicide_cases", "irrelevant"]
base_rates = {"coping": 0.05, "prevention": 0.15, "suicide_cases": 0.15,
              "irrelevant": 0.65}

# planted events: (category, day offset, extra weight)
events = [("prevention", 252, 6.0),   # an awareness day
          ("prevention", 359, 3.0),   # end-of-year campaigns
          ("suicide_cases", 120, 8.0),
          ("coping", 500, 5.0)]

start = date(2016, 1, 1)
labels = {}
dates = {}
tweet = 0
for offset in range(730):
    day = start + timedelta(days=offset)
    weights = dict(base_rates)
    for category, event_day, boost in events:
        if offset == event_day:
            weights[category] += boost
    total = sum(weights.values())
    probs = [weights[c] / total for c in categories]
    for label in rng.choice(categories, size=60, p=probs):
        labels[f"t{tweet}"] = str(label)
        dates[f"t{tweet}"] = day
        tweet += 1

series = daily_shares(labels, dates, categories=categories)
print(f"{len(series.rows)} days, {tweet} predictions")

for category in ("prevention", "suicide_cases", "coping"):
    peaks = detect_peaks(series, category, k=3, min_separation=14)
    print(f"\ntop {category} peaks:")
    for p in peaks:
        print(f"  #{p.rank} {p.day} at {p.share:.1f}%")

# Raw shares undercount because the classifier misses part of each class;
# dividing by per-class recall estimates the true prevalence.
raw = {"coping": 4.8, "prevention": 14.2, "suicide_cases": 14.9}
recalls = {"coping": 0.69, "prevention": 0.89, "suicide_cases": 0.77}
estimate = recall_adjust(raw, recalls)
print("\nrecall-adjusted shares:")
for category, value in estimate.adjusted.items():
    print(f"  {category:<15} {raw[category]:5.2f}% -> {value:5.2f}%")
print(f"  residual irrelevant share: {estimate.residual_irrelevant:.2f}%")

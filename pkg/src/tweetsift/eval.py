"""Evaluation statistics: confusion matrices, per-class and macro
precision/recall/F1 with exact binomial confidence intervals, Cohen's
kappa with confidence intervals, and benchmark report assembly.
"""

from __future__ import annotations

import csv
import math
import random
from dataclasses import dataclass, field
from decimal import Decimal, ROUND_HALF_UP
from statistics import NormalDist

import numpy as np


# --- exact binomial interval -------------------------------------------------

def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta function (Lentz's method)."""
    max_iter = 300
    eps = 3e-16
    fpmin = 1e-300
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < fpmin:
        d = fpmin
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def betainc_reg(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b) for a, b > 0."""
    if a <= 0 or b <= 0:
        raise ValueError("shape parameters must be positive")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                + a * math.log(x) + b * math.log1p(-x))
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def betainc_inv(a: float, b: float, q: float, tol: float = 1e-10) -> float:
    """Solve I_x(a, b) = q for x by bisection."""
    if not 0.0 <= q <= 1.0:
        raise ValueError("q must be in [0, 1]")
    if q == 0.0:
        return 0.0
    if q == 1.0:
        return 1.0
    lo, hi = 0.0, 1.0
    while hi - lo > tol * 0.01:
        mid = 0.5 * (lo + hi)
        if betainc_reg(a, b, mid) < q:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def clopper_pearson(successes: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    """Exact two-sided binomial interval from beta quantiles.

    Lower bound is 0 at zero successes and the upper bound 1 at full
    success, matching the closed forms 1 - (alpha/2)^(1/n) and its mirror.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    if not 0 <= successes <= trials:
        raise ValueError(f"successes must be in [0, {trials}], got {successes}")
    if not 0.0 < confidence < 1.0:
        raise ValueError("confidence must be in (0, 1)")
    alpha = 1.0 - confidence
    if successes == 0:
        low = 0.0
    else:
        low = betainc_inv(successes, trials - successes + 1, alpha / 2.0)
    if successes == trials:
        high = 1.0
    else:
        high = betainc_inv(successes + 1, trials - successes, 1.0 - alpha / 2.0)
    return (low, high)


# --- confusion matrices and class metrics ------------------------------------

@dataclass
class ConfusionMatrix:
    """Rows are true labels, columns predictions, both in class order."""

    classes: tuple[str, ...]
    counts: np.ndarray

    def __post_init__(self):
        k = len(self.classes)
        self.counts = np.asarray(self.counts, dtype=np.int64)
        if self.counts.shape != (k, k):
            raise ValueError(f"counts must be {k}x{k}")
        if (self.counts < 0).any():
            raise ValueError("negative count")

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def index(self, cls: str) -> int:
        try:
            return self.classes.index(cls)
        except ValueError:
            raise ValueError(f"unknown class {cls!r}") from None

    def row_total(self, cls: str) -> int:
        return int(self.counts[self.index(cls)].sum())

    def column_total(self, cls: str) -> int:
        return int(self.counts[:, self.index(cls)].sum())

    def row_normalized(self) -> np.ndarray:
        """Row percentages; all-zero rows stay zero."""
        totals = self.counts.sum(axis=1, keepdims=True)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(totals > 0, 100.0 * self.counts / totals, 0.0)
        return out

    def to_dict(self) -> dict:
        return {"classes": list(self.classes), "counts": self.counts.tolist()}

    def write_csv(self, path, normalized: bool = False) -> None:
        data = self.row_normalized() if normalized else self.counts
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["true\\predicted", *self.classes])
            for i, cls in enumerate(self.classes):
                writer.writerow([cls, *data[i].tolist()])


def confusion(true_labels, predicted_labels, classes=None) -> ConfusionMatrix:
    true_labels = list(true_labels)
    predicted_labels = list(predicted_labels)
    if len(true_labels) != len(predicted_labels):
        raise ValueError(f"length mismatch: {len(true_labels)} true vs "
                         f"{len(predicted_labels)} predicted")
    if not true_labels:
        raise ValueError("no labels to evaluate")
    if classes is None:
        classes = tuple(sorted(set(true_labels) | set(predicted_labels)))
    else:
        classes = tuple(classes)
    index = {c: i for i, c in enumerate(classes)}
    counts = np.zeros((len(classes), len(classes)), dtype=np.int64)
    for t, p in zip(true_labels, predicted_labels):
        if t not in index:
            raise ValueError(f"unknown true label {t!r}")
        if p not in index:
            raise ValueError(f"unknown predicted label {p!r}")
        counts[index[t], index[p]] += 1
    return ConfusionMatrix(classes=classes, counts=counts)


@dataclass
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int
    precision_ci: tuple[float, float] | None = None
    recall_ci: tuple[float, float] | None = None


def class_metrics(cm: ConfusionMatrix, cls: str, confidence: float = 0.95) -> ClassMetrics:
    """Precision/recall/F1 for one class; zero denominators give 0.

    Interval trial counts: all predictions of the class for precision, all
    true members for recall. With zero trials the interval is the whole
    unit range.
    """
    i = cm.index(cls)
    tp = int(cm.counts[i, i])
    predicted = cm.column_total(cls)
    actual = cm.row_total(cls)
    precision = tp / predicted if predicted else 0.0
    recall = tp / actual if actual else 0.0
    f1 = (2 * precision * recall / (precision + recall)) if (precision + recall) else 0.0
    precision_ci = clopper_pearson(tp, predicted, confidence) if predicted else (0.0, 1.0)
    recall_ci = clopper_pearson(tp, actual, confidence) if actual else (0.0, 1.0)
    return ClassMetrics(precision=precision, recall=recall, f1=f1, support=actual,
                        precision_ci=precision_ci, recall_ci=recall_ci)


@dataclass
class MetricsReport:
    confusion_matrix: ConfusionMatrix | None
    per_class: dict[str, ClassMetrics]
    macro_precision: float
    macro_recall: float
    macro_f1: float
    accuracy: float
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "macro_precision": self.macro_precision,
            "macro_recall": self.macro_recall,
            "macro_f1": self.macro_f1,
            "per_class": {
                cls: {
                    "precision": m.precision,
                    "recall": m.recall,
                    "f1": m.f1,
                    "support": m.support,
                    "precision_ci": list(m.precision_ci) if m.precision_ci else None,
                    "recall_ci": list(m.recall_ci) if m.recall_ci else None,
                }
                for cls, m in self.per_class.items()
            },
            "confusion": self.confusion_matrix.to_dict() if self.confusion_matrix else None,
            "metadata": self.metadata,
        }


def evaluate(true_labels, predicted_labels, classes=None,
             confidence: float = 0.95, metadata: dict | None = None) -> MetricsReport:
    """Full report: confusion matrix, per-class metrics, macro means, accuracy."""
    cm = confusion(true_labels, predicted_labels, classes=classes)
    per_class = {cls: class_metrics(cm, cls, confidence) for cls in cm.classes}
    k = len(cm.classes)
    return MetricsReport(
        confusion_matrix=cm,
        per_class=per_class,
        macro_precision=sum(m.precision for m in per_class.values()) / k,
        macro_recall=sum(m.recall for m in per_class.values()) / k,
        macro_f1=sum(m.f1 for m in per_class.values()) / k,
        accuracy=float(np.trace(cm.counts)) / cm.total,
        metadata=metadata or {},
    )


def mean_report(reports: list[MetricsReport], metadata: dict | None = None) -> MetricsReport:
    """Arithmetic mean of point metrics across runs; intervals are dropped."""
    if not reports:
        raise ValueError("no reports to average")
    classes = tuple(reports[0].per_class)
    for r in reports[1:]:
        if tuple(r.per_class) != classes:
            raise ValueError("reports cover different class sets")
    n = len(reports)
    per_class = {}
    for cls in classes:
        per_class[cls] = ClassMetrics(
            precision=sum(r.per_class[cls].precision for r in reports) / n,
            recall=sum(r.per_class[cls].recall for r in reports) / n,
            f1=sum(r.per_class[cls].f1 for r in reports) / n,
            support=reports[0].per_class[cls].support,
        )
    return MetricsReport(
        confusion_matrix=None,
        per_class=per_class,
        macro_precision=sum(r.macro_precision for r in reports) / n,
        macro_recall=sum(r.macro_recall for r in reports) / n,
        macro_f1=sum(r.macro_f1 for r in reports) / n,
        accuracy=sum(r.accuracy for r in reports) / n,
        metadata=metadata or {},
    )


# --- inter-rater agreement ----------------------------------------------------

@dataclass
class KappaResult:
    kappa: float
    po: float
    pe: float
    ci: tuple[float, float]
    n: int
    method: str = "asymptotic"


def cohens_kappa(a, b, classes=None, confidence: float = 0.95,
                 method: str = "asymptotic", n_boot: int = 2000,
                 seed: int = 0) -> KappaResult:
    """Chance-corrected agreement between two raters.

    The default interval is kappa +/- z * SE with
    SE = sqrt(po (1 - po) / (n (1 - pe)^2)) (z = 1.96 at 95%);
    ``method="bootstrap"`` resamples rating pairs instead.
    """
    a = list(a)
    b = list(b)
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    n = len(a)
    if n < 2:
        raise ValueError("need at least two rated items")
    if classes is None:
        classes = tuple(sorted(set(a) | set(b)))
    else:
        classes = tuple(classes)
        stray = (set(a) | set(b)) - set(classes)
        if stray:
            raise ValueError(f"labels outside class set: {sorted(stray)}")

    def _kappa_point(xs, ys):
        m = len(xs)
        po = sum(x == y for x, y in zip(xs, ys)) / m
        pe = 0.0
        for c in classes:
            pe += (sum(x == c for x in xs) / m) * (sum(y == c for y in ys) / m)
        return po, pe

    po, pe = _kappa_point(a, b)
    if pe >= 1.0 - 1e-15:
        if po >= 1.0 - 1e-15:
            return KappaResult(kappa=1.0, po=po, pe=pe, ci=(1.0, 1.0), n=n, method=method)
        raise ValueError("expected agreement is 1 with observed disagreement; "
                         "kappa undefined")
    kappa = (po - pe) / (1.0 - pe)

    if method == "asymptotic":
        z = NormalDist().inv_cdf(1.0 - (1.0 - confidence) / 2.0)
        se = math.sqrt(po * (1.0 - po) / (n * (1.0 - pe) ** 2))
        ci = (max(-1.0, kappa - z * se), min(1.0, kappa + z * se))
    elif method == "bootstrap":
        rng = random.Random(seed)
        samples = []
        for _ in range(n_boot):
            picks = [rng.randrange(n) for _ in range(n)]
            xs = [a[i] for i in picks]
            ys = [b[i] for i in picks]
            po_s, pe_s = _kappa_point(xs, ys)
            samples.append(1.0 if pe_s >= 1.0 - 1e-15 else (po_s - pe_s) / (1.0 - pe_s))
        samples.sort()
        alpha = 1.0 - confidence
        lo_idx = int(math.floor(alpha / 2.0 * (n_boot - 1)))
        hi_idx = int(math.ceil((1.0 - alpha / 2.0) * (n_boot - 1)))
        ci = (samples[lo_idx], samples[hi_idx])
    else:
        raise ValueError(f"unknown method {method!r}")
    return KappaResult(kappa=kappa, po=po, pe=pe, ci=ci, n=n, method=method)


# --- benchmarking -------------------------------------------------------------

def benchmark(prediction_runs: dict[str, list], truth_by_split: dict[str, dict[str, str]],
              classes=None, confidence: float = 0.95) -> list[MetricsReport]:
    """Evaluate every model run against every split, plus per-model means.

    ``prediction_runs`` maps a model name to one or more runs; each run is
    a mapping of tweet id to predicted label (objects with a ``labels``
    attribute work too). Every id present in a split's truth must be
    covered, otherwise the missing id is reported.
    """
    reports = []
    for model_name, runs in prediction_runs.items():
        if not isinstance(runs, (list, tuple)):
            runs = [runs]
        for split_name, truth in truth_by_split.items():
            split_reports = []
            for run_index, run in enumerate(runs):
                labels = getattr(run, "labels", run)
                predicted = []
                actual = []
                for tweet_id, true_label in truth.items():
                    if tweet_id not in labels:
                        raise ValueError(f"model {model_name!r}, run {run_index}: "
                                         f"missing prediction for id {tweet_id!r}")
                    actual.append(true_label)
                    predicted.append(labels[tweet_id])
                report = evaluate(actual, predicted, classes=classes, confidence=confidence,
                                  metadata={"model": model_name, "split": split_name,
                                            "run": run_index})
                split_reports.append(report)
            reports.extend(split_reports)
            if len(split_reports) > 1:
                reports.append(mean_report(split_reports,
                                           metadata={"model": model_name, "split": split_name,
                                                     "mean_of": len(split_reports)}))
    return reports


# --- rendering ----------------------------------------------------------------

def round_half_up(value: float, digits: int = 2) -> float:
    """Display rounding matching printed tables; internals stay full precision."""
    q = Decimal(10) ** -digits
    return float(Decimal(repr(value)).quantize(q, rounding=ROUND_HALF_UP))


def _fmt(value: float) -> str:
    return f"{round_half_up(value):.2f}"


def render_summary_table(reports: list[MetricsReport]) -> str:
    """Aligned text table of macro metrics, one row per report."""
    header = ["model", "split", "run", "Pr", "Re", "F1", "Acc"]
    rows = [header]
    for r in reports:
        meta = r.metadata
        run = meta.get("run")
        run_label = "mean" if "mean_of" in meta else ("" if run is None else str(run))
        rows.append([
            str(meta.get("model", "?")),
            str(meta.get("split", "")),
            run_label,
            _fmt(r.macro_precision), _fmt(r.macro_recall),
            _fmt(r.macro_f1), _fmt(r.accuracy),
        ])
    widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
    lines = []
    for idx, row in enumerate(rows):
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
        if idx == 0:
            lines.append("  ".join("-" * widths[i] for i in range(len(header))))
    return "\n".join(lines)


def render_class_table(report: MetricsReport) -> str:
    """Per-class precision/recall/F1 with intervals as percentages."""
    header = ["class", "Pr", "Pr 95% CI", "Re", "Re 95% CI", "F1", "n"]
    rows = [header]
    for cls, m in report.per_class.items():
        def ci_text(ci):
            if ci is None:
                return ""
            return f"[{round_half_up(100 * ci[0]):.2f}-{round_half_up(100 * ci[1]):.2f}]"
        rows.append([cls, _fmt(m.precision), ci_text(m.precision_ci),
                     _fmt(m.recall), ci_text(m.recall_ci), _fmt(m.f1), str(m.support)])
    widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
    lines = []
    for idx, row in enumerate(rows):
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
        if idx == 0:
            lines.append("  ".join("-" * widths[i] for i in range(len(header))))
    return "\n".join(lines)

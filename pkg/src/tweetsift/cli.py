"""Command-line pipeline: ingest -> split -> train/gridsearch -> eval ->
predict -> volumes/peaks, plus the annotation service.

Every randomized step takes --seed and reruns byte-identically; --json
switches error output to machine-readable JSON on stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from datetime import date, datetime, timezone
from importlib import resources
from pathlib import Path

from . import corpus, eval as evalmod, models, preprocess, taxonomy, timeseries


def _parse_date(raw: str) -> datetime:
    dt = datetime.fromisoformat(raw)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt


def _parse_ratios(raw: str) -> tuple[float, float, float]:
    parts = [float(p) for p in raw.split(",")]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("ratios must be three comma-separated fractions")
    return (parts[0], parts[1], parts[2])


def _parse_top_n(raw: str) -> int | None:
    return None if raw.lower() in ("none", "all") else int(raw)


def _preprocess_fn(args):
    lemma = preprocess.load_lemma_table(args.lemma_table) if getattr(args, "lemma_table", None) else None
    config = preprocess.strategy_config(args.strategy, lemma_table=lemma,
                                        max_tokens=args.max_tokens)
    return lambda text: preprocess.preprocess(text, config)


def _add_preprocess_flags(parser):
    parser.add_argument("--strategy", type=int, default=1,
                        help="preprocessing strategy number (1=basic, 3-9=removal permutations, 2 needs --lemma-table)")
    parser.add_argument("--lemma-table", help="token<TAB>lemma file for strategy 2")
    parser.add_argument("--max-tokens", type=int, default=80,
                        help="truncate documents to this many tokens")


def _labeled_to_task(labeled: corpus.LabeledSet, task: int) -> list[str]:
    return [taxonomy.map_to_task(e.label, task) for e in labeled]


def _emit(args, payload: dict) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        for key, value in payload.items():
            print(f"{key}: {value}")


# --- commands ------------------------------------------------------------------

def cmd_ingest(args) -> int:
    if args.keywords or args.exclusions:
        if not (args.keywords and args.exclusions):
            raise SystemExit("--keywords and --exclusions must be given together")
        config = corpus.load_filter_config(args.keywords, args.exclusions)
    else:
        config = corpus.default_filter_config()
    tweets = corpus.load_tweets(args.input)
    since = _parse_date(args.since) if args.since else None
    until = _parse_date(args.until) if args.until else None
    filtered, stats = corpus.filter_pipeline(tweets, config,
                                             keep_retweets=args.keep_retweets,
                                             since=since, until=until)
    corpus.write_tweets(args.output, filtered)
    _emit(args, {
        "input": stats.input,
        "skipped_malformed": tweets.skipped,
        "after_keywords": stats.after_keywords,
        "after_exclusions": stats.after_exclusions,
        "after_retweets": stats.after_retweets,
        "after_dedupe": stats.after_dedupe,
        "output": str(args.output),
    })
    return 0


def cmd_split(args) -> int:
    labeled = corpus.load_labeled(args.input)
    split = corpus.stratified_split(labeled, ratios=args.ratios, seed=args.seed)
    outdir = Path(args.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    corpus.write_labeled(outdir / "train.jsonl", split.train)
    corpus.write_labeled(outdir / "validation.jsonl", split.validation)
    corpus.write_labeled(outdir / "test.jsonl", split.test)
    _emit(args, {
        "train": len(split.train),
        "validation": len(split.validation),
        "test": len(split.test),
        "output_dir": str(outdir),
    })
    return 0


def cmd_train(args) -> int:
    labeled = corpus.load_labeled(args.train)
    prep = _preprocess_fn(args)
    docs = [prep(e.tweet.text) for e in labeled]
    labels = _labeled_to_task(labeled, args.task)
    config = models.SvmConfig(C=args.C, class_weight=args.class_weight,
                              ngram_max=args.ngrams, top_n=args.top_n)
    model = models.train_ovo(docs, labels, config,
                             classes=taxonomy.classes_for_task(args.task),
                             seed=args.seed)
    models.save_model(args.model_out, model)
    _emit(args, {
        "examples": len(labeled),
        "classes": len(model.classes),
        "binary_models": len(model.binaries),
        "features": model.feature_model.n_features,
        "model_out": str(args.model_out),
    })
    return 0


def cmd_gridsearch(args) -> int:
    train = corpus.load_labeled(args.train)
    validation = corpus.load_labeled(args.validation)
    prep = _preprocess_fn(args)
    train_docs = [prep(e.tweet.text) for e in train]
    val_docs = [prep(e.tweet.text) for e in validation]
    train_labels = _labeled_to_task(train, args.task)
    val_labels = _labeled_to_task(validation, args.task)

    grid = [models.SvmConfig(C=C, class_weight=cw, ngram_max=ng, top_n=tn)
            for ng in args.ngrams_grid
            for tn in args.top_n_grid
            for C in args.C_grid
            for cw in args.class_weight_grid]
    results = models.grid_search(train_docs, train_labels, val_docs, val_labels,
                                 grid=grid, classes=taxonomy.classes_for_task(args.task),
                                 seed=args.seed, workers=args.workers)
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["rank", "ngram_max", "top_n", "C", "class_weight",
                         "kernel", "macro_f1", "error"])
        for rank, res in enumerate(results, 1):
            cfg = res.config
            writer.writerow([rank, cfg.ngram_max,
                             "none" if cfg.top_n is None else cfg.top_n,
                             cfg.C, cfg.class_weight, "linear",
                             "" if res.macro_f1 is None else repr(res.macro_f1),
                             res.error or ""])
    best = next((r for r in results if r.macro_f1 is not None), None)
    payload = {"configs": len(results), "out": str(args.out)}
    if best:
        payload.update({
            "best_ngram_max": best.config.ngram_max,
            "best_top_n": "none" if best.config.top_n is None else best.config.top_n,
            "best_C": best.config.C,
            "best_class_weight": best.config.class_weight,
            "best_macro_f1": best.macro_f1,
        })
    _emit(args, payload)
    return 0


def _distribution_labels(spec_path: str, task: int) -> list[str]:
    """Expand a class-count fixture into a label sequence."""
    if spec_path in ("task1", "task2"):
        data = json.loads(resources.files("tweetsift.data")
                          .joinpath("eval_class_distributions.json").read_text("utf-8"))
        entry = data[spec_path]
    else:
        with open(spec_path, encoding="utf-8") as fh:
            entry = json.load(fh)[f"task{task}"]
    labels = []
    for cls in entry["classes"]:
        labels.extend([cls] * entry["test_counts"][cls])
    return labels


def cmd_eval(args) -> int:
    classes = taxonomy.classes_for_task(args.task)
    sources = sum(bool(x) for x in (args.model, args.predictions,
                                    args.majority_label, args.majority_train))
    if sources != 1:
        raise SystemExit("choose exactly one of --model, --predictions, "
                         "--majority-label, --majority-train")

    if args.distribution:
        true_labels = _distribution_labels(args.distribution, args.task)
        if not args.majority_label:
            raise SystemExit("--distribution evaluation needs --majority-label")
        predicted = [args.majority_label] * len(true_labels)
        model_name = f"majority({args.majority_label})"
    else:
        if not args.data:
            raise SystemExit("--data is required unless --distribution is used")
        labeled = corpus.load_labeled(args.data)
        true_labels = _labeled_to_task(labeled, args.task)
        if args.model:
            model = models.load_model(args.model)
            prep = _preprocess_fn(args)
            predicted = [model.predict(prep(e.tweet.text)) for e in labeled]
            model_name = "tfidf-svm"
        elif args.predictions:
            level = 6 if args.task == 1 else 2
            pred_set = models.load_external_predictions(args.predictions, level)
            predicted = []
            for e in labeled:
                if e.tweet.id not in pred_set.labels:
                    raise SystemExit(f"missing prediction for id {e.tweet.id!r}")
                predicted.append(pred_set.labels[e.tweet.id])
            model_name = f"external:{Path(args.predictions).name}"
        else:
            label = args.majority_label
            if args.majority_train:
                train = corpus.load_labeled(args.majority_train)
                label = models.train_majority(_labeled_to_task(train, args.task),
                                              classes=classes).label
            predicted = [label] * len(true_labels)
            model_name = f"majority({label})"

    report = evalmod.evaluate(true_labels, predicted, classes=classes,
                              metadata={"model": model_name, "task": args.task,
                                        "seed": args.seed})
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(report.to_dict(), fh, sort_keys=True, indent=2)
            fh.write("\n")
    if args.confusion_csv:
        report.confusion_matrix.write_csv(args.confusion_csv)
    if args.normalized_confusion_csv:
        report.confusion_matrix.write_csv(args.normalized_confusion_csv, normalized=True)
    if not args.json:
        print(evalmod.render_summary_table([report]))
        print()
        print(evalmod.render_class_table(report))
    else:
        print(json.dumps({
            "accuracy": report.accuracy,
            "macro_precision": report.macro_precision,
            "macro_recall": report.macro_recall,
            "macro_f1": report.macro_f1,
            "out": args.out,
        }, sort_keys=True))
    return 0


def cmd_predict(args) -> int:
    model = models.load_model(args.model)
    tweets = corpus.load_tweets(args.input)
    prep = _preprocess_fn(args)
    predictions = {t.id: model.predict(prep(t.text)) for t in tweets}
    models.write_predictions(args.out, predictions)
    _emit(args, {"predicted": len(predictions), "skipped_malformed": tweets.skipped,
                 "out": str(args.out)})
    return 0


def cmd_kappa(args) -> int:
    level = args.level
    set_a = models.load_external_predictions(args.a, level)
    set_b = models.load_external_predictions(args.b, level)
    shared = sorted(set(set_a.labels) & set(set_b.labels))
    if len(shared) < 2:
        raise SystemExit("fewer than two shared ids between the two files")
    labels_a = [set_a.labels[i] for i in shared]
    labels_b = [set_b.labels[i] for i in shared]
    classes = [c for c in taxonomy.classes_for_level(level) if c != args.exclude]
    if args.exclude:
        kept = [(x, y) for x, y in zip(labels_a, labels_b)
                if x != args.exclude and y != args.exclude]
        if len(kept) < 2:
            raise SystemExit("fewer than two shared ids after exclusion")
        labels_a = [x for x, _ in kept]
        labels_b = [y for _, y in kept]
    result = evalmod.cohens_kappa(labels_a, labels_b, classes=tuple(classes),
                                  method=args.method, seed=args.seed)
    _emit(args, {
        "n": result.n, "level": level, "exclude": args.exclude or "",
        "po": result.po, "pe": result.pe, "kappa": result.kappa,
        "ci_low": result.ci[0], "ci_high": result.ci[1], "method": result.method,
    })
    return 0


def cmd_volumes(args) -> int:
    level = args.level
    pred_set = models.load_external_predictions(args.predictions, level)
    tweets = corpus.load_tweets(args.tweets)
    dates: dict[str, date] = {}
    for t in tweets:
        if t.timestamp is None:
            raise SystemExit(f"tweet {t.id!r} has no date")
        dates[t.id] = t.timestamp.date()
    missing = [i for i in pred_set.labels if i not in dates]
    if missing:
        raise SystemExit(f"no tweet record for predicted id {missing[0]!r}")
    series = timeseries.daily_shares(pred_set.labels, dates,
                                     categories=taxonomy.classes_for_level(level))
    series.write_csv(args.out)
    payload = {"days": len(series.rows), "out": str(args.out)}

    if args.recalls:
        with open(args.recalls, encoding="utf-8") as fh:
            report = json.load(fh)
        recalls = {cls: entry["recall"] for cls, entry in report["per_class"].items()}
        raw = timeseries.category_frequencies(pred_set.labels.values())
        relevant = {c: raw.get(c, 0.0) for c in recalls
                    if c not in (taxonomy.IRRELEVANT, taxonomy.OFF_TOPIC)}
        estimate = timeseries.recall_adjust(relevant,
                                            {c: recalls[c] for c in relevant})
        adjusted_out = args.adjusted_out or (str(args.out) + ".adjusted.json")
        with open(adjusted_out, "w", encoding="utf-8") as fh:
            json.dump({
                "raw": estimate.raw,
                "recalls": estimate.recalls,
                "adjusted": estimate.adjusted,
                "residual_irrelevant": estimate.residual_irrelevant,
                "clamped": estimate.clamped,
            }, fh, sort_keys=True, indent=2)
            fh.write("\n")
        payload["adjusted_out"] = adjusted_out

    if args.plot:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, axes = plt.subplots(len(series.categories), 1, sharex=True,
                                 figsize=(10, 2.2 * len(series.categories)))
        if len(series.categories) == 1:
            axes = [axes]
        for ax, category in zip(axes, series.categories):
            points = series.share_series(category)
            ax.plot([p[0] for p in points], [p[1] for p in points], lw=0.8)
            ax.set_ylabel("%")
            ax.set_title(category, fontsize=9, loc="left")
        fig.autofmt_xdate()
        fig.tight_layout()
        fig.savefig(args.plot, dpi=150)
        payload["plot"] = str(args.plot)

    _emit(args, payload)
    return 0


def _read_daily_csv(path) -> timeseries.DailySeries:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        categories = tuple(header[2:])
        rows = []
        for record in reader:
            day = date.fromisoformat(record[0])
            total = int(record[1])
            shares = {c: float(v) for c, v in zip(categories, record[2:])}
            counts = {c: round(total * shares[c] / 100.0) for c in categories}
            rows.append(timeseries.DailyRow(day=day, total=total,
                                            counts=counts, shares=shares))
    return timeseries.DailySeries(categories=categories, rows=rows)


def cmd_peaks(args) -> int:
    series = _read_daily_csv(args.daily)
    categories = args.categories.split(",") if args.categories else list(series.categories)
    all_peaks = []
    for category in categories:
        all_peaks.extend(timeseries.detect_peaks(series, category, k=args.k,
                                                 min_separation=args.min_separation))
    timeseries.write_peaks_csv(args.out, all_peaks)
    _emit(args, {"peaks": len(all_peaks), "out": str(args.out)})
    return 0


def cmd_serve(args) -> int:
    from .annotate.project import AnnotationProject
    from .annotate.service import create_app
    from .annotate.store import LabelStore

    pool = corpus.load_tweets(args.pool)
    store_dir = Path(args.store_dir)
    store_dir.mkdir(parents=True, exist_ok=True)
    store = LabelStore(store_dir / "labels.jsonl")
    project = AnnotationProject(pool, store=store,
                                rounds_path=store_dir / "rounds.jsonl")
    app = create_app(project, static_dir=args.ui)

    import uvicorn
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


# --- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tweetsift",
        description="Posting ingestion, word-frequency classification, evaluation, "
                    "volume monitoring, and the annotation service.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0, help="seed for randomized steps")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--workers", type=int, default=1, help="worker pool size")

    p = sub.add_parser("ingest", help="filter raw postings by keywords/exclusions/retweets/duplicates")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--keywords", help="keyword list file (default: packaged list)")
    p.add_argument("--exclusions", help="exclusion list file (default: packaged list)")
    p.add_argument("--keep-retweets", action="store_true",
                   help="skip the retweet filter (full-volume mode)")
    p.add_argument("--since", help="keep postings on/after this ISO date")
    p.add_argument("--until", help="keep postings on/before this ISO date")
    common(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("split", help="stratified train/validation/test split")
    p.add_argument("--input", required=True, help="labeled JSONL")
    p.add_argument("--output-dir", required=True)
    p.add_argument("--ratios", type=_parse_ratios, default=(0.64, 0.16, 0.20))
    common(p)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("train", help="train the one-vs-one linear SVM on TF-IDF features")
    p.add_argument("--train", required=True, help="labeled JSONL")
    p.add_argument("--model-out", required=True)
    p.add_argument("--task", type=int, choices=(1, 2), required=True)
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--ngrams", type=int, choices=(1, 2), default=2)
    p.add_argument("--top-n", type=_parse_top_n, default=10000,
                   help="feature cap by term frequency ('none' for no cap)")
    p.add_argument("--class-weight", choices=("balanced", "none"), default="balanced")
    _add_preprocess_flags(p)
    common(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("gridsearch", help="rank hyperparameter configs by validation macro-F1")
    p.add_argument("--train", required=True)
    p.add_argument("--validation", required=True)
    p.add_argument("--task", type=int, choices=(1, 2), required=True)
    p.add_argument("--out", required=True, help="CSV of ranked configs")
    p.add_argument("--C-grid", dest="C_grid", default=",".join(map(str, models.DEFAULT_GRID_C)),
                   type=lambda s: [float(x) for x in s.split(",")])
    p.add_argument("--ngrams-grid", dest="ngrams_grid", default=[1, 2],
                   type=lambda s: [int(x) for x in s.split(",")])
    p.add_argument("--top-n-grid", dest="top_n_grid", default=[10000, 25000, 50000, None],
                   type=lambda s: [_parse_top_n(x) for x in s.split(",")])
    p.add_argument("--class-weight-grid", dest="class_weight_grid", default=["balanced", "none"],
                   type=lambda s: s.split(","))
    _add_preprocess_flags(p)
    common(p)
    p.set_defaults(func=cmd_gridsearch)

    p = sub.add_parser("eval", help="evaluate a model, prediction file, or majority baseline")
    p.add_argument("--data", help="labeled JSONL to evaluate on")
    p.add_argument("--task", type=int, choices=(1, 2), required=True)
    p.add_argument("--model", help="model file from 'train'")
    p.add_argument("--predictions", help="external prediction CSV (id,label)")
    p.add_argument("--majority-label", help="evaluate a constant prediction of this class")
    p.add_argument("--majority-train", help="fit the majority baseline on this labeled JSONL")
    p.add_argument("--distribution",
                   help="class-count fixture instead of --data: 'task1', 'task2', or a JSON path")
    p.add_argument("--out", help="metrics JSON path")
    p.add_argument("--confusion-csv")
    p.add_argument("--normalized-confusion-csv",
                   help="row-normalized percentage confusion matrix CSV")
    _add_preprocess_flags(p)
    common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("predict", help="label postings with a trained model")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True, help="tweets JSONL")
    p.add_argument("--out", required=True, help="prediction CSV (id,label)")
    _add_preprocess_flags(p)
    common(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("kappa", help="inter-rater agreement between two label CSVs")
    p.add_argument("--a", required=True, help="first id,label CSV")
    p.add_argument("--b", required=True, help="second id,label CSV")
    p.add_argument("--level", type=int, choices=(12, 6, 2), default=6)
    p.add_argument("--exclude", help="drop items either rater assigned to this class")
    p.add_argument("--method", choices=("asymptotic", "bootstrap"), default="asymptotic")
    common(p)
    p.set_defaults(func=cmd_kappa)

    p = sub.add_parser("volumes", help="daily category shares from predictions")
    p.add_argument("--predictions", required=True, help="prediction CSV (id,label)")
    p.add_argument("--tweets", required=True, help="tweets JSONL with dates")
    p.add_argument("--out", required=True, help="daily share CSV")
    p.add_argument("--level", type=int, choices=(12, 6, 2), default=6)
    p.add_argument("--recalls", help="metrics JSON; adjusts overall shares by per-class recall")
    p.add_argument("--adjusted-out", help="where to write the adjusted-share JSON")
    p.add_argument("--plot", help="write a per-category time-series chart (PNG/SVG)")
    common(p)
    p.set_defaults(func=cmd_volumes)

    p = sub.add_parser("peaks", help="top local maxima per category from a daily CSV")
    p.add_argument("--daily", required=True, help="CSV from 'volumes'")
    p.add_argument("--categories", help="comma-separated (default: all in file)")
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--min-separation", type=int, default=7)
    p.add_argument("--out", required=True)
    common(p)
    p.set_defaults(func=cmd_peaks)

    p = sub.add_parser("serve", help="run the annotation service")
    p.add_argument("--pool", required=True, help="tweets JSONL to label")
    p.add_argument("--store-dir", required=True, help="directory for labels and rounds")
    p.add_argument("--ui", help="static directory with the labeling app")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    common(p)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except Exception as exc:
        if getattr(args, "json", False):
            print(json.dumps({"error": str(exc), "command": args.command},
                             sort_keys=True), file=sys.stderr)
        else:
            print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

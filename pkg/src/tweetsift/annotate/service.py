"""HTTP + JSON API for the labeling workflow, versioned under /api/v1.

The service owns an AnnotationProject and optionally serves the labeling
single-page app as static files from the same origin.
"""

from __future__ import annotations

import tempfile
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel, Field

from .. import taxonomy as tax
from .project import STRATEGIES, AnnotationProject
from .rules import DimensionAnnotation, InvalidAnnotation

API_PREFIX = "/api/v1"


class RoundRequest(BaseModel):
    strategy: str
    targets: dict[str, int] | int
    coders: list[str] = Field(min_length=1)
    seed: int = 0
    predictions: dict[str, str] | None = None
    category_keywords: dict[str, list[str]] | None = None


class LabelRequest(BaseModel):
    coder: str
    tweet_id: str
    dimensions: dict
    client_key: str | None = None


class OverrideRequest(BaseModel):
    adjudicator: str
    tweet_id: str
    category: str


def _round_summary(project: AnnotationProject, round_id: str) -> dict:
    rnd = project.rounds[round_id]
    return {
        "id": rnd.id,
        "strategy": rnd.strategy,
        "targets": rnd.targets,
        "size": len(rnd.tweet_ids),
        "coders": rnd.coders,
        "seed": rnd.seed,
        "status": rnd.status,
        "progress": project.progress(round_id),
    }


def create_app(project: AnnotationProject, static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="tweetsift annotation service")

    @app.get(API_PREFIX + "/taxonomy")
    def taxonomy():
        return {
            "fine_categories": list(tax.FINE_CATEGORIES),
            "levels": {
                "12": list(tax.FINE_CATEGORIES),
                "6": list(tax.TASK1_CLASSES),
                "2": list(tax.TASK2_CLASSES),
            },
            "task1_mapping": {c: tax.to_task1(c) for c in tax.FINE_CATEGORIES},
            "task2_mapping": {c: tax.to_task2(c) for c in tax.FINE_CATEGORIES},
            "guide": tax.CATEGORY_GUIDE,
            "dimensions": {
                "message_type": ["personal_experience", "news_experience",
                                 "bereaved_experience", "case_report",
                                 "call_for_action", "irrelevant"],
                "perspective": ["problem_suffering", "solution_coping", "neither"],
                "person": ["first", "third", "not_applicable"],
                "flags": ["serious", "focus_on_bereaved", "mentions_case"],
            },
        }

    @app.get(API_PREFIX + "/rounds")
    def list_rounds():
        return [_round_summary(project, rid) for rid in sorted(project.rounds)]

    @app.post(API_PREFIX + "/rounds", status_code=201)
    def create_round(request: RoundRequest):
        if request.strategy not in STRATEGIES:
            raise HTTPException(422, f"strategy must be one of {STRATEGIES}")
        try:
            rnd = project.create_round(
                strategy=request.strategy, targets=request.targets,
                coders=request.coders, seed=request.seed,
                predictions=request.predictions,
                category_keywords=request.category_keywords,
            )
        except ValueError as exc:
            raise HTTPException(422, str(exc)) from None
        return _round_summary(project, rnd.id)

    @app.get(API_PREFIX + "/rounds/{round_id}/next")
    def next_task(round_id: str, coder: str = Query(...)):
        try:
            tweet = project.next_task(round_id, coder)
        except ValueError as exc:
            raise HTTPException(404, str(exc)) from None
        progress = project.progress(round_id)[coder]
        if tweet is None:
            return {"done": True, "tweet": None, "progress": progress}
        return {
            "done": False,
            "tweet": {"id": tweet.id, "text": tweet.text},
            "progress": progress,
        }

    @app.post(API_PREFIX + "/rounds/{round_id}/labels", status_code=201)
    def submit_label(round_id: str, request: LabelRequest):
        try:
            dims = DimensionAnnotation.from_dict(request.dimensions)
            record = project.submit_label(round_id, request.coder, request.tweet_id,
                                          dims, client_key=request.client_key)
        except InvalidAnnotation as exc:
            raise HTTPException(422, detail={"field": exc.field, "error": str(exc)}) from None
        except ValueError as exc:
            raise HTTPException(404, str(exc)) from None
        return record.to_dict()

    @app.post(API_PREFIX + "/rounds/{round_id}/override", status_code=201)
    def submit_override(round_id: str, request: OverrideRequest):
        try:
            record = project.submit_override(round_id, request.adjudicator,
                                             request.tweet_id, request.category)
        except ValueError as exc:
            raise HTTPException(422, str(exc)) from None
        return record.to_dict()

    @app.get(API_PREFIX + "/rounds/{round_id}/disagreements")
    def disagreements(round_id: str, level: int = Query(12)):
        try:
            return {"level": level, "items": project.disagreements(round_id, level)}
        except ValueError as exc:
            raise HTTPException(404, str(exc)) from None

    @app.get(API_PREFIX + "/rounds/{round_id}/kappa")
    def kappa(round_id: str, level: int = Query(6), exclude: str | None = None,
              coders: str | None = None):
        pair = tuple(coders.split(",")) if coders else None
        if pair is not None and len(pair) != 2:
            raise HTTPException(422, "coders must name exactly two coders, comma-separated")
        try:
            result = project.live_kappa(round_id, level=level, exclude=exclude, coders=pair)
        except ValueError as exc:
            raise HTTPException(409, str(exc)) from None
        return {
            "level": level,
            "exclude": exclude,
            "kappa": result.kappa,
            "po": result.po,
            "pe": result.pe,
            "ci": list(result.ci),
            "n": result.n,
            "method": result.method,
        }

    @app.get(API_PREFIX + "/export", response_class=PlainTextResponse)
    def export(rounds: str | None = None):
        round_ids = rounds.split(",") if rounds else None
        with tempfile.NamedTemporaryFile("r+", suffix=".csv", delete=True) as tmp:
            project.store.export_csv(tmp.name, round_ids=round_ids)
            tmp.seek(0)
            return tmp.read()

    if static_dir is not None and Path(static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app

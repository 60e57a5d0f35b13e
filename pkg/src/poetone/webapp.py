"""HTTP JSON API over the evaluation service, plus static UI hosting."""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .evalservice import (
    EvalService,
    ExhaustedError,
    InvalidStageError,
    RangeViolationError,
    UnknownEvaluatorError,
    UnknownTrialError,
)


class RegisterBody(BaseModel):
    evaluator_id: str


class ChoiceBody(BaseModel):
    choice: str
    confidence: int


class RatingsBody(BaseModel):
    thematic_faithfulness: int
    artistic_merit: int
    overall_quality: int


def create_app(service: EvalService, static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="poetone human evaluation", docs_url=None, redoc_url=None)

    @app.exception_handler(RangeViolationError)
    async def _range(request, exc):  # noqa: ANN001
        raise HTTPException(status_code=422, detail=str(exc))

    @app.post("/api/evaluators")
    def register(body: RegisterBody):
        try:
            return service.register_evaluator(body.evaluator_id)
        except RangeViolationError as exc:
            raise HTTPException(status_code=422, detail=str(exc))

    @app.get("/api/trials/next")
    def next_trial(evaluator: str = Query(...)):
        try:
            return {"trial": service.next_trial(evaluator)}
        except UnknownEvaluatorError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        except ExhaustedError:
            return {
                "exhausted": True,
                "completed": service.completed_count(evaluator),
            }

    @app.post("/api/trials/{trial_id}/choice")
    def submit_choice(trial_id: str, body: ChoiceBody):
        try:
            return service.submit_choice(trial_id, body.choice, body.confidence)
        except UnknownTrialError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except InvalidStageError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except RangeViolationError as exc:
            raise HTTPException(status_code=422, detail=str(exc))

    @app.post("/api/trials/{trial_id}/ratings")
    def submit_ratings(trial_id: str, body: RatingsBody):
        try:
            return service.submit_ratings(
                trial_id,
                thematic_faithfulness=body.thematic_faithfulness,
                artistic_merit=body.artistic_merit,
                overall_quality=body.overall_quality,
            )
        except UnknownTrialError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except InvalidStageError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except RangeViolationError as exc:
            raise HTTPException(status_code=422, detail=str(exc))

    @app.get("/api/summary")
    def summary():
        return service.summary()

    @app.get("/api/export", response_class=PlainTextResponse)
    def export():
        return "\n".join(service.export_lines()) + "\n"

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")
    return app

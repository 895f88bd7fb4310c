"""Stateless JSON service over the planning, decision, and calibration layers.

Every response is a pure function of the request body; models travel inline
(no server-side persistence). Numeric payloads are exactly the CLI's machine
format. Field-level schema violations return 400; bodies that parse but
describe an inconsistent model or dataset return 422.
"""

from __future__ import annotations

import json
import os
from typing import Any, Literal

import click
import numpy as np
from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field, model_validator

from . import calibration as calib
from . import decision, modelio, planner, serialize
from .dist import EmpiricalSample
from .errors import MissingOptionError, QuotaplanError


class ComponentSpec(BaseModel):
    pmf: dict[int, float] | None = None
    history: list[int] | dict[int, int] | None = None
    experts: list[dict[str, Any]] | None = None

    @model_validator(mode="after")
    def one_form(self):
        given = [
            name
            for name in ("pmf", "history", "experts")
            if getattr(self, name) is not None
        ]
        if len(given) != 1:
            raise ValueError(
                f"give exactly one of pmf/history/experts, found {given or 'none'}"
            )
        return self

    def as_spec(self) -> dict[str, Any]:
        return self.model_dump(exclude_none=True)


class AcceptanceSpec(BaseModel):
    fixed: float | None = Field(default=None, ge=0.0, le=1.0)
    history: list[tuple[int, int]] | None = None
    prior: tuple[float, float] | None = None
    source: Literal["fixed", "pooled-mle", "beta-posterior"] | None = None

    @model_validator(mode="after")
    def one_form(self):
        if (self.fixed is None) == (self.history is None):
            raise ValueError("give exactly one of 'fixed' or 'history'")
        return self

    def as_spec(self) -> dict[str, Any]:
        return self.model_dump(exclude_none=True)


class ModelSpecBody(BaseModel):
    schema_version: Literal[1] = 1
    ta_positions: int = Field(ge=0)
    current_students: int = Field(ge=0)
    ra_internal: ComponentSpec
    ra_external: ComponentSpec
    graduating: ComponentSpec
    leaving: ComponentSpec
    acceptance: AcceptanceSpec
    extra: int = 0

    def build(self) -> planner.PlanningModel:
        spec = {
            "schema_version": self.schema_version,
            "ta_positions": self.ta_positions,
            "current_students": self.current_students,
            "ra_internal": self.ra_internal.as_spec(),
            "ra_external": self.ra_external.as_spec(),
            "graduating": self.graduating.as_spec(),
            "leaving": self.leaving.as_spec(),
            "acceptance": self.acceptance.as_spec(),
            "extra": self.extra,
        }
        return modelio.model_from_spec(spec)


class EngineOpts(BaseModel):
    engine: Literal["exact", "mc"] = "exact"
    draws: int = Field(default=planner.DEFAULT_MC_DRAWS, ge=1)
    seed: int | None = None

    @model_validator(mode="after")
    def mc_needs_seed(self):
        if self.engine == "mc" and self.seed is None:
            raise ValueError("Monte Carlo requests must carry an explicit seed")
        return self

    def resolve(self) -> planner.Engine:
        if self.engine == "exact":
            return planner.ExactEngine()
        return planner.MonteCarloEngine(draws=self.draws, seed=self.seed)


class ScanRequest(EngineOpts):
    model: ModelSpecBody
    offers: list[int] = Field(min_length=1)


class ForecastRequest(EngineOpts):
    model: ModelSpecBody
    offers: int = Field(ge=0)


class BreakEvenRequest(BaseModel):
    model: ModelSpecBody
    min: int = 0
    max: int = 60


class SummarizeRequest(BaseModel):
    sample: list[int] = Field(min_length=1)
    thresholds: list[float] = []
    suppression: float = Field(default=0.05, ge=0.0)


class ProductRequest(BaseModel):
    model: ModelSpecBody | None = None
    offers: int | None = Field(default=None, ge=0)
    sample: list[int] | None = None
    user: Literal[
        "low-stakes",
        "general-assessor",
        "change-assessor",
        "risk-avoider",
        "decision-theorist",
    ]
    alpha: float | None = None
    cost_under: float | None = None
    cost_over: float | None = None
    observed: float | None = None
    interval_level: float = 0.8

    @model_validator(mode="after")
    def one_source(self):
        if (self.model is None) == (self.sample is None):
            raise ValueError("give exactly one of 'model' or 'sample'")
        if self.model is not None and self.offers is None:
            raise ValueError("'offers' is required with a model")
        if (self.cost_under is None) != (self.cost_over is None):
            raise ValueError("cost_under and cost_over go together")
        return self


class RecordBody(BaseModel):
    observed: float
    pmf: dict[int, float] | None = None
    sample: list[int] | None = None
    percentiles: dict[str, int] | None = None
    events: list[tuple[float, float]] = []

    @model_validator(mode="after")
    def one_forecast(self):
        given = [
            name
            for name in ("pmf", "sample", "percentiles")
            if getattr(self, name) is not None
        ]
        if len(given) != 1:
            raise ValueError(
                f"give exactly one of pmf/sample/percentiles, found {given or 'none'}"
            )
        return self

    def build(self, index: int) -> calib.ForecastRecord:
        where = f"records[{index}]"
        if self.pmf is not None:
            forecast = modelio.parse_pmf_mapping(
                {str(k): v for k, v in self.pmf.items()}, where
            )
        elif self.sample is not None:
            forecast = EmpiricalSample(self.sample)
        else:
            pct = sorted(
                (int(name.lstrip("p")), value)
                for name, value in self.percentiles.items()
            )
            forecast = modelio.pmf_from_percentiles(
                [p / 100 for p, _ in pct], [v for _, v in pct], where
            )
        return calib.ForecastRecord(
            forecast=forecast, observed=self.observed, events=tuple(self.events)
        )


class CalibrateRequest(BaseModel):
    records: list[RecordBody] = Field(min_length=1)
    levels: list[tuple[float, float]] = [(0.1, 0.9)]
    bins: int = Field(default=10, ge=1)
    seed: int = 0


class LoadModelRequest(BaseModel):
    content: str


def create_app() -> FastAPI:
    app = FastAPI(title="quotaplan", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[os.environ.get("QUOTAPLAN_CORS_ORIGIN", "*")],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(RequestValidationError)
    async def schema_errors(_req: Request, exc: RequestValidationError):
        errors = [
            {
                "field": ".".join(str(loc) for loc in err["loc"] if loc != "body"),
                "message": err["msg"],
            }
            for err in exc.errors()
        ]
        return JSONResponse(status_code=400, content={"errors": errors})

    @app.exception_handler(QuotaplanError)
    async def semantic_errors(_req: Request, exc: QuotaplanError):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.get("/v1/health")
    def health():
        return {"status": "ok"}

    @app.post("/v1/scan")
    def scan(req: ScanRequest):
        engine = req.resolve()
        rows = planner.scan(req.model.build(), req.offers, engine)
        return serialize.scan_payload(rows, engine)

    @app.post("/v1/forecast")
    def forecast(req: ForecastRequest):
        fc = planner.forecast_for_engine(req.model.build(), req.offers, req.resolve())
        return serialize.forecast_payload(fc)

    @app.post("/v1/break-even")
    def breakeven(req: BreakEvenRequest):
        model = req.model.build()
        offers = planner.break_even(model, req.min, req.max)
        p = (
            planner.lost_positions_exact(model, offers).p_nonpos()
            if offers is not None
            else None
        )
        return serialize.break_even_payload(offers, p)

    @app.post("/v1/summarize")
    def summarize(req: SummarizeRequest):
        dist = EmpiricalSample(np.asarray(req.sample))
        summary = decision.public_summary(
            dist, thresholds=req.thresholds, suppression=req.suppression
        )
        return serialize.summary_payload(summary, req.suppression)

    @app.post("/v1/product")
    def product(req: ProductRequest):
        if req.model is not None:
            dist = planner.lost_positions_exact(
                req.model.build(), req.offers
            ).distribution
        else:
            dist = EmpiricalSample(np.asarray(req.sample))
        loss = None
        if req.cost_under is not None:
            loss = decision.LossSpec(cost_under=req.cost_under, cost_over=req.cost_over)
        try:
            result = decision.product_for_user(
                dist,
                decision.UserType(req.user),
                alpha=req.alpha,
                loss=loss,
                interval_level=req.interval_level,
                observed=req.observed,
            )
        except MissingOptionError as exc:
            return JSONResponse(
                status_code=400,
                content={"errors": [{"field": exc.option, "message": str(exc)}]},
            )
        return serialize.product_payload(result, req.user)

    @app.post("/v1/calibrate")
    def calibrate(req: CalibrateRequest):
        records = [body.build(i) for i, body in enumerate(req.records)]
        report = calib.calibration_report(
            records, levels=req.levels, bins=req.bins, seed=req.seed
        )
        return serialize.calibration_payload(report, req.seed)

    @app.post("/v1/load-model")
    def load_model(req: LoadModelRequest):
        try:
            spec = json.loads(req.content)
        except json.JSONDecodeError as exc:
            return JSONResponse(
                status_code=422,
                content={"detail": f"content:{exc.lineno}:{exc.colno}: {exc.msg}"},
            )
        model = modelio.model_from_spec(spec)
        return {
            "schema_version": serialize.PAYLOAD_VERSION,
            "model": modelio.model_to_spec(model),
        }

    return app


app = create_app()


@click.command()
@click.option("--host", default=None, help="Bind address (default from QUOTAPLAN_ADDR).")
@click.option("--port", type=int, default=None, help="Port (default from QUOTAPLAN_ADDR).")
def main(host, port):
    """Run the JSON service."""
    import uvicorn

    addr = os.environ.get("QUOTAPLAN_ADDR", "127.0.0.1:8000")
    env_host, _, env_port = addr.rpartition(":")
    uvicorn.run(
        app,
        host=host or env_host or "127.0.0.1",
        port=port if port is not None else int(env_port or 8000),
    )


if __name__ == "__main__":
    main()

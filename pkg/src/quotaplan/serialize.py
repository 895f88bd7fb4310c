"""Machine-readable payloads shared by the CLI and the HTTP service.

Both interfaces emit these exact structures, so cross-interface parity is
structural rather than maintained by hand. All payloads are plain dicts of
JSON-compatible values and carry schema_version plus engine metadata.
"""

from __future__ import annotations

from typing import Any

import numpy as np

from .calibration import CalibrationReport
from .decision import (
    Alarm,
    Bound,
    DecisionProduct,
    Interval,
    OptimalPoint,
    Point,
    PublicSummary,
)
from .dist import DiscretePMF, EmpiricalSample
from .planner import Engine, ExactEngine, LostPositionsForecast, ScanRow

PAYLOAD_VERSION = 1


def engine_meta(engine: Engine) -> dict[str, Any]:
    if isinstance(engine, ExactEngine):
        return {"engine": "exact"}
    return {"engine": "mc", "draws": engine.draws, "seed": engine.seed}


def _level_key(level: float) -> str:
    return f"p{round(level * 100)}"


def scan_payload(rows: list[ScanRow], engine: Engine) -> dict[str, Any]:
    return {
        "schema_version": PAYLOAD_VERSION,
        **engine_meta(engine),
        "rows": [
            {
                "offers": row.offers,
                "percentiles": {
                    _level_key(lvl): v for lvl, v in row.percentiles.items()
                },
                "p_nonpos": row.p_nonpos,
                "label": row.label.value,
            }
            for row in rows
        ],
    }


def distribution_payload(dist: DiscretePMF | EmpiricalSample) -> dict[str, Any]:
    """Exact PMFs as value->probability; samples binned to value->count."""
    if isinstance(dist, DiscretePMF):
        return {
            "kind": "pmf",
            "probs": {str(v): p for v, p in zip(dist.support, dist.probs)},
        }
    values, counts = np.unique(dist.draws, return_counts=True)
    return {
        "kind": "binned",
        "counts": {str(int(v)): int(c) for v, c in zip(values, counts)},
        "n": int(dist.draws.size),
    }


def forecast_payload(fc: LostPositionsForecast) -> dict[str, Any]:
    return {
        "schema_version": PAYLOAD_VERSION,
        **engine_meta(fc.engine),
        "offers": fc.offers,
        "p_nonpos": fc.p_nonpos(),
        "distribution": distribution_payload(fc.distribution),
    }


def break_even_payload(offers: int | None, p_nonpos: float | None) -> dict[str, Any]:
    return {
        "schema_version": PAYLOAD_VERSION,
        "engine": "exact",
        "found": offers is not None,
        "offers": offers,
        "p_nonpos": p_nonpos,
    }


def summary_payload(summary: PublicSummary, suppression: float) -> dict[str, Any]:
    return {
        "schema_version": PAYLOAD_VERSION,
        "engine": "exact",
        "p10": summary.p10,
        "p50": summary.p50,
        "p90": summary.p90,
        "suppression": suppression,
        "exceedances": [
            {
                "threshold": e.threshold,
                "probability": e.probability,
                "suppressed": e.suppressed,
            }
            for e in summary.exceedances
        ],
    }


def product_payload(product: DecisionProduct, user: str) -> dict[str, Any]:
    body: dict[str, Any] = {
        "schema_version": PAYLOAD_VERSION,
        "engine": "exact",
        "user": user,
    }
    if isinstance(product, Point):
        body["product"] = {"type": "point", "value": product.value}
    elif isinstance(product, Interval):
        body["product"] = {
            "type": "interval",
            "lo": product.lo,
            "hi": product.hi,
            "level": product.level,
        }
    elif isinstance(product, Bound):
        body["product"] = {
            "type": "bound",
            "value": product.value,
            "alpha": product.alpha,
        }
    elif isinstance(product, Alarm):
        body["product"] = {
            "type": "alarm",
            "status": product.status.value,
            "lo": product.lo,
            "hi": product.hi,
            "observed": product.observed,
        }
    elif isinstance(product, OptimalPoint):
        body["product"] = {
            "type": "optimal-point",
            "value": product.value,
            "tau": product.tau,
        }
    else:
        raise TypeError(f"unknown decision product {product!r}")
    return body


def calibration_payload(report: CalibrationReport, seed: int) -> dict[str, Any]:
    return {
        "schema_version": PAYLOAD_VERSION,
        "engine": "exact",
        "seed": seed,
        "n_records": report.n_records,
        "n_events": report.n_events,
        "levels": [
            {
                "lo": lo,
                "hi": hi,
                "coverage": report.coverage[(lo, hi)],
                "attainable": report.attainable[(lo, hi)],
                "sharpness": report.sharpness[(lo, hi)],
            }
            for lo, hi in report.coverage
        ],
        "pit_counts": list(report.pit_counts),
        "reliability": [
            {
                "center": r.center,
                "mean_forecast": r.mean_forecast,
                "observed_freq": r.observed_freq,
                "count": r.count,
            }
            for r in report.reliability
        ],
    }

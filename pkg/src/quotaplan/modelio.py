"""Loading, validation, and assembly of model specs and data files.

Model specs are JSON documents (schema documented in docs/model-spec.md,
versioned via schema_version). Each uncertain component may be given as an
explicit pmf, as historical observations, or as per-expert elicited pmfs
that are convolved into the component's distribution. Histories and records
travel as delimiter-separated tabular files.

Every loading step that derives a distribution is logged, and every error
names the offending field or row; malformed probabilities are never
silently coerced.
"""

from __future__ import annotations

import csv
import json
import logging
import re
from pathlib import Path
from typing import Any, Mapping

from .calibration import ForecastRecord
from .dist import DiscretePMF, EmpiricalSample, convolve, pmf_from_counts
from .errors import (
    EmptyDataError,
    ParseError,
    QuotaplanError,
    SchemaError,
    ValidationError,
)
from .planner import PlanningModel, acceptance_rate

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1

_COMPONENTS = ("ra_internal", "ra_external", "graduating", "leaving")
_PCT_COLUMN = re.compile(r"^p(\d{1,2})$")


def _require(mapping: Mapping[str, Any], key: str, where: str) -> Any:
    if key not in mapping:
        raise SchemaError(f"{where}: missing required field '{key}'")
    return mapping[key]


def _int_field(mapping: Mapping[str, Any], key: str, where: str) -> int:
    value = _require(mapping, key, where)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"{where}.{key}: expected an integer, got {value!r}")
    return value


def parse_pmf_mapping(raw: Any, where: str) -> DiscretePMF:
    if not isinstance(raw, Mapping) or not raw:
        raise ValidationError(f"{where}: pmf must be a non-empty value->probability map")
    mapping = {}
    for k, p in raw.items():
        try:
            v = int(k)
        except (TypeError, ValueError):
            raise ValidationError(f"{where}: pmf key {k!r} is not an integer")
        if not isinstance(p, (int, float)) or isinstance(p, bool):
            raise ValidationError(f"{where}: pmf value for {k!r} is not a number")
        mapping[v] = float(p)
    try:
        return DiscretePMF.from_mapping(mapping)
    except QuotaplanError as exc:
        raise ValidationError(f"{where}: {exc}") from exc


def _parse_history(raw: Any, where: str) -> DiscretePMF:
    """History as either raw yearly values or a value->count map."""
    if isinstance(raw, list):
        if not raw:
            raise ValidationError(f"{where}: history list is empty")
        counts: dict[int, int] = {}
        for i, v in enumerate(raw):
            if isinstance(v, bool) or not isinstance(v, int):
                raise ValidationError(f"{where}[{i}]: expected an integer, got {v!r}")
            counts[v] = counts.get(v, 0) + 1
    elif isinstance(raw, Mapping):
        counts = {}
        for k, c in raw.items():
            try:
                counts[int(k)] = int(c)
            except (TypeError, ValueError):
                raise ValidationError(f"{where}: bad count entry {k!r}: {c!r}")
    else:
        raise ValidationError(f"{where}: history must be a list or a value->count map")
    try:
        return pmf_from_counts(counts)
    except QuotaplanError as exc:
        raise ValidationError(f"{where}: {exc}") from exc


def _parse_component(section: Any, where: str) -> DiscretePMF:
    """One uncertain component: explicit pmf, history, or expert elicitations."""
    if not isinstance(section, Mapping):
        raise SchemaError(f"{where}: expected an object with one of pmf/history/experts")
    forms = [k for k in ("pmf", "history", "experts") if k in section]
    if len(forms) != 1:
        raise SchemaError(
            f"{where}: give exactly one of pmf/history/experts, found {forms or 'none'}"
        )
    form = forms[0]
    if form == "pmf":
        out = parse_pmf_mapping(section["pmf"], f"{where}.pmf")
        log.info("%s: explicit pmf over %d values", where, len(out.support))
        return out
    if form == "history":
        out = _parse_history(section["history"], f"{where}.history")
        log.info("%s: empirical pmf from history (%d values)", where, len(out.support))
        return out
    experts = section["experts"]
    if not isinstance(experts, list) or not experts:
        raise ValidationError(f"{where}.experts: expected a non-empty list")
    pmfs = []
    for i, entry in enumerate(experts):
        if not isinstance(entry, Mapping):
            raise ValidationError(f"{where}.experts[{i}]: expected an object")
        expert_id = str(entry.get("id", f"expert-{i}"))
        try:
            pmfs.append(parse_pmf_mapping(_require(entry, "pmf", f"{where}.experts[{i}]"),
                                   f"{where}.experts[{i}]"))
        except ValidationError as exc:
            raise ValidationError(f"expert '{expert_id}': {exc}") from exc
    out = convolve(pmfs, [1] * len(pmfs))
    log.info("%s: convolved %d expert distributions", where, len(pmfs))
    return out


def _parse_acceptance(section: Any, where: str) -> tuple[float, str]:
    if not isinstance(section, Mapping):
        raise SchemaError(f"{where}: expected an object with 'fixed' or 'history'")
    if ("fixed" in section) == ("history" in section):
        raise SchemaError(f"{where}: give exactly one of 'fixed' or 'history'")
    if "fixed" in section:
        p = section["fixed"]
        if not isinstance(p, (int, float)) or isinstance(p, bool) or not 0 <= p <= 1:
            raise ValidationError(f"{where}.fixed: expected a probability, got {p!r}")
        # normalized dumps annotate where a fixed value originally came from
        source = section.get("source", "fixed")
        if source not in ("fixed", "pooled-mle", "beta-posterior"):
            raise ValidationError(f"{where}.source: unknown provenance {source!r}")
        log.info("%s: fixed at %g", where, p)
        return float(p), source
    history = section["history"]
    if not isinstance(history, list):
        raise ValidationError(f"{where}.history: expected a list of [offers, acceptances]")
    pairs = []
    for i, item in enumerate(history):
        if not isinstance(item, (list, tuple)) or len(item) != 2:
            raise ValidationError(f"{where}.history[{i}]: expected [offers, acceptances]")
        pairs.append((int(item[0]), int(item[1])))
    prior = section.get("prior")
    if prior is not None:
        if not isinstance(prior, (list, tuple)) or len(prior) != 2:
            raise ValidationError(f"{where}.prior: expected [a, b]")
        prior = (float(prior[0]), float(prior[1]))
    try:
        rate = acceptance_rate(pairs, prior=prior)
    except QuotaplanError as exc:
        raise ValidationError(f"{where}.history: {exc}") from exc
    source = "beta-posterior" if prior is not None else "pooled-mle"
    log.info("%s: %s estimate %g from %d cohorts", where, source, rate, len(pairs))
    return rate, source


def model_from_spec(spec: Mapping[str, Any]) -> PlanningModel:
    """Assemble a PlanningModel from a parsed spec document."""
    if not isinstance(spec, Mapping):
        raise SchemaError("model spec: top level must be an object")
    version = _require(spec, "schema_version", "model spec")
    if version != SCHEMA_VERSION:
        raise SchemaError(
            f"model spec: schema_version {version!r} unsupported (expected {SCHEMA_VERSION})"
        )
    known = {
        "schema_version",
        "ta_positions",
        "current_students",
        "acceptance",
        "extra",
        *_COMPONENTS,
    }
    unknown = set(spec) - known
    if unknown:
        raise SchemaError(f"model spec: unknown fields {sorted(unknown)}")

    components = {
        name: _parse_component(_require(spec, name, "model spec"), name)
        for name in _COMPONENTS
    }
    rate, source = _parse_acceptance(_require(spec, "acceptance", "model spec"), "acceptance")
    extra = spec.get("extra", 0)
    if isinstance(extra, bool) or not isinstance(extra, int):
        raise ValidationError(f"extra: expected an integer, got {extra!r}")
    try:
        return PlanningModel(
            ta_positions=_int_field(spec, "ta_positions", "model spec"),
            current_students=_int_field(spec, "current_students", "model spec"),
            ra_internal=components["ra_internal"],
            ra_external=components["ra_external"],
            graduating=components["graduating"],
            leaving=components["leaving"],
            acceptance_prob=rate,
            acceptance_source=source,
            extra=extra,
        )
    except QuotaplanError as exc:
        raise ValidationError(f"model spec: {exc}") from exc


def load_model(path: str | Path) -> PlanningModel:
    """Parse and validate a model spec file."""
    text = Path(path).read_text()
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    model = model_from_spec(spec)
    log.info("loaded model from %s", path)
    return model


def model_to_spec(model: PlanningModel) -> dict[str, Any]:
    """Normalized spec document (explicit pmfs, fixed acceptance).

    Loading the result reproduces the model exactly; elicitation-level
    detail (individual experts, raw histories) is already folded in.
    """
    def pmf_obj(pmf: DiscretePMF) -> dict[str, Any]:
        return {"pmf": {str(v): p for v, p in zip(pmf.support, pmf.probs)}}

    spec: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "ta_positions": model.ta_positions,
        "current_students": model.current_students,
        "ra_internal": pmf_obj(model.ra_internal),
        "ra_external": pmf_obj(model.ra_external),
        "graduating": pmf_obj(model.graduating),
        "leaving": pmf_obj(model.leaving),
        "acceptance": {
            "fixed": model.acceptance_prob,
            "source": model.acceptance_source,
        },
    }
    if model.extra:
        spec["extra"] = model.extra
    return spec


def save_model(model: PlanningModel, path: str | Path):
    Path(path).write_text(json.dumps(model_to_spec(model), indent=2) + "\n")


def _parse_tokens(text: str, caster, where: str):
    try:
        return [caster(tok) for tok in text.split()]
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{where}: {exc}") from exc


def _parse_pair_tokens(text: str, where: str) -> list[tuple[float, float]]:
    pairs = []
    for tok in text.split():
        left, sep, right = tok.partition(":")
        if not sep:
            raise ValidationError(f"{where}: expected 'value:number' tokens, got {tok!r}")
        try:
            pairs.append((float(left), float(right)))
        except ValueError as exc:
            raise ValidationError(f"{where}: {exc}") from exc
    return pairs


def pmf_from_percentiles(levels: list[float], values: list[int], where: str) -> DiscretePMF:
    """Coarsest distribution consistent with declared quantiles.

    Mass l1 at v1, l_i - l_{i-1} at each v_i, and the remaining 1 - lk lumped
    at vk; nearest-rank quantiles of the result reproduce the declared values
    at the declared levels. Only those levels are trustworthy downstream.
    """
    if any(values[i] > values[i + 1] for i in range(len(values) - 1)):
        raise ValidationError(f"{where}: percentile values must be non-decreasing")
    mapping: dict[int, float] = {}
    prev = 0.0
    for lvl, v in zip(levels, values):
        mapping[v] = mapping.get(v, 0.0) + (lvl - prev)
        prev = lvl
    mapping[values[-1]] = mapping.get(values[-1], 0.0) + (1.0 - prev)
    try:
        return DiscretePMF.from_mapping(mapping)
    except QuotaplanError as exc:
        raise ValidationError(f"{where}: {exc}") from exc


def load_forecast_records(path: str | Path) -> list[ForecastRecord]:
    """Read verification records from a CSV file.

    Required column: observed. The forecast comes from exactly one of: a
    'pmf' column ("value:prob ..." tokens), a 'sample' column ("v v v ..."),
    or percentile columns p10/p33/... (two or more). An optional 'events'
    column carries "threshold:probability" tokens.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise EmptyDataError(f"{path}: file is empty")
        fields = [f.strip() for f in reader.fieldnames]
        if "observed" not in fields:
            raise SchemaError(f"{path}: missing required column 'observed'")
        pct_columns = sorted(
            ((int(m.group(1)), name) for name in fields if (m := _PCT_COLUMN.match(name))),
        )
        forecast_forms = [form for form in ("pmf", "sample") if form in fields]
        if pct_columns:
            forecast_forms.append("percentiles")
        if len(forecast_forms) != 1:
            raise SchemaError(
                f"{path}: need exactly one forecast form (pmf, sample, or pNN columns), "
                f"found {forecast_forms or 'none'}"
            )
        form = forecast_forms[0]
        if form == "percentiles" and len(pct_columns) < 2:
            raise SchemaError(f"{path}: need at least two percentile columns")

        records = []
        for row_no, row in enumerate(reader, start=2):
            where = f"{path}:row {row_no}"
            raw_observed = (row.get("observed") or "").strip()
            if not raw_observed:
                raise ValidationError(f"{where}: observed is empty")
            try:
                observed = float(raw_observed)
            except ValueError as exc:
                raise ValidationError(f"{where}: observed: {exc}") from exc

            if form == "pmf":
                pairs = _parse_pair_tokens(row.get("pmf") or "", f"{where}: pmf")
                if not pairs:
                    raise ValidationError(f"{where}: pmf is empty")
                try:
                    forecast = DiscretePMF.from_mapping(
                        {int(v): p for v, p in pairs}
                    )
                except QuotaplanError as exc:
                    raise ValidationError(f"{where}: pmf: {exc}") from exc
            elif form == "sample":
                draws = _parse_tokens(row.get("sample") or "", int, f"{where}: sample")
                if not draws:
                    raise ValidationError(f"{where}: sample is empty")
                forecast = EmpiricalSample(draws)
            else:
                levels = [pct / 100 for pct, _ in pct_columns]
                try:
                    values = [int(row[name]) for _, name in pct_columns]
                except (TypeError, ValueError) as exc:
                    raise ValidationError(f"{where}: percentiles: {exc}") from exc
                forecast = pmf_from_percentiles(levels, values, where)

            events = tuple(
                _parse_pair_tokens(row.get("events") or "", f"{where}: events")
            )
            try:
                records.append(
                    ForecastRecord(forecast=forecast, observed=observed, events=events)
                )
            except QuotaplanError as exc:
                raise ValidationError(f"{where}: {exc}") from exc

    if not records:
        raise EmptyDataError(f"{path}: no data rows")
    log.info("loaded %d forecast records from %s", len(records), path)
    return records


def load_sample(path: str | Path) -> EmpiricalSample:
    """Read an observed sample: whitespace-separated integers, # comments."""
    path = Path(path)
    draws: list[int] = []
    for line_no, line in enumerate(path.read_text().splitlines(), start=1):
        bare = line.split("#", 1)[0].strip()
        if not bare:
            continue
        for tok in bare.split():
            try:
                draws.append(int(tok))
            except ValueError as exc:
                raise ParseError(f"{path}:{line_no}: {exc}") from exc
    if not draws:
        raise EmptyDataError(f"{path}: no sample values")
    return EmpiricalSample(draws)

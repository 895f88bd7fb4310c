"""Forecast verification: coverage, randomized PIT, reliability, sharpness.

A forecast system is calibrated when stated probabilities match long-run
frequencies, and useful when its intervals are narrow. These diagnostics
operate on ForecastRecord streams: a predictive distribution per record plus
the eventually observed value, optionally with event-probability statements
to verify.

Discrete forecasts need two departures from the continuous textbook recipe:
nearest-rank intervals over-cover their nominal level, so reports carry the
exact attainable coverage next to the empirical one, and the probability
integral transform is randomized uniformly across each CDF jump.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dist import Dist, quantile
from .errors import DomainError, EmptyDataError
from .rng import derive_seed, generator

DEFAULT_PIT_BINS = 10
DEFAULT_LEVELS = ((0.10, 0.90),)


@dataclass(frozen=True)
class ForecastRecord:
    """One verification unit: a forecast, what happened, and event claims."""

    forecast: Dist
    observed: float
    events: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        for threshold, prob in self.events:
            if not 0.0 <= prob <= 1.0:
                raise DomainError(
                    f"event probability {prob!r} for threshold {threshold} outside [0, 1]"
                )


@dataclass(frozen=True)
class ReliabilityBin:
    center: float
    mean_forecast: float | None
    observed_freq: float | None
    count: int


@dataclass(frozen=True)
class CalibrationReport:
    coverage: dict[tuple[float, float], float]
    attainable: dict[tuple[float, float], float]
    pit_counts: tuple[int, ...]
    reliability: tuple[ReliabilityBin, ...]
    sharpness: dict[tuple[float, float], float]
    n_records: int
    n_events: int


def _check_levels(lo: float, hi: float):
    if not 0.0 < lo < hi < 1.0:
        raise DomainError(f"levels ({lo}, {hi}) must satisfy 0 < lo < hi < 1")


def interval_coverage(
    records: Sequence[ForecastRecord], lo_level: float, hi_level: float
) -> float:
    """Fraction of observations inside their own [lo_level, hi_level] interval."""
    if not records:
        raise EmptyDataError("no forecast records")
    _check_levels(lo_level, hi_level)
    hits = sum(
        1
        for r in records
        if quantile(r.forecast, lo_level) <= r.observed <= quantile(r.forecast, hi_level)
    )
    return hits / len(records)


def attainable_coverage(
    records: Sequence[ForecastRecord], lo_level: float, hi_level: float
) -> float:
    """Mean forecast probability mass inside the nearest-rank interval.

    This is the coverage a perfectly calibrated discrete forecaster would
    actually achieve; it is >= the nominal hi - lo because nearest-rank
    endpoints sit on CDF jumps.
    """
    if not records:
        raise EmptyDataError("no forecast records")
    _check_levels(lo_level, hi_level)
    masses = []
    for r in records:
        lo_q = quantile(r.forecast, lo_level)
        hi_q = quantile(r.forecast, hi_level)
        masses.append(r.forecast.cdf(hi_q) - r.forecast.cdf_below(lo_q))
    return float(np.mean(masses))


def pit_values(records: Sequence[ForecastRecord], seed: int) -> np.ndarray:
    """Randomized PIT value per record, reproducible per (seed, record index).

    For observation y the PIT is uniform on (P(X < y), P(X <= y)], drawn from
    the stream derive_seed(seed, index); records on a CDF jump randomize
    across it, observations outside the support collapse to 0 or 1.
    """
    if not records:
        raise EmptyDataError("no forecast records")
    out = np.empty(len(records))
    for i, r in enumerate(records):
        a = r.forecast.cdf_below(r.observed)
        b = r.forecast.cdf(r.observed)
        v = 1.0 - generator(derive_seed(seed, i)).random()
        out[i] = a + (b - a) * v
    return out


def pit_ranks(
    records: Sequence[ForecastRecord], bins: int = DEFAULT_PIT_BINS, seed: int = 0
) -> tuple[int, ...]:
    """Histogram of randomized PIT values over equal bins of (0, 1]."""
    if bins < 1:
        raise DomainError("bins must be >= 1")
    u = pit_values(records, seed)
    idx = np.ceil(u * bins).astype(int) - 1
    idx = np.clip(idx, 0, bins - 1)
    counts = np.bincount(idx, minlength=bins)
    return tuple(int(c) for c in counts)


def reliability(
    entries: Sequence[tuple[float, int]], bin_edges: Sequence[float] | None = None
) -> tuple[ReliabilityBin, ...]:
    """Reliability table for (forecast probability, binary outcome) pairs.

    Bins are [e0, e1), ..., [e_{k-1}, e_k] so they partition [0, 1] and each
    entry lands in exactly one. Empty bins keep count 0 and no statistics.
    """
    if not entries:
        raise EmptyDataError("no event entries")
    edges = np.asarray(bin_edges if bin_edges is not None else np.linspace(0, 1, 11))
    if edges.ndim != 1 or len(edges) < 2 or np.any(np.diff(edges) <= 0):
        raise DomainError("bin edges must be strictly increasing with >= 2 values")
    probs = np.asarray([p for p, _ in entries], dtype=float)
    outcomes = np.asarray([o for _, o in entries], dtype=float)
    if np.any((probs < edges[0]) | (probs > edges[-1])):
        raise DomainError("event probabilities fall outside the bin edges")
    idx = np.digitize(probs, edges[1:-1], right=False)
    rows = []
    for b in range(len(edges) - 1):
        mask = idx == b
        count = int(mask.sum())
        center = float((edges[b] + edges[b + 1]) / 2)
        if count == 0:
            rows.append(ReliabilityBin(center, None, None, 0))
        else:
            rows.append(
                ReliabilityBin(
                    center=center,
                    mean_forecast=float(probs[mask].mean()),
                    observed_freq=float(outcomes[mask].mean()),
                    count=count,
                )
            )
    return tuple(rows)


def sharpness(
    records: Sequence[ForecastRecord],
    levels: Sequence[tuple[float, float]] = DEFAULT_LEVELS,
) -> dict[tuple[float, float], float]:
    """Mean nearest-rank interval width per (lo, hi) level pair."""
    if not records:
        raise EmptyDataError("no forecast records")
    out = {}
    for lo, hi in levels:
        _check_levels(lo, hi)
        widths = [
            quantile(r.forecast, hi) - quantile(r.forecast, lo) for r in records
        ]
        out[(lo, hi)] = float(np.mean(widths))
    return out


def event_pairs(records: Sequence[ForecastRecord]) -> list[tuple[float, int]]:
    """(forecast probability, outcome) pairs from records' event statements.

    An event occurs when the observation strictly exceeds its threshold,
    matching the exceedance convention.
    """
    pairs = []
    for r in records:
        for threshold, prob in r.events:
            pairs.append((prob, int(r.observed > threshold)))
    return pairs


def calibration_report(
    records: Sequence[ForecastRecord],
    levels: Sequence[tuple[float, float]] = DEFAULT_LEVELS,
    bins: int = DEFAULT_PIT_BINS,
    seed: int = 0,
    bin_edges: Sequence[float] | None = None,
) -> CalibrationReport:
    """Full verification report over a record stream."""
    if not records:
        raise EmptyDataError("no forecast records")
    coverage = {}
    attainable = {}
    for lo, hi in levels:
        coverage[(lo, hi)] = interval_coverage(records, lo, hi)
        attainable[(lo, hi)] = attainable_coverage(records, lo, hi)
    pairs = event_pairs(records)
    rel = reliability(pairs, bin_edges) if pairs else ()
    return CalibrationReport(
        coverage=coverage,
        attainable=attainable,
        pit_counts=pit_ranks(records, bins=bins, seed=seed),
        reliability=rel,
        sharpness=sharpness(records, levels),
        n_records=len(records),
        n_events=len(pairs),
    )

"""Predictive distribution of lost TA positions per offer count.

The model: with O funded offers outstanding,

    Y = T + R1 + R2 + G + L + extra - C - A,      A ~ Binomial(O, pi)

where T (TA positions) and C (current students) are known exactly, R1/R2
(research assistantships inside/outside the department), G (graduations) and
L (dropouts) are uncertain counts with elicited or historical PMFs, and A is
the number of accepted offers. Positive Y means TA positions go unfilled;
negative Y means students beyond current funding. The `extra` term is a
known offset, zero by default, for departments that track an additional
committed-positions component.

Two engines produce the distribution of Y: exact signed convolution, and
Monte Carlo with deterministic per-component seed derivation.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .dist import (
    DiscretePMF,
    EmpiricalSample,
    SeedProvenance,
    binomial_pmf,
    convolve,
    point_mass,
    quantile,
    sample,
    MAX_SUPPORT,
)
from .errors import DataError, DomainError, EmptyDataError
from .rng import derive_seed

# Quantile levels of the standard scan table, in display order.
SCAN_LEVELS = (0.10, 0.33, 0.50, 0.67, 0.90)

DEFAULT_MC_DRAWS = 100_000


@dataclass(frozen=True)
class PlanningModel:
    """Inputs of the lost-positions model for one admissions cycle."""

    ta_positions: int
    current_students: int
    ra_internal: DiscretePMF
    ra_external: DiscretePMF
    graduating: DiscretePMF
    leaving: DiscretePMF
    acceptance_prob: float
    acceptance_source: str = "fixed"
    extra: int = 0

    def __post_init__(self):
        if self.ta_positions < 0 or self.current_students < 0:
            raise DomainError("position and student counts must be >= 0")
        for name in ("ra_internal", "ra_external", "graduating", "leaving"):
            pmf: DiscretePMF = getattr(self, name)
            if pmf.support[0] < 0:
                raise DomainError(f"{name} support must be non-negative")
        if not 0.0 <= self.acceptance_prob <= 1.0:
            raise DomainError(
                f"acceptance probability {self.acceptance_prob!r} outside [0, 1]"
            )

    def mean_lost_positions(self, offers: int) -> float:
        """E[Y | offers] in closed form."""
        return (
            self.ta_positions
            + self.ra_internal.mean()
            + self.ra_external.mean()
            + self.graduating.mean()
            + self.leaving.mean()
            + self.extra
            - self.current_students
            - offers * self.acceptance_prob
        )


@dataclass(frozen=True)
class ExactEngine:
    kind: str = field(default="exact", init=False)


@dataclass(frozen=True)
class MonteCarloEngine:
    draws: int = DEFAULT_MC_DRAWS
    seed: int = 0
    kind: str = field(default="mc", init=False)


Engine = Union[ExactEngine, MonteCarloEngine]


class Stance(enum.Enum):
    """How aggressive an offer count is, relative to the uncertainty."""

    VERY_CONSERVATIVE = "Very conservative"
    CONSERVATIVE = "Conservative"
    BREAK_EVEN = "Break-even"
    BOLD = "Bold"
    VERY_BOLD = "Very bold"


@dataclass(frozen=True)
class LostPositionsForecast:
    offers: int
    distribution: DiscretePMF | EmpiricalSample
    engine: Engine

    def p_nonpos(self) -> float:
        """P(Y <= 0): probability of losing no TA positions."""
        return self.distribution.cdf(0)


@dataclass(frozen=True)
class ScanRow:
    offers: int
    percentiles: dict[float, int]
    p_nonpos: float
    label: Stance


def acceptance_rate(
    history: Sequence[tuple[int, int]],
    prior: tuple[float, float] | None = None,
) -> float:
    """Acceptance probability pooled across past cohorts of (offers, acceptances).

    Default is the pooled maximum-likelihood estimate, total acceptances over
    total offers. Passing Beta prior parameters (a, b) switches to the
    posterior-mean estimate (a + acceptances) / (a + b + offers).
    """
    if not history:
        raise EmptyDataError("acceptance history is empty")
    total_offers = 0
    total_acc = 0
    for offers_made, accepted in history:
        if offers_made < 0 or accepted < 0:
            raise DataError("offers and acceptances must be >= 0")
        if accepted > offers_made:
            raise DataError(
                f"cohort has {accepted} acceptances out of {offers_made} offers"
            )
        total_offers += offers_made
        total_acc += accepted
    if prior is not None:
        a, b = prior
        if a <= 0 or b <= 0:
            raise DomainError("Beta prior parameters must be > 0")
        return (a + total_acc) / (a + b + total_offers)
    if total_offers == 0:
        raise EmptyDataError("acceptance history has zero total offers")
    return total_acc / total_offers


def _validate_offers(offers: int) -> int:
    if offers < 0:
        raise DomainError("offer count must be >= 0")
    return int(offers)


def _components(model: PlanningModel, offers: int):
    """Signed PMF components of Y, in the documented order."""
    return [
        (point_mass(model.ta_positions), 1),
        (model.ra_internal, 1),
        (model.ra_external, 1),
        (model.graduating, 1),
        (model.leaving, 1),
        (point_mass(model.extra), 1),
        (point_mass(model.current_students), -1),
        (binomial_pmf(offers, model.acceptance_prob), -1),
    ]


def lost_positions_exact(model: PlanningModel, offers: int) -> LostPositionsForecast:
    """Exact PMF of Y by signed convolution of the components."""
    offers = _validate_offers(offers)
    comps = _components(model, offers)
    dist = convolve([c for c, _ in comps], [s for _, s in comps])
    return LostPositionsForecast(offers=offers, distribution=dist, engine=ExactEngine())


# Order in which the uncertain components consume derived seed streams.
_MC_COMPONENT_ORDER = ("ra_internal", "ra_external", "graduating", "leaving", "acceptance")


def lost_positions_mc(
    model: PlanningModel, offers: int, n: int, seed: int
) -> LostPositionsForecast:
    """Monte Carlo distribution of Y from n joint component draws.

    Component i of the documented order samples with derive_seed(seed, i),
    so the result is reproducible and independent of evaluation order.
    """
    offers = _validate_offers(offers)
    if n < 1:
        raise DomainError("draw count must be >= 1")
    uncertain = {
        "ra_internal": model.ra_internal,
        "ra_external": model.ra_external,
        "graduating": model.graduating,
        "leaving": model.leaving,
        "acceptance": binomial_pmf(offers, model.acceptance_prob),
    }
    base = model.ta_positions + model.extra - model.current_students
    total = np.full(n, base, dtype=np.int64)
    for i, name in enumerate(_MC_COMPONENT_ORDER):
        draws = sample(uncertain[name], n, derive_seed(seed, i)).draws
        if name == "acceptance":
            total -= draws
        else:
            total += draws
    dist = EmpiricalSample(total, SeedProvenance(seed=seed, n=n))
    return LostPositionsForecast(
        offers=offers, distribution=dist, engine=MonteCarloEngine(draws=n, seed=seed)
    )


# Stance bands on p = P(Y <= 0). Edges are midpoints between the scan table's
# quantile levels {.10, .33, .50, .67, .90}.
_STANCE_BANDS = (
    (0.215, Stance.VERY_CONSERVATIVE),
    (0.415, Stance.CONSERVATIVE),
    (0.585, Stance.BREAK_EVEN),
    (0.785, Stance.BOLD),
)


def stance_label(p_nonpos: float) -> Stance:
    """Stance for the probability of losing no TA positions.

    Low p means offers almost surely all fit inside current funding (very
    conservative); high p means extra funding will almost surely be needed
    (very bold). Band membership: the break-even band is closed, its
    neighbours take the open side.
    """
    if not 0.0 <= p_nonpos <= 1.0:
        raise DomainError(f"probability {p_nonpos!r} outside [0, 1]")
    if p_nonpos < 0.215:
        return Stance.VERY_CONSERVATIVE
    if p_nonpos < 0.415:
        return Stance.CONSERVATIVE
    if p_nonpos <= 0.585:
        return Stance.BREAK_EVEN
    if p_nonpos <= 0.785:
        return Stance.BOLD
    return Stance.VERY_BOLD


def forecast_for_engine(
    model: PlanningModel, offers: int, engine: Engine
) -> LostPositionsForecast:
    """Dispatch to the exact or MC engine; MC seeds are split per offer count."""
    if isinstance(engine, ExactEngine):
        return lost_positions_exact(model, offers)
    return lost_positions_mc(
        model, offers, engine.draws, derive_seed(engine.seed, offers)
    )


def scan(
    model: PlanningModel, offer_counts: Sequence[int], engine: Engine | None = None
) -> list[ScanRow]:
    """One row per offer count: scan-level percentiles, P(Y <= 0), stance."""
    if len(offer_counts) == 0:
        raise EmptyDataError("offer_counts is empty")
    engine = engine if engine is not None else ExactEngine()
    rows = []
    for offers in offer_counts:
        fc = forecast_for_engine(model, offers, engine)
        percentiles = {lvl: quantile(fc.distribution, lvl) for lvl in SCAN_LEVELS}
        p = fc.p_nonpos()
        rows.append(
            ScanRow(
                offers=fc.offers,
                percentiles=percentiles,
                p_nonpos=p,
                label=stance_label(p),
            )
        )
    return rows


def auto_engine(
    model: PlanningModel,
    offer_counts: Sequence[int],
    draws: int = DEFAULT_MC_DRAWS,
    seed: int | None = None,
) -> Engine:
    """Exact while the predicted convolution support fits the cap, else MC.

    The MC fallback refuses to run without an explicit seed; silent entropy
    would make audited decisions unreproducible.
    """
    worst = max(offer_counts, default=0)
    comps = _components(model, _validate_offers(worst))
    span = sum(c.support[-1] - c.support[0] for c, _ in comps) + 1
    if span <= MAX_SUPPORT:
        return ExactEngine()
    if seed is None:
        raise DomainError(
            "model too large for the exact engine; Monte Carlo needs an explicit seed"
        )
    return MonteCarloEngine(draws=draws, seed=seed)


# Slack when testing P(Y <= 0) >= 1/2: exact ties (e.g. binomial tails that
# are dyadic rationals) accumulate ~1e-16 error through pmf evaluation and
# convolution, and a tie must resolve toward fewer offers, not be lost to it.
BREAK_EVEN_TOLERANCE = 1e-9


def break_even(model: PlanningModel, lo: int, hi: int) -> int | None:
    """Smallest offer count in [lo, hi] with P(Y <= 0) >= 0.5, or None.

    At this count the department is at least as likely to need outside
    funding as to lose TA positions; ties resolve toward fewer offers.
    """
    lo = _validate_offers(lo)
    if hi < lo:
        raise EmptyDataError(f"search range [{lo}, {hi}] is empty")
    for offers in range(lo, hi + 1):
        if lost_positions_exact(model, offers).p_nonpos() >= 0.5 - BREAK_EVEN_TOLERANCE:
            return offers
    return None

"""Decision products derived from predictive distributions.

Different consumers of a forecast need different reductions of it: a single
point, a central interval, an in/out-of-range alarm, a precautionary quantile
bound, or the expected-loss-optimal point under an asymmetric cost ratio.
Each reduction is a pure function of the distribution plus the consumer's
parameters; `product_for_user` dispatches on the consumer type.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .dist import Dist, exceedance, quantile
from .errors import DomainError, MissingOptionError, ShapeError


class UserType(enum.Enum):
    LOW_STAKES = "low-stakes"
    GENERAL_ASSESSOR = "general-assessor"
    CHANGE_ASSESSOR = "change-assessor"
    RISK_AVOIDER = "risk-avoider"
    DECISION_THEORIST = "decision-theorist"


@dataclass(frozen=True)
class LossSpec:
    """Per-unit costs of under- and overestimating the outcome."""

    cost_under: float
    cost_over: float

    def __post_init__(self):
        for name in ("cost_under", "cost_over"):
            c = getattr(self, name)
            if not (c > 0 and c != float("inf")):
                raise DomainError(f"{name} must be strictly positive and finite")

    @property
    def tau(self) -> float:
        """Quantile level minimizing expected piecewise-linear loss.

        cost_under / (cost_under + cost_over): the costlier overestimates
        are, the lower the optimal quantile.
        """
        return self.cost_under / (self.cost_under + self.cost_over)


@dataclass(frozen=True)
class Point:
    value: int


@dataclass(frozen=True)
class Interval:
    lo: int
    hi: int
    level: float

    def __post_init__(self):
        if self.lo > self.hi:
            raise ShapeError(f"interval lo {self.lo} > hi {self.hi}")
        if not 0.0 < self.level < 1.0:
            raise DomainError(f"interval level {self.level!r} outside (0, 1)")


@dataclass(frozen=True)
class Bound:
    value: int
    alpha: float


class AlarmStatus(enum.Enum):
    IN_RANGE = "in-range"
    ABOVE = "above"
    BELOW = "below"


@dataclass(frozen=True)
class Alarm:
    status: AlarmStatus
    lo: float
    hi: float
    observed: float


@dataclass(frozen=True)
class OptimalPoint:
    value: int
    tau: float


DecisionProduct = Point | Interval | Bound | Alarm | OptimalPoint


@dataclass(frozen=True)
class ExceedanceEntry:
    """P(X > threshold), with the probability withheld when suppressed."""

    threshold: float
    probability: float | None

    @property
    def suppressed(self) -> bool:
        return self.probability is None


@dataclass(frozen=True)
class PublicSummary:
    """Percentile triple plus adverse-event exceedance probabilities."""

    p10: int
    p50: int
    p90: int
    exceedances: tuple[ExceedanceEntry, ...]

    def __post_init__(self):
        if not self.p10 <= self.p50 <= self.p90:
            raise ShapeError("percentiles must be non-decreasing")


def risk_bound(dist: Dist, alpha: float) -> int:
    """Low quantile used as a precautionary bound on actions.

    Keeping the action at or below this value limits the chance of exceeding
    the unknown true quantity to alpha.
    """
    return quantile(dist, alpha)


def pinball_optimal(dist: Dist, loss: LossSpec) -> OptimalPoint:
    """Point forecast minimizing expected piecewise-linear loss.

    The minimizer is the predictive quantile at tau = c_under / (c_under +
    c_over); nearest-rank quantiles resolve flat stretches of the expected
    loss toward the smaller value.
    """
    tau = loss.tau
    return OptimalPoint(value=quantile(dist, tau), tau=tau)


def change_alarm(interval: tuple[float, float], observed: float) -> Alarm:
    """Classify an observation against a projected range, inclusive at both ends."""
    lo, hi = interval
    if lo > hi:
        raise ShapeError(f"interval lo {lo} > hi {hi}")
    if observed < lo:
        status = AlarmStatus.BELOW
    elif observed > hi:
        status = AlarmStatus.ABOVE
    else:
        status = AlarmStatus.IN_RANGE
    return Alarm(status=status, lo=lo, hi=hi, observed=observed)


def public_summary(
    dist: Dist,
    thresholds: tuple[float, ...] | list[float] = (),
    suppression: float = 0.05,
) -> PublicSummary:
    """10th/50th/90th percentiles and exceedance probabilities per threshold.

    Exceedance probabilities below the suppression level are withheld (the
    entry stays, its probability does not); suppression=0 reports everything.
    """
    if suppression < 0:
        raise DomainError("suppression level must be >= 0")
    entries = []
    for t in thresholds:
        p = exceedance(dist, t)
        entries.append(
            ExceedanceEntry(threshold=t, probability=None if p < suppression else p)
        )
    return PublicSummary(
        p10=quantile(dist, 0.10),
        p50=quantile(dist, 0.50),
        p90=quantile(dist, 0.90),
        exceedances=tuple(entries),
    )


def central_interval(dist: Dist, level: float = 0.8) -> Interval:
    """Central predictive interval: quantiles at (1-level)/2 and 1-(1-level)/2."""
    if not 0.0 < level < 1.0:
        raise DomainError(f"interval level {level!r} outside (0, 1)")
    tail = (1.0 - level) / 2.0
    return Interval(lo=quantile(dist, tail), hi=quantile(dist, 1.0 - tail), level=level)


def product_for_user(
    dist: Dist,
    user: UserType,
    *,
    alpha: float | None = None,
    loss: LossSpec | None = None,
    interval_level: float = 0.8,
    observed: float | None = None,
) -> DecisionProduct:
    """The standard forecast product for each consumer type.

    Low-stakes consumers get the median; general assessors the central 80%
    interval; change assessors an alarm for their observation against that
    interval; risk avoiders the alpha-quantile bound; decision theorists the
    loss-optimal quantile.
    """
    if user is UserType.LOW_STAKES:
        return Point(value=quantile(dist, 0.5))
    if user is UserType.GENERAL_ASSESSOR:
        return central_interval(dist, interval_level)
    if user is UserType.CHANGE_ASSESSOR:
        if observed is None:
            raise MissingOptionError("observed")
        iv = central_interval(dist, interval_level)
        return change_alarm((iv.lo, iv.hi), observed)
    if user is UserType.RISK_AVOIDER:
        if alpha is None:
            raise MissingOptionError("alpha")
        if not 0.0 < alpha < 1.0:
            raise DomainError(f"alpha {alpha!r} outside (0, 1)")
        return Bound(value=risk_bound(dist, alpha), alpha=alpha)
    if user is UserType.DECISION_THEORIST:
        if loss is None:
            raise MissingOptionError("loss")
        return pinball_optimal(dist, loss)
    raise DomainError(f"unknown user type {user!r}")

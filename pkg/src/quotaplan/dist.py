"""Exact discrete distribution algebra.

Integer-support probability mass functions with exact convolution, nearest-rank
quantiles, exceedance probabilities, and seeded sampling. This is the numeric
substrate for the planner, decision, and calibration layers: every uncertain
count in the engine is a DiscretePMF and every simulated quantity is an
EmpiricalSample.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

import numpy as np
from scipy import stats as _stats

from .errors import DomainError, EmptyDataError, ShapeError
from .rng import chunk_uniforms

# Probabilities must sum to 1 within this tolerance; worse inputs are rejected
# rather than renormalized so bad elicitation files fail loudly.
SUM_TOLERANCE = 1e-9

# Hard cap on the support size of a convolution result. Every quantity in
# scope is a small count; blowing past this means the caller made a mistake.
MAX_SUPPORT = 10**6


@dataclass(frozen=True)
class DiscretePMF:
    """Probability mass function on a strictly increasing integer support."""

    support: tuple[int, ...]
    probs: tuple[float, ...]

    def __post_init__(self):
        if len(self.support) == 0:
            raise EmptyDataError("PMF support must be non-empty")
        if len(self.support) != len(self.probs):
            raise ShapeError(
                f"support has {len(self.support)} points but probs has {len(self.probs)}"
            )
        sup = np.asarray(self.support)
        if np.any(np.diff(sup) <= 0):
            raise ShapeError("support must be strictly increasing with no duplicates")
        p = np.asarray(self.probs)
        if np.any(p < 0) or not np.all(np.isfinite(p)):
            raise DomainError("probabilities must be finite and >= 0")
        total = float(p.sum())
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise DomainError(f"probabilities sum to {total!r}, not 1 within {SUM_TOLERANCE}")

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, float]) -> "DiscretePMF":
        """Build from a value -> probability mapping, dropping zero entries."""
        items = sorted((int(v), float(p)) for v, p in mapping.items())
        kept = [(v, p) for v, p in items if p != 0.0]
        if not kept:
            raise EmptyDataError("mapping has no positive-probability values")
        return cls(tuple(v for v, _ in kept), tuple(p for _, p in kept))

    def as_mapping(self) -> dict[int, float]:
        return dict(zip(self.support, self.probs))

    def _cumulative(self) -> np.ndarray:
        """Cached prefix sums, compensated so rational CDF ties survive.

        Plain cumsum loses ties like CDF = 0.9 from ten 0.1 masses to
        accumulated rounding, which would shift nearest-rank quantiles by
        one; Kahan summation keeps each prefix correctly rounded.
        """
        cached = getattr(self, "_cum_cache", None)
        if cached is None:
            cached = np.empty(len(self.probs))
            total = 0.0
            comp = 0.0
            for i, p in enumerate(self.probs):
                y = p - comp
                t = total + y
                comp = (t - total) - y
                total = t
                cached[i] = total
            object.__setattr__(self, "_cum_cache", cached)
        return cached

    def cdf(self, x: float) -> float:
        """P(X <= x)."""
        idx = int(np.searchsorted(np.asarray(self.support), x, side="right"))
        if idx == 0:
            return 0.0
        return min(max(float(self._cumulative()[idx - 1]), 0.0), 1.0)

    def cdf_below(self, x: float) -> float:
        """P(X < x)."""
        idx = int(np.searchsorted(np.asarray(self.support), x, side="left"))
        if idx == 0:
            return 0.0
        return min(max(float(self._cumulative()[idx - 1]), 0.0), 1.0)

    def mean(self) -> float:
        return float(np.dot(self.support, self.probs))

    def min(self) -> int:
        return self.support[0]

    def max(self) -> int:
        return self.support[-1]

    def __repr__(self):
        pairs = ", ".join(f"{v}: {p:.6g}" for v, p in zip(self.support, self.probs))
        return f"DiscretePMF({{{pairs}}})"


def point_mass(value: int) -> DiscretePMF:
    """Degenerate distribution of a quantity known exactly."""
    return DiscretePMF((int(value),), (1.0,))


@dataclass(frozen=True)
class SeedProvenance:
    """Record of the (seed, n) pair that generated a simulated sample."""

    seed: int
    n: int


@dataclass(frozen=True, eq=False)
class EmpiricalSample:
    """Integer draws, either simulated (with provenance) or observed."""

    draws: np.ndarray
    provenance: SeedProvenance | None = field(default=None)

    def __post_init__(self):
        arr = np.asarray(self.draws, dtype=np.int64)
        if arr.size == 0:
            raise EmptyDataError("empirical sample must be non-empty")
        object.__setattr__(self, "draws", arr)

    def __eq__(self, other):
        if not isinstance(other, EmpiricalSample):
            return NotImplemented
        return self.provenance == other.provenance and np.array_equal(self.draws, other.draws)

    def __len__(self):
        return int(self.draws.size)

    def cdf(self, x: float) -> float:
        return float(np.count_nonzero(self.draws <= x)) / self.draws.size

    def cdf_below(self, x: float) -> float:
        return float(np.count_nonzero(self.draws < x)) / self.draws.size

    def mean(self) -> float:
        return float(self.draws.mean())


Dist = Union[DiscretePMF, EmpiricalSample]


def pmf_from_counts(counts: Mapping[int, float]) -> DiscretePMF:
    """Empirical PMF proportional to occurrence counts; zero counts dropped."""
    if any(c < 0 for c in counts.values()):
        raise DomainError("counts must be >= 0")
    kept = {int(v): float(c) for v, c in counts.items() if c > 0}
    if not kept:
        raise EmptyDataError("counts are empty or all zero")
    total = sum(kept.values())
    return DiscretePMF.from_mapping({v: c / total for v, c in kept.items()})


def _dense(pmf: DiscretePMF, sign: int) -> tuple[np.ndarray, int]:
    """Contiguous probability array and its offset, negated if sign is -1."""
    lo, hi = pmf.support[0], pmf.support[-1]
    arr = np.zeros(hi - lo + 1)
    arr[np.asarray(pmf.support) - lo] = pmf.probs
    if sign == -1:
        return arr[::-1].copy(), -hi
    return arr, lo


def convolve(pmfs: Sequence[DiscretePMF], signs: Sequence[int]) -> DiscretePMF:
    """Exact distribution of a signed sum of independent PMFs.

    signs holds +1 or -1 per component; -1 components are subtracted, so the
    result support can be negative.
    """
    if len(pmfs) == 0 or len(signs) == 0:
        raise EmptyDataError("convolve needs at least one component")
    if len(pmfs) != len(signs):
        raise ShapeError(f"{len(pmfs)} pmfs but {len(signs)} signs")
    if any(s not in (1, -1) for s in signs):
        raise DomainError("signs must be +1 or -1")

    span = sum(p.support[-1] - p.support[0] for p in pmfs) + 1
    if span > MAX_SUPPORT:
        raise ShapeError(
            f"convolution support would have {span} points (cap {MAX_SUPPORT})"
        )

    acc, offset = _dense(pmfs[0], signs[0])
    for pmf, sign in zip(pmfs[1:], signs[1:]):
        arr, off = _dense(pmf, sign)
        acc = np.convolve(acc, arr)
        offset += off

    nz = np.nonzero(acc)[0]
    support = tuple(int(offset + i) for i in nz)
    return DiscretePMF(support, tuple(float(acc[i]) for i in nz))


def binomial_pmf(trials: int, p: float) -> DiscretePMF:
    """Binomial(trials, p) mass on {0..trials}; zero-trials is a point mass at 0."""
    if trials < 0:
        raise DomainError("trials must be >= 0")
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"acceptance probability {p!r} outside [0, 1]")
    # scipy's boost backend overflows for subnormal p; below 1e-300 the
    # non-zero outcomes carry mass < trials * 1e-300, indistinguishable from 0
    if trials == 0 or p < 1e-300:
        return point_mass(0)
    if p == 1.0:
        return point_mass(trials)
    k = np.arange(trials + 1)
    probs = _stats.binom.pmf(k, trials, p)
    return DiscretePMF.from_mapping({int(v): float(q) for v, q in zip(k, probs)})


def quantile(dist: Dist, q: float) -> int:
    """Nearest-rank quantile: smallest value whose CDF is >= q."""
    if not 0.0 < q < 1.0:
        raise DomainError(f"quantile level {q!r} outside (0, 1)")
    if isinstance(dist, DiscretePMF):
        cum = dist._cumulative()
        idx = int(np.searchsorted(cum, q, side="left"))
        return int(dist.support[min(idx, len(dist.support) - 1)])
    draws = np.sort(dist.draws)
    rank = int(np.ceil(q * draws.size))
    return int(draws[max(rank, 1) - 1])


def exceedance(dist: Dist, threshold: float) -> float:
    """P(X > threshold), strict; complements the CDF exactly."""
    return 1.0 - dist.cdf(threshold)


def sample(dist: DiscretePMF, n: int, seed: int) -> EmpiricalSample:
    """n independent draws by inverse CDF over chunked, seeded uniforms.

    Deterministic given (seed, n): chunk i of the uniforms comes from the
    stream derive_seed(seed, i), so parallel chunk evaluation cannot change
    the result.
    """
    if n < 1:
        raise DomainError("sample size must be >= 1")
    u = chunk_uniforms(seed, n)
    cum = dist._cumulative()
    idx = np.searchsorted(cum, u, side="right")
    idx = np.minimum(idx, len(dist.support) - 1)
    draws = np.asarray(dist.support, dtype=np.int64)[idx]
    return EmpiricalSample(draws, SeedProvenance(seed=seed, n=n))

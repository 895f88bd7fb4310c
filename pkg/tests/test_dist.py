"""Tests for the discrete distribution core."""

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quotaplan.dist import (
    DiscretePMF,
    EmpiricalSample,
    SeedProvenance,
    binomial_pmf,
    convolve,
    exceedance,
    pmf_from_counts,
    point_mass,
    quantile,
    sample,
)
from quotaplan.errors import DomainError, EmptyDataError, ShapeError


def enum_signed_sum(pmfs, signs):
    """Oracle: exhaustive enumeration of the signed-sum distribution."""
    acc = {}
    supports = [p.support for p in pmfs]
    for combo in itertools.product(*supports):
        total = sum(s * v for s, v in zip(signs, combo))
        prob = math.prod(
            p.probs[p.support.index(v)] for p, v in zip(pmfs, combo)
        )
        acc[total] = acc.get(total, 0.0) + prob
    return acc


def pmf(mapping):
    return DiscretePMF.from_mapping(mapping)


coin = pmf({0: 0.5, 1: 0.5})
triangle = pmf({0: 0.25, 1: 0.5, 2: 0.25})


@st.composite
def small_pmfs(draw):
    counts = draw(
        st.dictionaries(
            st.integers(min_value=-8, max_value=12),
            st.integers(min_value=1, max_value=9),
            min_size=1,
            max_size=6,
        )
    )
    return pmf_from_counts(counts)


class TestDiscretePMF:
    def test_rejects_empty_support(self):
        with pytest.raises(EmptyDataError):
            DiscretePMF((), ())

    def test_rejects_unsorted_support(self):
        with pytest.raises(ShapeError):
            DiscretePMF((2, 1), (0.5, 0.5))

    def test_rejects_duplicate_support(self):
        with pytest.raises(ShapeError):
            DiscretePMF((1, 1), (0.5, 0.5))

    def test_rejects_negative_probs(self):
        with pytest.raises(DomainError):
            DiscretePMF((0, 1), (-0.5, 1.5))

    def test_rejects_bad_sum_without_renormalizing(self):
        with pytest.raises(DomainError):
            DiscretePMF((0, 1), (0.5, 0.48))

    def test_tolerates_tiny_sum_error(self):
        DiscretePMF((0, 1), (0.5, 0.5 + 5e-10))

    def test_point_mass_is_single_point_pmf(self):
        pm = point_mass(7)
        assert pm.support == (7,) and pm.probs == (1.0,)


class TestPmfFromCounts:
    def test_single_observation(self):
        d = pmf_from_counts({5: 1})
        assert d.support == (5,) and d.probs == (1.0,)

    def test_proportionality(self):
        d = pmf_from_counts({1: 2, 2: 1})
        assert d.support == (1, 2)
        assert d.probs == pytest.approx((2 / 3, 1 / 3), abs=1e-15)

    def test_zero_count_values_dropped(self):
        # normalized by hand: 3/4 and 1/4, the zero-count 7 vanishes
        d = pmf_from_counts({0: 3, 2: 1, 7: 0})
        assert d.support == (0, 2)
        assert d.probs == pytest.approx((0.75, 0.25), abs=1e-15)

    @pytest.mark.parametrize("counts", [{}, {3: 0}, {1: 0, 2: 0}])
    def test_empty_or_all_zero(self, counts):
        with pytest.raises(EmptyDataError):
            pmf_from_counts(counts)

    def test_negative_counts_rejected(self):
        with pytest.raises(DomainError):
            pmf_from_counts({1: -2, 2: 3})


class TestConvolve:
    def test_identity(self):
        assert convolve([triangle], [1]) == triangle

    def test_two_coins(self):
        got = convolve([coin, coin], [1, 1])
        oracle = enum_signed_sum([coin, coin], [1, 1])
        assert got.support == tuple(sorted(oracle))
        assert got.probs == pytest.approx((0.25, 0.5, 0.25), abs=1e-12)

    def test_point_masses_subtract(self):
        got = convolve([point_mass(3), point_mass(1)], [1, -1])
        assert got == point_mass(2)

    def test_signed_mixture_matches_enumeration(self):
        a = pmf({0: 0.5, 1: 0.3, 3: 0.2})
        b = pmf({1: 0.6, 2: 0.4})
        got = convolve([a, b, coin], [1, -1, 1])
        oracle = enum_signed_sum([a, b, coin], [1, -1, 1])
        assert got.support == tuple(sorted(k for k, v in oracle.items() if v > 0))
        for v, p in zip(got.support, got.probs):
            assert p == pytest.approx(oracle[v], abs=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(ShapeError):
            convolve([coin, coin], [1])

    def test_empty_input(self):
        with pytest.raises(EmptyDataError):
            convolve([], [])

    def test_bad_sign(self):
        with pytest.raises(DomainError):
            convolve([coin], [2])

    def test_support_cap(self):
        wide = DiscretePMF((0, 600_000), (0.5, 0.5))
        with pytest.raises(ShapeError):
            convolve([wide, wide], [1, 1])

    @given(st.lists(small_pmfs(), min_size=1, max_size=4), st.data())
    @settings(max_examples=60, deadline=None)
    def test_mean_additivity(self, pmfs, data):
        signs = data.draw(
            st.lists(
                st.sampled_from([1, -1]), min_size=len(pmfs), max_size=len(pmfs)
            )
        )
        got = convolve(pmfs, signs)
        expected = sum(s * p.mean() for s, p in zip(signs, pmfs))
        assert got.mean() == pytest.approx(expected, abs=1e-9)

    @given(small_pmfs(), small_pmfs(), small_pmfs())
    @settings(max_examples=40, deadline=None)
    def test_associative_commutative_for_sums(self, a, b, c):
        left = convolve([convolve([a, b], [1, 1]), c], [1, 1])
        right = convolve([a, convolve([b, c], [1, 1])], [1, 1])
        flat = convolve([a, b, c], [1, 1, 1])
        swapped = convolve([c, b, a], [1, 1, 1])
        for other in (right, flat, swapped):
            assert left.support == other.support
            assert left.probs == pytest.approx(other.probs, abs=1e-12)


class TestBinomial:
    def test_zero_trials(self):
        assert binomial_pmf(0, 0.7) == point_mass(0)

    def test_certain_acceptance(self):
        assert binomial_pmf(3, 1.0) == point_mass(3)

    def test_enumerated_two_trials(self):
        got = binomial_pmf(2, 0.5)
        # oracle: convolution of two independent coins
        oracle = enum_signed_sum([coin, coin], [1, 1])
        assert got.support == (0, 1, 2)
        assert got.probs == pytest.approx(
            tuple(oracle[k] for k in (0, 1, 2)), abs=1e-12
        )

    @pytest.mark.parametrize("p", [-0.1, 1.1])
    def test_bad_probability(self, p):
        with pytest.raises(DomainError):
            binomial_pmf(5, p)

    def test_negative_trials(self):
        with pytest.raises(DomainError):
            binomial_pmf(-1, 0.5)

    @given(st.integers(min_value=0, max_value=40), st.floats(min_value=0, max_value=1))
    @settings(max_examples=50, deadline=None)
    def test_mean_is_np(self, n, p):
        assert binomial_pmf(n, p).mean() == pytest.approx(n * p, abs=1e-9)


class TestQuantile:
    def test_point_mass(self):
        assert quantile(point_mass(4), 0.5) == 4

    def test_triangle_median(self):
        # CDF(0) = .25 < .5 <= CDF(1) = .75
        assert quantile(triangle, 0.5) == 1

    def test_triangle_upper(self):
        # CDF(1) = .75 < .9
        assert quantile(triangle, 0.9) == 2

    @pytest.mark.parametrize("q", [0.0, 1.0, -0.2, 1.7])
    def test_level_domain(self, q):
        with pytest.raises(DomainError):
            quantile(triangle, q)

    def test_empirical_nearest_rank(self):
        s = EmpiricalSample(np.arange(1, 101))
        assert quantile(s, 0.05) == 5
        assert quantile(s, 0.5) == 50

    @given(small_pmfs(), st.floats(min_value=0.001, max_value=0.999))
    @settings(max_examples=80, deadline=None)
    def test_nearest_rank_definition(self, d, q):
        y = quantile(d, q)
        assert d.cdf(y) >= q
        assert d.cdf(y - 1) < q

    @given(
        small_pmfs(),
        st.floats(min_value=0.001, max_value=0.999),
        st.floats(min_value=0.001, max_value=0.999),
    )
    @settings(max_examples=60, deadline=None)
    def test_monotone_in_level(self, d, q1, q2):
        lo, hi = min(q1, q2), max(q1, q2)
        assert quantile(d, lo) <= quantile(d, hi)


class TestExceedance:
    def test_strict_at_point(self):
        assert exceedance(point_mass(0), 0) == 0.0

    def test_triangle(self):
        assert exceedance(triangle, 0) == pytest.approx(0.75, abs=1e-15)

    def test_above_support(self):
        assert exceedance(triangle, 5) == 0.0

    def test_empirical(self):
        s = EmpiricalSample(np.array([0, 0, 1, 2]))
        assert exceedance(s, 0) == 0.5

    @given(small_pmfs(), st.integers(min_value=-10, max_value=15))
    @settings(max_examples=80, deadline=None)
    def test_complements_cdf_exactly(self, d, t):
        assert exceedance(d, t) + d.cdf(t) == 1.0


class TestSample:
    def test_degenerate(self):
        s = sample(point_mass(7), 5, seed=123)
        assert list(s.draws) == [7] * 5

    def test_coin_mean(self):
        s = sample(coin, 10_000, seed=42)
        assert abs(s.mean() - 0.5) < 0.02

    def test_determinism(self):
        a = sample(triangle, 1000, seed=9)
        b = sample(triangle, 1000, seed=9)
        assert a == b

    def test_different_seeds_differ(self):
        a = sample(coin, 1000, seed=1)
        b = sample(coin, 1000, seed=2)
        assert not np.array_equal(a.draws, b.draws)

    def test_provenance_recorded(self):
        s = sample(coin, 10, seed=5)
        assert s.provenance == SeedProvenance(seed=5, n=10)

    def test_zero_draws_rejected(self):
        with pytest.raises(DomainError):
            sample(coin, 0, seed=1)

    def test_prefix_stability_across_chunks(self):
        # chunked splitting means a shorter run is a prefix of a longer one
        long = sample(triangle, 70_000, seed=4)
        short = sample(triangle, 66_000, seed=4)
        assert np.array_equal(long.draws[:66_000], short.draws)

    def test_frequencies_match_pmf(self):
        n = 100_000
        d = pmf({0: 0.1, 1: 0.2, 3: 0.4, 5: 0.3})
        s = sample(d, n, seed=2024)
        for v, p in zip(d.support, d.probs):
            freq = np.count_nonzero(s.draws == v) / n
            assert abs(freq - p) <= 4 * math.sqrt(p * (1 - p) / n)


class TestEmpiricalSample:
    def test_non_empty_required(self):
        with pytest.raises(EmptyDataError):
            EmpiricalSample(np.array([], dtype=int))

    def test_observed_data_has_no_provenance(self):
        s = EmpiricalSample(np.array([1, 2, 3]))
        assert s.provenance is None

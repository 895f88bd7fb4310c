"""Tests for forecast verification."""

import numpy as np
import pytest
from scipy import stats

from quotaplan.calibration import (
    ForecastRecord,
    attainable_coverage,
    calibration_report,
    event_pairs,
    interval_coverage,
    pit_ranks,
    pit_values,
    reliability,
    sharpness,
)
from quotaplan.dist import DiscretePMF, point_mass, quantile, sample
from quotaplan.errors import DomainError, EmptyDataError
from quotaplan.planner import lost_positions_exact


def pmf(mapping):
    return DiscretePMF.from_mapping(mapping)


def uniform(lo, hi):
    return pmf({v: 1 / (hi - lo + 1) for v in range(lo, hi + 1)})


def self_consistent_records(forecast, n, seed):
    """Records whose observations are drawn from the forecast itself."""
    draws = sample(forecast, n, seed).draws
    return [ForecastRecord(forecast=forecast, observed=int(y)) for y in draws]


@pytest.fixture(scope="module")
def dept_y20():
    from conftest import dept_model

    return lost_positions_exact(dept_model(), 20).distribution


class TestIntervalCoverage:
    def test_observed_at_median(self):
        d = uniform(0, 9)
        records = [ForecastRecord(d, observed=quantile(d, 0.5))] * 20
        assert interval_coverage(records, 0.1, 0.9) == 1.0

    def test_observed_above_support(self):
        records = [ForecastRecord(uniform(0, 9), observed=99)] * 5
        assert interval_coverage(records, 0.1, 0.9) == 0.0

    def test_self_consistent_near_attainable(self, dept_y20):
        records = self_consistent_records(dept_y20, 10_000, seed=77)
        got = interval_coverage(records, 0.1, 0.9)
        exact = dept_y20.cdf(quantile(dept_y20, 0.9)) - dept_y20.cdf_below(
            quantile(dept_y20, 0.1)
        )
        assert exact >= 0.80
        assert got == pytest.approx(exact, abs=0.02)

    def test_empty_records(self):
        with pytest.raises(EmptyDataError):
            interval_coverage([], 0.1, 0.9)

    def test_bad_levels(self):
        records = [ForecastRecord(uniform(0, 9), observed=5)]
        with pytest.raises(DomainError):
            interval_coverage(records, 0.9, 0.1)

    def test_wider_interval_never_lowers_coverage(self, dept_y20):
        records = self_consistent_records(dept_y20, 2_000, seed=5)
        assert interval_coverage(records, 0.05, 0.95) >= interval_coverage(
            records, 0.1, 0.9
        )

    def test_attainable_at_least_nominal(self, dept_y20):
        records = [ForecastRecord(dept_y20, observed=0)]
        assert attainable_coverage(records, 0.1, 0.9) >= 0.8


class TestPitRanks:
    def test_point_mass_forecasts_flat(self):
        records = [ForecastRecord(point_mass(3), observed=3)] * 10_000
        counts = pit_ranks(records, bins=10, seed=42)
        assert sum(counts) == 10_000
        expected = 1_000
        chi2 = sum((c - expected) ** 2 / expected for c in counts)
        assert chi2 < stats.chi2.ppf(0.99, df=9)

    def test_observed_above_support_all_last_bin(self):
        records = [ForecastRecord(uniform(0, 4), observed=10)] * 50
        counts = pit_ranks(records, bins=10, seed=1)
        assert counts[-1] == 50 and sum(counts) == 50

    def test_observed_below_support_all_first_bin(self):
        records = [ForecastRecord(uniform(5, 9), observed=0)] * 50
        counts = pit_ranks(records, bins=10, seed=1)
        assert counts[0] == 50 and sum(counts) == 50

    def test_self_consistent_chi_square(self, dept_y20):
        records = self_consistent_records(dept_y20, 10_000, seed=13)
        counts = pit_ranks(records, bins=10, seed=99)
        expected = len(records) / 10
        chi2 = sum((c - expected) ** 2 / expected for c in counts)
        assert chi2 < stats.chi2.ppf(0.99, df=9)

    def test_reproducible(self, dept_y20):
        records = self_consistent_records(dept_y20, 500, seed=3)
        assert pit_ranks(records, seed=11) == pit_ranks(records, seed=11)
        assert np.array_equal(pit_values(records, 11), pit_values(records, 11))

    def test_partitioning_independence(self, dept_y20):
        # per-record seed derivation: a record's PIT doesn't depend on batch size
        records = self_consistent_records(dept_y20, 100, seed=3)
        full = pit_values(records, seed=7)
        prefix = pit_values(records[:40], seed=7)
        assert np.array_equal(full[:40], prefix)

    def test_empty(self):
        with pytest.raises(EmptyDataError):
            pit_ranks([], seed=1)


class TestReliability:
    def test_all_certain_hits(self):
        rows = reliability([(1.0, 1)] * 10)
        assert rows[-1].observed_freq == 1.0
        assert rows[-1].count == 10
        assert sum(r.count for r in rows) == 10

    def test_all_certain_misses(self):
        rows = reliability([(0.0, 0)] * 7)
        assert rows[0].observed_freq == 0.0
        assert rows[0].count == 7

    def test_calibrated_stream(self):
        rng = np.random.default_rng(2718)
        n = 20_000
        probs = rng.uniform(0, 1, size=n)
        outcomes = (rng.uniform(0, 1, size=n) < probs).astype(int)
        rows = reliability(list(zip(probs, outcomes)))
        for row in rows:
            assert row.count >= 500
            assert abs(row.observed_freq - row.mean_forecast) <= 0.03

    def test_bins_partition(self):
        entries = [(p, 0) for p in np.linspace(0, 1, 101)]
        rows = reliability(entries)
        assert sum(r.count for r in rows) == len(entries)

    def test_boundary_goes_to_upper_bin(self):
        rows = reliability([(0.1, 1)])
        assert rows[1].count == 1 and rows[0].count == 0

    def test_empty_bins_have_no_stats(self):
        rows = reliability([(0.95, 1)])
        assert rows[0].count == 0
        assert rows[0].mean_forecast is None and rows[0].observed_freq is None

    def test_out_of_range_prob(self):
        with pytest.raises(DomainError):
            reliability([(1.5, 1)])

    def test_empty(self):
        with pytest.raises(EmptyDataError):
            reliability([])


class TestSharpness:
    def test_point_masses(self):
        records = [ForecastRecord(point_mass(v), observed=v) for v in range(5)]
        assert sharpness(records, [(0.1, 0.9)]) == {(0.1, 0.9): 0.0}

    def test_uniform_width(self):
        # nearest-rank: q10 = 0, q90 = 8
        records = [ForecastRecord(uniform(0, 9), observed=3)] * 4
        assert sharpness(records, [(0.1, 0.9)]) == {(0.1, 0.9): 8.0}

    def test_mixed_mean(self):
        records = [
            ForecastRecord(uniform(0, 9), observed=1),
            ForecastRecord(point_mass(2), observed=2),
        ]
        assert sharpness(records, [(0.1, 0.9)])[(0.1, 0.9)] == pytest.approx(4.0)

    def test_nonnegative(self, dept_y20):
        records = self_consistent_records(dept_y20, 200, seed=8)
        widths = sharpness(records, [(0.1, 0.9), (0.33, 0.67)])
        assert all(w >= 0 for w in widths.values())
        assert widths[(0.1, 0.9)] >= widths[(0.33, 0.67)]


class TestEventPairs:
    def test_strict_exceedance_outcomes(self):
        r = ForecastRecord(uniform(0, 9), observed=5, events=((5, 0.4), (4.5, 0.5)))
        assert event_pairs([r]) == [(0.4, 0), (0.5, 1)]

    def test_bad_event_probability(self):
        with pytest.raises(DomainError):
            ForecastRecord(uniform(0, 9), observed=5, events=((5, 1.4),))


class TestCalibrationReport:
    def test_full_report(self, dept_y20):
        records = [
            ForecastRecord(
                dept_y20, observed=int(y), events=((0, dept_y20.cdf(0)),)
            )
            for y in sample(dept_y20, 2_000, seed=21).draws
        ]
        report = calibration_report(records, levels=[(0.1, 0.9)], seed=5)
        assert report.n_records == 2_000
        assert report.n_events == 2_000
        assert 0.0 <= report.coverage[(0.1, 0.9)] <= 1.0
        assert report.attainable[(0.1, 0.9)] >= 0.8
        assert sum(report.pit_counts) == 2_000
        assert sum(r.count for r in report.reliability) == 2_000
        assert report.sharpness[(0.1, 0.9)] >= 0

    def test_no_events_no_reliability(self):
        records = [ForecastRecord(uniform(0, 3), observed=1)]
        report = calibration_report(records)
        assert report.reliability == ()
        assert report.n_events == 0

    def test_empty(self):
        with pytest.raises(EmptyDataError):
            calibration_report([])

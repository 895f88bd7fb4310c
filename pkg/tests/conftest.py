"""Shared fixture models for the test suite."""

import pytest

from quotaplan.dist import DiscretePMF, convolve, pmf_from_counts
from quotaplan.planner import PlanningModel


def pmf(mapping):
    return DiscretePMF.from_mapping(mapping)


def dept_model() -> PlanningModel:
    """Flagship department fixture: five scan labels across offers 12..30."""
    ra_internal = convolve(
        [
            pmf({0: 0.25, 1: 0.5, 2: 0.25}),
            pmf({0: 0.4, 1: 0.6}),
            pmf({0: 0.5, 1: 0.3, 2: 0.2}),
        ],
        [1, 1, 1],
    )
    return PlanningModel(
        ta_positions=18,
        current_students=16,
        ra_internal=ra_internal,
        ra_external=pmf_from_counts({0: 3, 1: 4, 2: 3}),
        graduating=pmf({4: 0.2, 5: 0.6, 6: 0.2}),
        leaving=pmf_from_counts({0: 4, 1: 4, 2: 2}),
        acceptance_prob=0.55,
        acceptance_source="pooled-mle",
    )


def tight_model() -> PlanningModel:
    return PlanningModel(
        ta_positions=6,
        current_students=9,
        ra_internal=pmf({1: 1.0}),
        ra_external=pmf({0: 0.5, 1: 0.5}),
        graduating=pmf({2: 0.7, 3: 0.3}),
        leaving=pmf({0: 1.0}),
        acceptance_prob=0.5,
    )


def wide_model() -> PlanningModel:
    uniform = lambda lo, hi: pmf({v: 1 / (hi - lo + 1) for v in range(lo, hi + 1)})
    return PlanningModel(
        ta_positions=20,
        current_students=25,
        ra_internal=uniform(0, 6),
        ra_external=uniform(0, 4),
        graduating=uniform(2, 8),
        leaving=uniform(0, 3),
        acceptance_prob=0.4,
    )


def shy_model() -> PlanningModel:
    """Low acceptance probability."""
    return PlanningModel(
        ta_positions=10,
        current_students=12,
        ra_internal=pmf({0: 0.3, 1: 0.4, 2: 0.3}),
        ra_external=pmf({0: 0.6, 1: 0.4}),
        graduating=pmf({3: 0.5, 4: 0.5}),
        leaving=pmf({0: 0.7, 1: 0.3}),
        acceptance_prob=0.25,
    )


def eager_model() -> PlanningModel:
    """High acceptance probability, plus a nonzero known extra component."""
    return PlanningModel(
        ta_positions=15,
        current_students=20,
        ra_internal=pmf({2: 0.5, 3: 0.5}),
        ra_external=pmf({1: 0.5, 2: 0.5}),
        graduating=pmf({4: 0.4, 5: 0.6}),
        leaving=pmf({0: 0.8, 1: 0.2}),
        acceptance_prob=0.9,
        extra=1,
    )


FIXTURE_MODELS = {
    "dept": dept_model,
    "tight": tight_model,
    "wide": wide_model,
    "shy": shy_model,
    "eager": eager_model,
}


@pytest.fixture
def dept():
    return dept_model()


@pytest.fixture(params=sorted(FIXTURE_MODELS))
def any_model(request):
    return FIXTURE_MODELS[request.param]()

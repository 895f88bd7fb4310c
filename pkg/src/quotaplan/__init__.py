"""Probabilistic capacity planning and decision support for admissions.

Composable integer-support predictive distributions, the lost-TA-positions
planning model, asymmetric-loss decision products, and forecast verification,
exposed as a library, CLI, and JSON service.
"""

from .dist import (
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
from .planner import (
    ExactEngine,
    LostPositionsForecast,
    MonteCarloEngine,
    PlanningModel,
    ScanRow,
    Stance,
    acceptance_rate,
    break_even,
    lost_positions_exact,
    lost_positions_mc,
    scan,
    stance_label,
)
from .decision import (
    Alarm,
    AlarmStatus,
    Bound,
    Interval,
    LossSpec,
    OptimalPoint,
    Point,
    PublicSummary,
    UserType,
    change_alarm,
    pinball_optimal,
    product_for_user,
    public_summary,
    risk_bound,
)
from .calibration import (
    CalibrationReport,
    ForecastRecord,
    calibration_report,
    interval_coverage,
    pit_ranks,
    reliability,
    sharpness,
)

__version__ = "0.1.0"

__all__ = [
    "DiscretePMF",
    "EmpiricalSample",
    "SeedProvenance",
    "binomial_pmf",
    "convolve",
    "exceedance",
    "pmf_from_counts",
    "point_mass",
    "quantile",
    "sample",
    "ExactEngine",
    "LostPositionsForecast",
    "MonteCarloEngine",
    "PlanningModel",
    "ScanRow",
    "Stance",
    "acceptance_rate",
    "break_even",
    "lost_positions_exact",
    "lost_positions_mc",
    "scan",
    "stance_label",
    "Alarm",
    "AlarmStatus",
    "Bound",
    "Interval",
    "LossSpec",
    "OptimalPoint",
    "Point",
    "PublicSummary",
    "UserType",
    "change_alarm",
    "pinball_optimal",
    "product_for_user",
    "public_summary",
    "risk_bound",
    "CalibrationReport",
    "ForecastRecord",
    "calibration_report",
    "interval_coverage",
    "pit_ranks",
    "reliability",
    "sharpness",
]

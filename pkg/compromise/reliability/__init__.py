"""Reliability measurements: distances, Rademacher averages and bounds."""

from compromise.reliability.bounds import (
    SdPresets,
    markov_distance_bound,
    sampling_error_mean_bound,
    sampling_error_tail,
    sampling_error_variance_bound,
    sd_event_probability,
    sd_presets,
    solution_tail_probability,
    theoretical_bounds,
)
from compromise.reliability.constants import (
    bound_constants,
    compound_bound,
    compound_lipschitz,
    constant_nf,
    constant_nh,
)
from compromise.reliability.distance import (
    epsilon_sublevel_set,
    pessimistic_distance,
    sublevel_distance,
    sublevel_distance_bound,
)
from compromise.reliability.empirical import (
    compound_sampling_error_sup,
    delta_statistics,
    empirical_delta_stats,
    fit_rate,
    mean_variance_objective,
    non_dominated,
    sampling_error_sup,
    variance_deviation_bound,
    variance_deviation_sup,
)
from compromise.reliability.rademacher import (
    finite_set_bound,
    rademacher_finite,
    rademacher_function_class,
)
from compromise.reliability.report import (
    REPORT_METRICS,
    MacroOutcome,
    build_report,
    report_rows,
    summarize_cell,
)
from compromise.reliability.types import (
    BoundConstants,
    BoundRecord,
    CellStatistics,
    DeltaStats,
    PointSet,
    RademacherEstimate,
    RateFit,
    ReliabilityReport,
    ReportRow,
)

__all__ = [
    "REPORT_METRICS",
    "BoundConstants",
    "BoundRecord",
    "CellStatistics",
    "DeltaStats",
    "MacroOutcome",
    "PointSet",
    "RademacherEstimate",
    "RateFit",
    "ReliabilityReport",
    "ReportRow",
    "SdPresets",
    "bound_constants",
    "build_report",
    "compound_bound",
    "compound_lipschitz",
    "compound_sampling_error_sup",
    "constant_nf",
    "constant_nh",
    "delta_statistics",
    "empirical_delta_stats",
    "epsilon_sublevel_set",
    "finite_set_bound",
    "fit_rate",
    "markov_distance_bound",
    "mean_variance_objective",
    "non_dominated",
    "pessimistic_distance",
    "rademacher_finite",
    "rademacher_function_class",
    "report_rows",
    "sampling_error_mean_bound",
    "sampling_error_sup",
    "sampling_error_tail",
    "sampling_error_variance_bound",
    "sd_event_probability",
    "sd_presets",
    "solution_tail_probability",
    "sublevel_distance",
    "sublevel_distance_bound",
    "summarize_cell",
    "theoretical_bounds",
    "variance_deviation_bound",
    "variance_deviation_sup",
]

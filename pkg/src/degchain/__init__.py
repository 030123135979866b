"""Degree distributions of growing preferential-attachment networks via
density evolution of their per-node degree Markov chains."""

from degchain.errors import (
    DegchainError,
    DegenerateSegment,
    EmptyDistribution,
    EmptyRange,
    InsufficientNodes,
    InsufficientPoints,
    MismatchedRuns,
    NonPositive,
    OutOfRangeProbability,
    Unsupported,
)
from degchain.kernel import (
    Family,
    GrowthModel,
    Segment,
    SegmentPlan,
    TransitionRow,
    attach_advance_probability,
    default_start,
    initial_degree,
    rate_slope,
    segment_plan,
    transition_row,
)
from degchain.evolve import (
    DEFAULT_EPS,
    DegreeDistribution,
    ProbVector,
    accumulate_segment,
    degree_distribution,
    evolve_node,
    expected_degree,
)
from degchain.analytic import (
    AnalyticPrediction,
    ba_prediction,
    continuum_trajectory,
    master_equation_pk,
    mean_field_pk,
    power_model_prediction,
    total_degree,
)
from degchain.fit import (
    FitResult,
    common_tail_range,
    default_fit_range,
    estimate_nonstationary_exponent,
    fit_arrays,
    fit_power_law,
    tail_fit_range,
)
from degchain.sim import (
    SimRun,
    empirical_distribution,
    empirical_stderr,
    links_at,
    replicate_histograms,
    simulate,
    simulate_many,
)

__version__ = "0.1.0"

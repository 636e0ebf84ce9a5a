"""Statistics for sums of independent Fisher-Snedecor F variables."""

from ._core import (
    BranchSet,
    FadingParams,
    FsumError,
    Method,
    Metric,
    MetricResult,
    capacity_awgn,
    db_to_linear,
    f_cdf,
    f_moment,
    f_pdf,
    ks_critical,
    laplace_cdf,
    laplace_pdf,
    linear_to_db,
    match_moments,
    metric,
    sample_sum,
    solve_gamma0,
    sum_cdf,
    sum_cdf_asymptotic,
    sum_pdf,
)

__all__ = [
    "BranchSet",
    "FadingParams",
    "FsumError",
    "Method",
    "Metric",
    "MetricResult",
    "capacity_awgn",
    "db_to_linear",
    "f_cdf",
    "f_moment",
    "f_pdf",
    "ks_critical",
    "laplace_cdf",
    "laplace_pdf",
    "linear_to_db",
    "match_moments",
    "metric",
    "sample_sum",
    "solve_gamma0",
    "sum_cdf",
    "sum_cdf_asymptotic",
    "sum_pdf",
]

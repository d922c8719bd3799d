"""Ordinal-pattern statistics.

Pattern extraction and frequencies, closed-form and simulated long-run
covariance matrices, the joint asymptotics of permutation entropy and
statistical complexity (normal and weighted-chi-square regimes),
serial-dependence tests, and uncertainty geometry in the
entropy-complexity plane.
"""

from .covariance import (
    HacScheme,
    cov_from_json,
    cov_to_csv,
    cov_to_json,
    gaussian_cov_m2,
    gct_cov,
    gct_pmf,
    hac_estimate,
    hac_from_patterns,
    iid_cov_m2,
    iid_cov_m3,
    increment_autocorr_ma_gaussian,
    ma_equal_cov_m2,
    random_walk_cov_m3,
    simulate_cov,
    truncation_lag,
)
from .ecstats import (
    acov_entropy_complexity,
    acov_entropy_diseq,
    acov_entropy_mixture,
    complexity,
    disequilibrium,
    ec_point,
    is_effectively_uniform,
    norm_constants,
    repair_zero_probs,
    shannon_entropy,
    uniform_scalings,
)
from .errors import InsufficientDataError, RegimeError, SingularModelError
from .generators import (
    DgpSpec,
    derive_seed,
    gct_exact_pmf,
    gct_lag1_joint_m3,
    gen_ar1,
    gen_gct_patterns,
    gen_iid_gaussian,
    gen_ma_equal,
    gen_ma_gaussian,
    gen_qma1,
    gen_random_walk,
    gen_tear1,
    generate,
    spec_from_json,
    spec_to_json,
)
from .inference import (
    EllipseSpec,
    SegmentSpec,
    TestResult,
    asymptotic_line,
    dependence_test,
    ellipse_from_cov,
    h_statistic,
    hc_statistic,
    hd_statistic,
    mc_rejection_rate,
    null_cov,
    null_weights,
    segment_from_cov,
    standard_errors,
    uncertainty_ellipse,
    uncertainty_segment,
    uniform_line,
)
from .patterns import (
    lex_rank,
    lex_unrank,
    one_hot,
    one_hot_series,
    pattern_of,
    pattern_series,
    read_pattern_file,
    read_series_csv,
    read_series_text,
    relative_frequencies,
    write_pattern_file,
    write_series_text,
)
from .plane import PlaneCurve, boundary_curves, gaussian_trajectory, gct_trajectory
from .quadform import qf_cdf, qf_quantile, qf_sf, qf_weights, symmetric_eigen

__version__ = "0.1.0"

__all__ = [
    "HacScheme",
    "cov_from_json",
    "cov_to_csv",
    "cov_to_json",
    "gaussian_cov_m2",
    "gct_cov",
    "gct_pmf",
    "hac_estimate",
    "hac_from_patterns",
    "iid_cov_m2",
    "iid_cov_m3",
    "increment_autocorr_ma_gaussian",
    "ma_equal_cov_m2",
    "random_walk_cov_m3",
    "simulate_cov",
    "truncation_lag",
    "acov_entropy_complexity",
    "acov_entropy_diseq",
    "acov_entropy_mixture",
    "complexity",
    "disequilibrium",
    "ec_point",
    "is_effectively_uniform",
    "norm_constants",
    "repair_zero_probs",
    "shannon_entropy",
    "uniform_scalings",
    "InsufficientDataError",
    "RegimeError",
    "SingularModelError",
    "DgpSpec",
    "derive_seed",
    "gct_exact_pmf",
    "gct_lag1_joint_m3",
    "gen_ar1",
    "gen_gct_patterns",
    "gen_iid_gaussian",
    "gen_ma_equal",
    "gen_ma_gaussian",
    "gen_qma1",
    "gen_random_walk",
    "gen_tear1",
    "generate",
    "spec_from_json",
    "spec_to_json",
    "EllipseSpec",
    "SegmentSpec",
    "TestResult",
    "asymptotic_line",
    "dependence_test",
    "ellipse_from_cov",
    "h_statistic",
    "hc_statistic",
    "hd_statistic",
    "mc_rejection_rate",
    "null_cov",
    "null_weights",
    "segment_from_cov",
    "standard_errors",
    "uncertainty_ellipse",
    "uncertainty_segment",
    "uniform_line",
    "lex_rank",
    "lex_unrank",
    "one_hot",
    "one_hot_series",
    "pattern_of",
    "pattern_series",
    "read_pattern_file",
    "read_series_csv",
    "read_series_text",
    "relative_frequencies",
    "write_pattern_file",
    "write_series_text",
    "PlaneCurve",
    "boundary_curves",
    "gaussian_trajectory",
    "gct_trajectory",
    "qf_cdf",
    "qf_quantile",
    "qf_sf",
    "qf_weights",
    "symmetric_eigen",
    "__version__",
]

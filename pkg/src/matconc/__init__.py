"""matconc: concentration of normalized random matrix products.

Numerical library and CLI for the product f = prod_i (I + X_i/n) of i.i.d.
bounded random matrices: its Doob martingale decomposition with certified
increment/variation bounds, four closed-form tail bounds, Monte Carlo tail
estimation with exact binomial confidence intervals, and the scalar
two-point lower-bound construction.
"""

__version__ = "0.1.0"

from ._backend import available_backends, backend_name, set_backend
from .bounds import (
    BoundParams,
    BoundValue,
    bernstein_tail,
    clamp_probability,
    freedman_tail,
    hw19_deviation,
    main_deviation,
    main_tail,
    martingale_freedman_params,
)
from .distributions import (
    MatrixDistribution,
    RandomStream,
    diagonal_rademacher,
    distribution_from_config,
    distribution_to_config,
    enumerate_outcomes,
    ginibre_clipped,
    hermitian_bounded,
    sample,
    sample_stack,
    two_point_scalar,
)
from .errors import (
    ConfigError,
    DomainError,
    EnumerationSizeError,
    HypothesisError,
    InvalidMatrixError,
    MatconcError,
    UnsupportedDistributionError,
)
from .exactbinom import binom_half_tail, ceil_threshold, clopper_pearson
from .linalg import (
    as_matrix,
    loewner_leq,
    matrix_exp,
    matrix_from_json,
    matrix_power,
    matrix_to_json,
    op_norm,
    op_norms,
)
from .martingale import (
    CertificationReport,
    MartingaleTrace,
    certify_bounds,
    decompose,
    doob_increment,
    increment_norm_bound,
    predictable_variation,
    trace_to_csv,
    variation_norm_bound,
)
from .montecarlo import (
    BoundComparison,
    LowerBoundReport,
    TailEstimate,
    bound_params_for,
    compare_bounds,
    default_t_grid,
    estimate_tail,
    lower_bound_experiment,
    write_lower_bound_csv,
    write_tail_csv,
)
from .products import as_instance, deviation, expected_product, normalized_product

__all__ = [
    "__version__",
    "available_backends",
    "backend_name",
    "set_backend",
    "BoundParams",
    "BoundValue",
    "bernstein_tail",
    "clamp_probability",
    "freedman_tail",
    "hw19_deviation",
    "main_deviation",
    "main_tail",
    "martingale_freedman_params",
    "MatrixDistribution",
    "RandomStream",
    "diagonal_rademacher",
    "distribution_from_config",
    "distribution_to_config",
    "enumerate_outcomes",
    "ginibre_clipped",
    "hermitian_bounded",
    "sample",
    "sample_stack",
    "two_point_scalar",
    "ConfigError",
    "DomainError",
    "EnumerationSizeError",
    "HypothesisError",
    "InvalidMatrixError",
    "MatconcError",
    "UnsupportedDistributionError",
    "binom_half_tail",
    "ceil_threshold",
    "clopper_pearson",
    "as_matrix",
    "loewner_leq",
    "matrix_exp",
    "matrix_from_json",
    "matrix_power",
    "matrix_to_json",
    "op_norm",
    "op_norms",
    "CertificationReport",
    "MartingaleTrace",
    "certify_bounds",
    "decompose",
    "doob_increment",
    "increment_norm_bound",
    "predictable_variation",
    "trace_to_csv",
    "variation_norm_bound",
    "BoundComparison",
    "LowerBoundReport",
    "TailEstimate",
    "bound_params_for",
    "compare_bounds",
    "default_t_grid",
    "estimate_tail",
    "lower_bound_experiment",
    "write_lower_bound_csv",
    "write_tail_csv",
    "as_instance",
    "deviation",
    "expected_product",
    "normalized_product",
]

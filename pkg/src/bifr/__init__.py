"""Banded-inverse correlated-noise factorizations for private prefix sums."""

from .calibration import CalibrationError, PrivacyBudget, delta_for_sigma, gaussian_sigma
from .catalog import (
    BANDED_INVERSE_METHODS,
    DomainError,
    FactorizationSpec,
    Method,
    binomial_coeffs_neg,
    binomial_coeffs_pos,
    inverse_bandwidth,
    inverse_coeffs,
    strategy_coeffs,
)
from .checks import CheckReport, SUITES, run_suite
from .engine import (
    CorrelatorState,
    MonteCarloEstimate,
    UnsupportedMethodError,
    clip_and_aggregate,
    engine_dense_reference,
    engine_init,
    engine_step,
    private_step,
    run_prefix_release,
)
from .metrics import RmseReport, b_operator, frobenius_ltt, rmse, rmse_from_operators
from .prng import GaussianStream, StateToken, TOKEN_BYTES
from .sensitivity import (
    ParticipationSchema,
    PreconditionError,
    sens_bruteforce,
    sens_exact,
    sens_upper_bound,
)
from .toeplitz import (
    DimensionError,
    SingularOperatorError,
    ToeplitzOperator,
    column_norms,
    identity_coeffs,
    ltt_inverse,
    ltt_multiply,
    materialize_dense,
    prefix_sum_coeffs,
)
from .tuner import SweepResult, compare, default_schema, sweep, tune_method

__version__ = "0.1.0"

__all__ = [
    "BANDED_INVERSE_METHODS",
    "CalibrationError",
    "CheckReport",
    "CorrelatorState",
    "DimensionError",
    "DomainError",
    "FactorizationSpec",
    "GaussianStream",
    "Method",
    "MonteCarloEstimate",
    "ParticipationSchema",
    "PreconditionError",
    "PrivacyBudget",
    "RmseReport",
    "SUITES",
    "SingularOperatorError",
    "StateToken",
    "SweepResult",
    "TOKEN_BYTES",
    "ToeplitzOperator",
    "UnsupportedMethodError",
    "b_operator",
    "binomial_coeffs_neg",
    "binomial_coeffs_pos",
    "clip_and_aggregate",
    "column_norms",
    "compare",
    "default_schema",
    "delta_for_sigma",
    "engine_dense_reference",
    "engine_init",
    "engine_step",
    "frobenius_ltt",
    "gaussian_sigma",
    "identity_coeffs",
    "inverse_bandwidth",
    "inverse_coeffs",
    "ltt_inverse",
    "ltt_multiply",
    "materialize_dense",
    "prefix_sum_coeffs",
    "private_step",
    "rmse",
    "rmse_from_operators",
    "run_prefix_release",
    "run_suite",
    "sens_bruteforce",
    "sens_exact",
    "sens_upper_bound",
    "strategy_coeffs",
    "sweep",
    "tune_method",
]

"""Nonparametric tests for convex-ordered families."""

from ._cxorder import (
    ConfigError,
    DomainError,
    IngestError,
    SpecError,
    critical_value,
    hill_estimate,
    interpolated_ecdf,
    l_estimate,
    os_weights,
    pi_bound,
    pp_test,
    reg_inc_beta,
    run_test,
    statistic,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "IngestError",
    "SpecError",
    "critical_value",
    "hill_estimate",
    "interpolated_ecdf",
    "l_estimate",
    "os_weights",
    "pi_bound",
    "pp_test",
    "reg_inc_beta",
    "run_test",
    "statistic",
]

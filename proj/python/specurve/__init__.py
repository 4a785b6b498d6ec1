"""Specification curve analysis: enumerate control subsets, fit, bootstrap, summarise."""

from ._specurve import (
    ConfigError,
    CurveResults,
    DataError,
    Estimator,
    NumericError,
    OutcomeMode,
    RunConfig,
    concat,
    load_results,
    run,
    stouffer,
    synthetic,
)

__all__ = [
    "ConfigError",
    "CurveResults",
    "DataError",
    "Estimator",
    "NumericError",
    "OutcomeMode",
    "RunConfig",
    "concat",
    "load_results",
    "run",
    "stouffer",
    "synthetic",
]

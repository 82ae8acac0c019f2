"""Survival probability of an insurer investing in a risky asset."""

from ._core import (
    Classification,
    Diagnostics,
    Error,
    GridSpec,
    InvalidParams,
    McEstimate,
    McOptions,
    ModelParams,
    NoSolution,
    NoSolutionReason,
    NumericalFailure,
    Refused,
    Regime,
    RegimeMismatch,
    ResidualReport,
    Solution,
    SolveOptions,
    Spacing,
    TailExponentFit,
    TailFit,
    Tolerances,
    classify_regime,
    default_horizon,
    default_time_step,
    ide_residual,
    mc_survival,
    solve,
    tail_exponent,
)

__all__ = [name for name in dir() if not name.startswith("_")]
